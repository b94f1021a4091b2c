#pragma once

#include "bec/field.hpp"

namespace bec {

/// In-place DFT of a flattened grid array (unnormalized forward; backward
/// divides by the total size). Plans are cached per grid shape.
void fft_forward(const Grid& g, VectorXcd& values);
void fft_backward(const Grid& g, VectorXcd& values);

/// Applies a Fourier multiplier phi_hat(k) *= fn(kx, ky, kz) in place
/// (1D passes kx only, with ky = kz = 0).
void apply_multiplier(const Grid& g, VectorXcd& values,
                      const std::function<Complex(double, double, double)>& fn);

/// Periodic convolution with lattice measure: (kernel * rho)(x) = h^dim sum_y kernel(x-y) rho(y).
VectorXd convolve(const Grid& g, const VectorXd& kernel, const VectorXd& rho);

}  // namespace bec
