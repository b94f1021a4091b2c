#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>

#include "bec/numerics.hpp"

namespace bec {

using Complex = std::complex<double>;
using VectorXcd = Eigen::VectorXcd;
using VectorXd = Eigen::VectorXd;
using MatrixXcd = Eigen::MatrixXcd;

/// Periodic uniform grid, m points per axis on a box of side length.
struct Grid {
  int dim = 1;  // 1 or 3
  int m = 0;
  double length = 0.0;

  double h() const { return length / m; }
  long size() const;
  double x(int i) const { return i * h(); }
  /// Signed momentum of Fourier index i: 2*pi*s/length with s in [-m/2, m/2).
  double k(int i) const;
  /// Minimum-image displacement of x relative to the origin.
  double min_image(double x) const;
  void validate() const;
  bool operator==(const Grid&) const = default;
};

/// Complex single-particle field on a periodic grid. Values are flattened
/// row-major for dim = 3 (x slowest); mass convention sum |phi|^2 h^dim.
struct Field {
  Grid grid;
  VectorXcd values;

  static Field zero(const Grid& g);
  static Field constant(const Grid& g, Complex value);
  /// Plane wave e^{i k_index x} (per axis), normalized to mass 1.
  static Field plane_wave(const Grid& g, const std::array<int, 3>& mode);
  /// Sample a function of the position vector (1D passes only x).
  static Field sample(const Grid& g, const std::function<Complex(double, double, double)>& fn);

  double mass() const;
  Field& normalize();  // scales to mass 1
};

/// Real samples of a radial profile centred at the origin (min-image distance).
VectorXd sample_radial(const Grid& g, const std::function<double(double)>& radial);

/// Checkpoint I/O: grid metadata plus interleaved real/imag amplitudes.
void save_field_csv(const Field& f, const std::string& path);
Field load_field_csv(const std::string& path);
void save_field_binary(const Field& f, const std::string& path);
Field load_field_binary(const std::string& path);

}  // namespace bec
