#pragma once

#include <optional>

#include "bec/field.hpp"

namespace bec {

/// Kinetic Fourier multiplier: continuum k^2, or the second-difference
/// dispersion (2 - 2 cos(k h))/h^2 matching the hopping Laplacian of the
/// many-body lattice runs.
enum class Dispersion { continuum, lattice };

struct EvolutionParams {
  double sigma = 0.0;                      // cubic coupling
  std::optional<VectorXd> v_ext;           // external potential samples
  std::optional<VectorXd> hartree_kernel;  // convolution kernel samples (Hartree mode)
  double dt = 1e-3;
  int steps = 0;
  Dispersion dispersion = Dispersion::continuum;
  bool strict = false;  // promote the aliasing warning to an error

  bool hartree_mode() const { return hartree_kernel.has_value(); }
  void validate(const Grid& g) const;
};

/// Called after each step with (step index, time, current field); step 0 is
/// the initial state.
using StepObserver = std::function<void(int, double, const Field&)>;

/// Strang-split spectral step for i d/dt phi = -Lap phi + sigma |phi|^2 phi + V_ext phi.
Field evolve_nls(const Field& phi, const EvolutionParams& p, const StepObserver* obs = nullptr);

/// Same splitting for i d/dt phi = -Lap phi + (v * |phi|^2) phi + V_ext phi,
/// with the convolution evaluated spectrally every step.
Field evolve_hartree(const Field& phi, const EvolutionParams& p,
                     const StepObserver* obs = nullptr);

/// Energy functional sum (|grad phi|^2 + V_ext |phi|^2 + (sigma/2) |phi|^4) h^d
/// with the gradient evaluated spectrally.
double field_energy(const Field& phi, double sigma, const std::optional<VectorXd>& v_ext,
                    Dispersion dispersion = Dispersion::continuum);

/// The condensate energy functional: coupling 4 pi a0 on the quartic term.
double gp_energy(const Field& phi, double a0, const std::optional<VectorXd>& v_ext);

struct MinimizeOptions {
  double decrement_tol = 1e-10;  // stop a stage when the energy decrement per step drops below
  double gradient_tol = 1e-7;    // projected-gradient norm target at the minimizer
  int max_stage_steps = 20000;
};

/// Normalized imaginary-time flow for the energy functional; returns the
/// minimizer with unit mass. Throws after exhausting the step budget.
Field minimize_gp_energy(const Grid& grid, double a0, const std::optional<VectorXd>& v_ext,
                         const MinimizeOptions& opts = {});

/// Norm of the sphere-projected energy gradient (H phi - mu phi) at unit mass.
double gp_gradient_norm(const Field& phi, double a0, const std::optional<VectorXd>& v_ext);

}  // namespace bec
