#pragma once

#include <vector>

#include "bec/potentials.hpp"
#include "json.hpp"

namespace bec {

/// Radial zero-energy solution u(r) = r*f(r) of -u'' + (1/2)V(r)u = 0,
/// normalized so that u(r) = r - a0 beyond the support of V.
struct ScatteringSolution {
  PotentialSpec spec;
  double r_support = 0.0;  // support radius of V (or of the scaled pair)
  double r_max = 0.0;
  std::vector<double> r;   // uniform grid on [0, r_max]
  std::vector<double> u;   // u values
  std::vector<double> du;  // u' values (for Hermite interpolation)
  double a0 = 0.0;
  double f0 = 1.0;          // f(0)
  double residual = 0.0;    // sup-norm change in the final grid-doubling step

  double f(double rr) const;        // f(r) = u(r)/r, exact tail (r-a0)/r beyond support
  double u_at(double rr) const;     // Hermite-interpolated u
};

/// Integrates the radial zero-energy equation outward and normalizes to the
/// exact linear tail. Requires a 3D profile and r_max beyond the support.
ScatteringSolution solve_zero_energy(const PotentialSpec& spec, double r_max = 0.0,
                                     double tol = 1e-12);

/// Same problem for the scaled pair w(x) = N^{3 beta - 1} V(N^beta x).
ScatteringSolution solve_zero_energy(const ScaledPair& pair, double r_max = 0.0,
                                     double tol = 1e-12);

/// a0 from a least-squares fit of u(r) = r - a0 over the tail window.
/// Throws if the tail fit residual exceeds the linearity tolerance.
double scattering_length_tail(const ScatteringSolution& sol, double fit_tol = 1e-8);

/// a0 from the identity 8*pi*a0 = \int V f, evaluated on the solution grid.
double scattering_length_integral(const PotentialSpec& spec, const ScatteringSolution& sol);

/// Scaled correlation function f_N(x) = f(N|x|), with the exact tail
/// 1 - a0/(N|x|) beyond support/N.
struct CorrelationFunction {
  ScatteringSolution solution;
  int n = 1;

  double operator()(double xnorm) const;
};

CorrelationFunction build_correlation(const ScatteringSolution& sol, int n);

/// Smallest constants with 1 - c_low*alpha <= f <= 1, |f'(r)| <= c_grad*alpha/r,
/// |f''(r)| <= c_hess*alpha/r^2 over the grid (derivatives by centered differences).
struct FBoundReport {
  double c_low = 0.0;
  double c_grad = 0.0;
  double c_hess = 0.0;
};

FBoundReport verify_f_bounds(const ScatteringSolution& sol, double alpha);

/// Effective nonlinearity of the scaling family: 8*pi*a0 at beta = 1,
/// b0 = \int V for 0 < beta < 1.
double coupling_constant(const PotentialSpec& spec, double beta);

/// Summary record {a0_tail, a0_integral, b0, alpha, f0}.
nlohmann::json scattering_summary(const PotentialSpec& spec, const ScatteringSolution& sol);

}  // namespace bec
