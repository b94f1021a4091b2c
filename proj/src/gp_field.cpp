#include "bec/gp_field.hpp"

#include <cmath>
#include <iostream>

#include "bec/fft.hpp"

namespace bec {

namespace {

constexpr double kPi = 3.14159265358979323846;

double axis_omega(double k, double h, Dispersion disp) {
  if (disp == Dispersion::continuum) return k * k;
  return (2.0 - 2.0 * std::cos(k * h)) / (h * h);
}

double total_omega(const Grid& g, Dispersion disp, double kx, double ky, double kz) {
  const double h = g.h();
  double w = axis_omega(kx, h, disp);
  if (g.dim == 3) w += axis_omega(ky, h, disp) + axis_omega(kz, h, disp);
  return w;
}

void kinetic_phase(const Grid& g, VectorXcd& values, double dt, Dispersion disp) {
  apply_multiplier(g, values, [&](double kx, double ky, double kz) {
    return std::exp(Complex(0.0, -dt * total_omega(g, disp, kx, ky, kz)));
  });
}

Field evolve_impl(const Field& phi, const EvolutionParams& p, bool hartree,
                  const StepObserver* obs) {
  p.validate(phi.grid);
  if (hartree != p.hartree_mode()) {
    throw Error(hartree ? "evolve_hartree requires a convolution kernel"
                        : "evolve_nls does not take a convolution kernel");
  }
  Field f = phi;
  const Grid& g = f.grid;
  bool warned = false;
  if (obs) (*obs)(0, 0.0, f);
  for (int step = 0; step < p.steps; ++step) {
    kinetic_phase(g, f.values, 0.5 * p.dt, p.dispersion);

    // Pointwise interaction + external phase (exact for frozen density).
    VectorXd phase(g.size());
    if (hartree) {
      VectorXd rho(g.size());
      for (long i = 0; i < g.size(); ++i) rho[i] = std::norm(f.values[i]);
      phase = convolve(g, *p.hartree_kernel, rho);
    } else {
      for (long i = 0; i < g.size(); ++i) phase[i] = p.sigma * std::norm(f.values[i]);
    }
    const double max_phase = phase.cwiseAbs().maxCoeff();
    if (std::abs(p.dt) * max_phase > kPi) {
      if (p.strict) throw Error("aliasing: dt * max interaction phase exceeds pi");
      if (!warned) {
        std::cerr << "warning: dt * max interaction phase exceeds pi\n";
        warned = true;
      }
    }
    if (p.v_ext) phase += *p.v_ext;
    for (long i = 0; i < g.size(); ++i) {
      f.values[i] *= std::exp(Complex(0.0, -p.dt * phase[i]));
    }

    kinetic_phase(g, f.values, 0.5 * p.dt, p.dispersion);
    if (obs) (*obs)(step + 1, (step + 1) * p.dt, f);
  }
  return f;
}

}  // namespace

void EvolutionParams::validate(const Grid& g) const {
  g.validate();
  if (!(dt != 0.0) || !std::isfinite(dt)) throw Error("time step must be nonzero and finite");
  if (steps < 0) throw Error("step count must be nonnegative");
  if (v_ext && v_ext->size() != g.size()) throw Error("external potential size mismatch");
  if (hartree_kernel && hartree_kernel->size() != g.size()) {
    throw Error("hartree kernel size mismatch");
  }
}

Field evolve_nls(const Field& phi, const EvolutionParams& p, const StepObserver* obs) {
  return evolve_impl(phi, p, false, obs);
}

Field evolve_hartree(const Field& phi, const EvolutionParams& p, const StepObserver* obs) {
  return evolve_impl(phi, p, true, obs);
}

double field_energy(const Field& phi, double sigma, const std::optional<VectorXd>& v_ext,
                    Dispersion dispersion) {
  const Grid& g = phi.grid;
  const double hd = std::pow(g.h(), g.dim);

  VectorXcd hat = phi.values;
  fft_forward(g, hat);
  double kinetic = 0.0;
  if (g.dim == 1) {
    for (int i = 0; i < g.m; ++i) {
      kinetic += total_omega(g, dispersion, g.k(i), 0, 0) * std::norm(hat[i]);
    }
  } else {
    long idx = 0;
    for (int i = 0; i < g.m; ++i)
      for (int j = 0; j < g.m; ++j)
        for (int l = 0; l < g.m; ++l, ++idx) {
          kinetic += total_omega(g, dispersion, g.k(i), g.k(j), g.k(l)) * std::norm(hat[idx]);
        }
  }
  kinetic *= hd / static_cast<double>(g.size());

  double potential = 0.0, quartic = 0.0;
  for (long i = 0; i < g.size(); ++i) {
    const double rho = std::norm(phi.values[i]);
    if (v_ext) potential += (*v_ext)[i] * rho;
    quartic += rho * rho;
  }
  return kinetic + potential * hd + 0.5 * sigma * quartic * hd;
}

double gp_energy(const Field& phi, double a0, const std::optional<VectorXd>& v_ext) {
  return field_energy(phi, 8.0 * kPi * a0, v_ext, Dispersion::continuum);
}

namespace {

// H phi - mu phi with H = -Lap + V_ext + 8 pi a0 |phi|^2, phi at unit mass.
VectorXcd projected_gradient(const Field& phi, double a0,
                             const std::optional<VectorXd>& v_ext) {
  const Grid& g = phi.grid;
  VectorXcd hphi = phi.values;
  apply_multiplier(g, hphi, [&](double kx, double ky, double kz) {
    return Complex(total_omega(g, Dispersion::continuum, kx, ky, kz), 0.0);
  });
  const double sigma = 8.0 * kPi * a0;
  for (long i = 0; i < g.size(); ++i) {
    double v = sigma * std::norm(phi.values[i]);
    if (v_ext) v += (*v_ext)[i];
    hphi[i] += v * phi.values[i];
  }
  const double hd = std::pow(g.h(), g.dim);
  const double mu = (phi.values.dot(hphi)).real() * hd;  // <phi, H phi>
  return hphi - mu * phi.values;
}

}  // namespace

double gp_gradient_norm(const Field& phi, double a0, const std::optional<VectorXd>& v_ext) {
  const VectorXcd r = projected_gradient(phi, a0, v_ext);
  return std::sqrt(r.squaredNorm() * std::pow(phi.grid.h(), phi.grid.dim));
}

Field minimize_gp_energy(const Grid& grid, double a0, const std::optional<VectorXd>& v_ext,
                         const MinimizeOptions& opts) {
  grid.validate();
  if (v_ext && v_ext->size() != grid.size()) throw Error("external potential size mismatch");
  const double sigma = 8.0 * kPi * a0;

  // Initial guess: Gaussian-like profile in a trap, constant otherwise.
  Field phi = Field::zero(grid);
  if (v_ext) {
    for (long i = 0; i < grid.size(); ++i) phi.values[i] = std::exp(-0.5 * (*v_ext)[i]);
  } else {
    phi.values.setConstant(1.0);
  }
  phi.normalize();

  // Stage one: renormalized imaginary-time flow, coarse to fine.
  double energy = field_energy(phi, sigma, v_ext);
  for (double dtau : {3e-2, 1e-2, 3e-3}) {
    for (int step = 0; step < opts.max_stage_steps; ++step) {
      VectorXcd& v = phi.values;
      apply_multiplier(grid, v, [&](double kx, double ky, double kz) {
        return Complex(std::exp(-0.5 * dtau * total_omega(grid, Dispersion::continuum, kx, ky, kz)),
                       0.0);
      });
      for (long i = 0; i < grid.size(); ++i) {
        double pot = sigma * std::norm(v[i]);
        if (v_ext) pot += (*v_ext)[i];
        v[i] *= std::exp(-dtau * pot);
      }
      apply_multiplier(grid, v, [&](double kx, double ky, double kz) {
        return Complex(std::exp(-0.5 * dtau * total_omega(grid, Dispersion::continuum, kx, ky, kz)),
                       0.0);
      });
      phi.normalize();
      const double next = field_energy(phi, sigma, v_ext);
      const double decrement = energy - next;
      energy = next;
      if (std::abs(decrement) < opts.decrement_tol) break;
    }
  }

  // Stage two: Sobolev-preconditioned descent on the mass sphere. The fixed
  // point is the exact discrete minimizer, free of splitting bias.
  double step_size = 1.0;
  for (int it = 0; it < opts.max_stage_steps; ++it) {
    VectorXcd r = projected_gradient(phi, a0, v_ext);
    const double rnorm = std::sqrt(r.squaredNorm() * std::pow(grid.h(), grid.dim));
    if (rnorm < opts.gradient_tol) return phi;
    apply_multiplier(grid, r, [&](double kx, double ky, double kz) {
      return Complex(1.0 / (1.0 + total_omega(grid, Dispersion::continuum, kx, ky, kz)), 0.0);
    });
    bool accepted = false;
    for (int half = 0; half < 40; ++half) {
      Field trial = phi;
      trial.values -= step_size * r;
      trial.normalize();
      const double next = field_energy(trial, sigma, v_ext);
      if (next <= energy + 1e-15 * std::abs(energy)) {
        phi = std::move(trial);
        energy = next;
        step_size = std::min(step_size * 1.2, 2.0);
        accepted = true;
        break;
      }
      step_size *= 0.5;
    }
    if (!accepted) {
      // Line search stalled at roundoff; accept if already stationary enough.
      if (rnorm < 10.0 * opts.gradient_tol) return phi;
      throw Error("iteration limit: energy minimization stalled");
    }
  }
  throw Error("iteration limit: energy minimization did not converge");
}

}  // namespace bec
