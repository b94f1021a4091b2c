#include "bec/scattering.hpp"

#include <algorithm>
#include <cmath>

namespace bec {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct RadialProblem {
  std::function<double(double)> potential;  // W(r), compact support
  double r_support = 0.0;
};

struct IntegrationPass {
  std::vector<double> u, du;  // on the uniform interior grid, raw slope u'(0)=1
};

// Classical RK4 on u'' = (1/2) W(r) u over [0, r_support] with n steps.
IntegrationPass integrate_interior(const RadialProblem& prob, int n) {
  IntegrationPass pass;
  pass.u.resize(n + 1);
  pass.du.resize(n + 1);
  const double h = prob.r_support / n;
  double u = 0.0, v = 1.0;
  pass.u[0] = u;
  pass.du[0] = v;
  auto c = [&](double r) { return 0.5 * prob.potential(r); };
  for (int i = 0; i < n; ++i) {
    const double r = i * h;
    const double c1 = c(r), c2 = c(r + 0.5 * h), c4 = c(r + h);
    const double k1u = v, k1v = c1 * u;
    const double k2u = v + 0.5 * h * k1v, k2v = c2 * (u + 0.5 * h * k1u);
    const double k3u = v + 0.5 * h * k2v, k3v = c2 * (u + 0.5 * h * k2u);
    const double k4u = v + h * k3v, k4v = c4 * (u + h * k3u);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    pass.u[i + 1] = u;
    pass.du[i + 1] = v;
  }
  return pass;
}

ScatteringSolution solve_radial(const PotentialSpec& spec, const RadialProblem& prob,
                                double r_max, double tol) {
  if (r_max <= 0.0) r_max = 20.0 * prob.r_support;
  if (r_max <= prob.r_support) {
    throw Error("invalid domain: r_max must exceed the potential support");
  }

  int n = 512;
  IntegrationPass coarse = integrate_interior(prob, n);
  IntegrationPass fine;
  double residual = 0.0;
  const int max_n = 1 << 17;
  while (true) {
    fine = integrate_interior(prob, 2 * n);
    double diff = 0.0, scale = 0.0;
    for (int i = 0; i <= n; ++i) {
      diff = std::max(diff, std::abs(coarse.u[i] - fine.u[2 * i]));
      scale = std::max(scale, std::abs(fine.u[2 * i]));
    }
    residual = diff / std::max(scale, 1e-300);
    n *= 2;
    if (residual < tol || n >= max_n) break;
    coarse = std::move(fine);
  }

  // Normalize so that the exact tail reads u(r) = r - a0.
  const double slope = fine.du[n];
  if (!(slope > 0.0)) throw Error("zero-energy solution lost positivity of u'");
  const double a0 = prob.r_support - fine.u[n] / slope;

  ScatteringSolution sol;
  sol.spec = spec;
  sol.r_support = prob.r_support;
  sol.residual = residual;
  sol.a0 = a0;
  sol.f0 = fine.du[0] / slope;

  const double h = prob.r_support / n;
  const int n_total = static_cast<int>(std::ceil(r_max / h));
  sol.r_max = n_total * h;
  sol.r.resize(n_total + 1);
  sol.u.resize(n_total + 1);
  sol.du.resize(n_total + 1);
  for (int i = 0; i <= n_total; ++i) {
    const double r = i * h;
    sol.r[i] = r;
    if (i <= n) {
      sol.u[i] = fine.u[i] / slope;
      sol.du[i] = fine.du[i] / slope;
    } else {
      sol.u[i] = r - a0;  // exact linear tail beyond compact support
      sol.du[i] = 1.0;
    }
  }
  // Positivity of u on r > 0 (repulsive case).
  for (int i = 1; i <= n_total; ++i) {
    if (!(sol.u[i] > 0.0)) throw Error("zero-energy solution is not positive");
  }
  return sol;
}

}  // namespace

double ScatteringSolution::u_at(double rr) const {
  if (rr <= 0.0) return 0.0;
  if (rr >= r_support) return rr - a0;
  const double h = r[1] - r[0];
  const size_t i = std::min(r.size() - 2, static_cast<size_t>(rr / h));
  const double t = (rr - r[i]) / h;
  // Cubic Hermite on [r_i, r_{i+1}].
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  return h00 * u[i] + h * h10 * du[i] + h01 * u[i + 1] + h * h11 * du[i + 1];
}

double ScatteringSolution::f(double rr) const {
  rr = std::abs(rr);
  if (rr >= r_support) return (rr - a0) / rr;
  if (rr < 1e-12 * r_support) return f0;
  return u_at(rr) / rr;
}

ScatteringSolution solve_zero_energy(const PotentialSpec& spec, double r_max, double tol) {
  spec.validate();
  if (spec.dim != 3) throw Error("zero-energy scattering requires a 3D profile");
  if (tol <= 0.0) throw Error("tolerance must be positive");
  RadialProblem prob;
  prob.potential = [spec](double r) { return spec.radial(r); };
  prob.r_support = spec.radius;
  return solve_radial(spec, prob, r_max, tol);
}

ScatteringSolution solve_zero_energy(const ScaledPair& pair, double r_max, double tol) {
  pair.validate();
  if (pair.base.dim != 3) throw Error("zero-energy scattering requires a 3D profile");
  RadialProblem prob;
  prob.potential = [pair](double r) { return scaled_eval(pair, r); };
  prob.r_support = pair.support_radius();
  return solve_radial(pair.base, prob, r_max, tol);
}

double scattering_length_tail(const ScatteringSolution& sol, double fit_tol) {
  const double lo = 1.5 * sol.r_support;
  std::vector<double> xs, ys;
  for (size_t i = 0; i < sol.r.size(); ++i) {
    if (sol.r[i] > lo) {
      xs.push_back(sol.r[i]);
      ys.push_back(sol.u[i]);
    }
  }
  if (xs.size() < 4) throw Error("invalid domain: tail window too small (increase r_max)");
  const LineFit fit = fit_line(xs, ys);
  const double scale = std::max(1.0, std::abs(xs.back()));
  if (fit.rms > fit_tol * scale) {
    throw Error("tail not linear: fit residual " + std::to_string(fit.rms));
  }
  return -fit.intercept / fit.slope;
}

double scattering_length_integral(const PotentialSpec& spec, const ScatteringSolution& sol) {
  if (spec.is_zero()) return 0.0;
  // (1/8pi) \int V f = (1/2) \int_0^R V(r) u(r) r dr on the solution grid (Simpson).
  const double h = sol.r[1] - sol.r[0];
  size_t n_int = static_cast<size_t>(std::llround(sol.r_support / h));
  n_int = std::min(n_int, sol.r.size() - 1);
  if (n_int % 2 == 1) --n_int;
  auto g = [&](size_t i) { return spec.radial(sol.r[i]) * sol.u[i] * sol.r[i]; };
  double acc = g(0) + g(n_int);
  for (size_t i = 1; i < n_int; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * g(i);
  return 0.5 * acc * h / 3.0;
}

CorrelationFunction build_correlation(const ScatteringSolution& sol, int n) {
  if (n < 1) throw Error("correlation scale must be >= 1");
  return CorrelationFunction{sol, n};
}

double CorrelationFunction::operator()(double xnorm) const {
  const double r = n * std::abs(xnorm);
  if (r >= solution.r_support) {
    if (r == 0.0) return solution.f0;
    return 1.0 - solution.a0 / r;
  }
  return solution.f(r);
}

FBoundReport verify_f_bounds(const ScatteringSolution& sol, double alpha) {
  FBoundReport report;
  if (alpha == 0.0) return report;  // f == 1, all constants degenerate to zero
  if (alpha < 0.0) throw Error("alpha must be nonnegative");

  const int n = 4096;
  const double d = sol.r_max / n;
  std::vector<double> fv(n + 1);
  for (int i = 0; i <= n; ++i) fv[i] = sol.f(i * d);

  for (int i = 0; i <= n; ++i) {
    if (fv[i] > 1.0 + 1e-12) throw Error("f bound violated: f exceeds 1");
    if (i > 0 && fv[i] < fv[i - 1] - 1e-12) throw Error("f bound violated: f not monotone");
  }

  report.c_low = (1.0 - sol.f0) / alpha;
  for (int i = 1; i < n; ++i) {
    const double r = i * d;
    const double fp = (fv[i + 1] - fv[i - 1]) / (2.0 * d);
    const double fpp = (fv[i + 1] - 2.0 * fv[i] + fv[i - 1]) / (d * d);
    report.c_grad = std::max(report.c_grad, std::abs(fp) * r / alpha);
    report.c_hess = std::max(report.c_hess, std::abs(fpp) * r * r / alpha);
  }
  return report;
}

double coupling_constant(const PotentialSpec& spec, double beta) {
  spec.validate();
  if (beta <= 0.0 || beta > 1.0) throw Error("beta out of range (0, 1]");
  if (spec.is_zero()) return 0.0;
  if (beta == 1.0) {
    const ScatteringSolution sol = solve_zero_energy(spec);
    return 8.0 * kPi * sol.a0;
  }
  return b0_integral(spec);
}

nlohmann::json scattering_summary(const PotentialSpec& spec, const ScatteringSolution& sol) {
  return nlohmann::json{{"a0_tail", scattering_length_tail(sol)},
                        {"a0_integral", scattering_length_integral(spec, sol)},
                        {"b0", b0_integral(spec)},
                        {"alpha", alpha_measure(spec)},
                        {"f0", sol.f0}};
}

}  // namespace bec
