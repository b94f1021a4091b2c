// Acceptance suite: runs every exit criterion at its stated tolerance and
// prints one pass/fail line per criterion. Nonzero exit status when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bec/experiments.hpp"
#include "bec/graphs.hpp"
#include "bec/hierarchy.hpp"
#include "bec/marginals.hpp"
#include "bec/scattering.hpp"

using namespace bec;

namespace {

constexpr double kPi = 3.14159265358979323846;

using Failure = std::optional<std::string>;

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

Field smooth_datum(const Grid& g) {
  Field f = Field::sample(g, [&](double x, double, double) {
    const double t = 2.0 * kPi * x / g.length;
    return Complex(1.0 + 0.5 * std::cos(t), 0.2 * std::sin(t));
  });
  f.normalize();
  return f;
}

double field_distance(const Field& a, const Field& b) {
  return std::sqrt((a.values - b.values).squaredNorm() * std::pow(a.grid.h(), a.grid.dim));
}

// ---------------------------------------------------------------------------

Failure criterion_scattering_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  const PotentialSpec spec{PotentialKind::soft_sphere, 2.0, 1.0, 3};
  const ScatteringSolution sol = solve_zero_energy(spec);
  const double exact = 1.0 - std::tanh(1.0);
  const double err = std::abs(sol.a0 - exact);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (err > 1e-6) return fmt("|a0 - (1 - tanh 1)| = %.3e > 1e-6", err);
  if (wall >= 1.0) return fmt("runtime %.2f s >= 1 s", wall);
  return std::nullopt;
}

Failure criterion_integral_identity() {
  for (const PotentialSpec spec : {PotentialSpec{PotentialKind::soft_sphere, 2.0, 1.0, 3},
                                   PotentialSpec{PotentialKind::smooth_bump, 1.0, 1.0, 3}}) {
    const ScatteringSolution sol = solve_zero_energy(spec);
    const double a_tail = scattering_length_tail(sol);
    const double a_int = scattering_length_integral(spec, sol);
    const double rel = std::abs(a_tail - a_int) / std::max(std::abs(a_tail), 1e-300);
    if (rel > 1e-6) return fmt("route disagreement %.3e > 1e-6", rel);
  }
  const PotentialSpec weak{PotentialKind::smooth_bump, 1e-4, 1.0, 3};
  const ScatteringSolution wsol = solve_zero_energy(weak);
  const double born = std::abs(8.0 * kPi * wsol.a0 / b0_integral(weak) - 1.0);
  if (born > 1e-3) return fmt("Born defect %.3e > 1e-3", born);
  return std::nullopt;
}

Failure criterion_scaling_law() {
  const PotentialSpec spec{PotentialKind::soft_sphere, 2.0, 1.0, 3};
  const double a0 = solve_zero_energy(spec).a0;
  for (int n : {2, 10, 100}) {
    const ScatteringSolution scaled = solve_zero_energy(ScaledPair{spec, n, 1.0});
    const double rel = std::abs(scaled.a0 * n - a0) / a0;
    if (rel > 1e-10) return fmt("N = %.0f: relative defect %.3e > 1e-10", n, rel);
  }
  return std::nullopt;
}

Failure criterion_gp_solver() {
  const auto t0 = std::chrono::steady_clock::now();
  const Grid g{1, 256, 2.0 * kPi};

  // Exact constant-field phase at t = 1.
  {
    const Field phi = Field::constant(g, Complex(1.0, 0.0));
    EvolutionParams p;
    p.sigma = 2.0;
    p.dt = 1e-3;
    p.steps = 1000;
    const Field out = evolve_nls(phi, p);
    const Complex expected = std::exp(Complex(0.0, -2.0));
    double err = 0.0;
    for (int i = 0; i < g.m; ++i) err = std::max(err, std::abs(out.values[i] - expected));
    if (err > 1e-8) return fmt("constant-field phase error %.3e > 1e-8", err);
  }

  // Mass drift over ten thousand steps.
  {
    const Field phi = smooth_datum(g);
    EvolutionParams p;
    p.sigma = 1.5;
    p.dt = 1e-3;
    p.steps = 10000;
    const double drift = std::abs(evolve_nls(phi, p).mass() - phi.mass());
    if (drift > 1e-10) return fmt("mass drift %.3e > 1e-10", drift);
  }

  // Measured splitting order.
  {
    const Field phi = smooth_datum(g);
    EvolutionParams ref;
    ref.sigma = 1.0;
    ref.dt = 6.25e-5;
    ref.steps = 8192;
    const Field reference = evolve_nls(phi, ref);
    std::vector<double> dts, errs;
    for (int scale : {1, 2, 4}) {
      EvolutionParams p;
      p.sigma = 1.0;
      p.dt = 1e-3 / scale;
      p.steps = 512 * scale;
      errs.push_back(field_distance(evolve_nls(phi, p), reference));
      dts.push_back(p.dt);
    }
    const double order = convergence_order(dts, errs);
    if (std::abs(order - 2.0) > 0.1) return fmt("splitting order %.3f outside 2.0 +- 0.1", order);
  }

  // Time reversal.
  {
    const Field phi = smooth_datum(g);
    EvolutionParams fwd;
    fwd.sigma = 1.0;
    fwd.dt = 1e-3;
    fwd.steps = 1000;
    EvolutionParams bwd = fwd;
    bwd.dt = -fwd.dt;
    const double err = field_distance(evolve_nls(evolve_nls(phi, fwd), bwd), phi);
    if (err > 1e-8) return fmt("time-reversal error %.3e > 1e-8", err);
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (wall >= 10.0) return fmt("runtime %.2f s >= 10 s", wall);
  return std::nullopt;
}

Failure criterion_gp_minimizer() {
  const Grid g{1, 256, 16.0};
  const VectorXd trap = harmonic_trap(g, 1.0);
  const Field ground = minimize_gp_energy(g, 0.0, trap);
  const double energy = gp_energy(ground, 0.0, trap);
  if (std::abs(energy - 1.0) > 1e-4) return fmt("energy %.6f misses 1.0 by > 1e-4", energy);

  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 5; ++trial) {
    VectorXcd dir(g.size());
    for (long i = 0; i < g.size(); ++i) dir[i] = Complex(normal(rng), normal(rng));
    const Complex overlap = ground.values.dot(dir) * g.h();
    dir -= overlap * ground.values;
    dir /= std::sqrt(dir.squaredNorm() * g.h());
    const double eps = 1e-5;
    auto energy_at = [&](double t) {
      Field f = ground;
      f.values = std::cos(t) * ground.values + std::sin(t) * dir;
      return gp_energy(f, 0.0, trap);
    };
    const double deriv = (energy_at(eps) - energy_at(-eps)) / (2.0 * eps);
    if (std::abs(deriv) > 1e-6) return fmt("directional derivative %.3e > 1e-6", deriv);
  }
  return std::nullopt;
}

Failure criterion_representation_equivalence() {
  const int m = 24;
  const Grid g{1, m, 6.0};
  const Field phi = smooth_datum(g);
  const ScaledPair pair{PotentialSpec{PotentialKind::smooth_bump, 3.0, 1.5, 1}, 3, 0.5};
  LatticeSpec lat{m, 6.0, std::nullopt};

  const FockState fock0 = product_state(phi, 3);
  LatticeHamiltonian hf(lat, fock0.basis, pair);
  const FockState fock_t = evolve_manybody(fock0, hf, 5e-3, 50, KrylovOptions{16, 1e-12});

  DenseNBody dense0 = dense_product(phi, 3);
  symmetrize(dense0);
  DenseHamiltonian hd(lat, 3, pair);
  const DenseNBody dense_t = evolve_dense(dense0, hd, 5e-3, 50, KrylovOptions{16, 1e-12});

  const double dist = trace_distance(reduce(fock_t, 1), reduce(dense_t, 1));
  if (dist > 1e-8) return fmt("marginal distance %.3e > 1e-8 at t = 0.25", dist);
  return std::nullopt;
}

Failure criterion_convergence_sweep() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg;
  cfg.kind = "mb_converge";
  cfg.potential = PotentialSpec{PotentialKind::smooth_bump, 3.0, 1.5, 1};
  cfg.m = 24;
  cfg.length = 6.0;
  cfg.n_min = 2;
  cfg.n_max = 6;
  cfg.beta = 0.5;
  cfg.t_final = 0.5;
  cfg.dt = 1e-3;
  cfg.mb_dt = 5e-3;
  const ResultRecord rec = run_experiment(cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const auto& [name, ok] : rec.assertions) {
    if (!ok) return "assertion failed: " + name;
  }
  if (wall > 600.0) return fmt("runtime %.1f s > 600 s", wall);
  return std::nullopt;
}

Failure criterion_reduced_equation() {
  // Interacting canonical run: residual within the step-error model and
  // refining at first order or better.
  ExperimentConfig cfg;
  cfg.kind = "hierarchy_check";
  cfg.potential = PotentialSpec{PotentialKind::smooth_bump, 3.0, 1.5, 1};
  cfg.m = 24;
  cfg.length = 6.0;
  cfg.n_max = 4;
  cfg.beta = 0.5;
  cfg.dt = 2e-3;
  const ResultRecord rec = run_experiment(cfg);
  for (const auto& [name, ok] : rec.assertions) {
    if (!ok && name.rfind("residual", 0) == 0) return "assertion failed: " + name;
  }

  // Noninteracting control refines at second order.
  const Grid g{1, 12, 6.0};
  const FockState psi = product_state(smooth_datum(g), 2);
  LatticeSpec lat{12, 6.0, std::nullopt};
  LatticeHamiltonian h(lat, psi.basis, ScaledPair{PotentialSpec{}, 2, 0.5});
  std::vector<double> dts, errs;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    const MarginalTrajectory traj =
        record_trajectory(psi, h, dt, 4, true, KrylovOptions{16, 1e-13});
    double worst = 0.0;
    for (double r : bbgky_residual_k1(traj)) worst = std::max(worst, r);
    dts.push_back(dt);
    errs.push_back(worst);
  }
  const double order = convergence_order(dts, errs);
  if (order < 1.8) return fmt("free-run refinement order %.2f < 1.8", order);
  return std::nullopt;
}

Failure criterion_factorized_hierarchy() {
  const Grid g{1, 24, 2.0 * kPi};
  const double sigma = 0.5;
  const Field phi = smooth_datum(g);
  EvolutionParams p;
  p.sigma = sigma;
  p.dt = 1e-3;
  p.steps = 100;
  std::vector<Field> snaps;
  StepObserver obs = [&](int step, double, const Field& f) {
    if (step >= 98) snaps.push_back(f);
  };
  evolve_nls(phi, p, &obs);
  for (int k : {1, 2}) {
    const double res = factorized_hierarchy_residual(snaps[0], snaps[1], snaps[2], p.dt, sigma, k);
    if (res > 1e-6) return fmt("order-%0.0f residual %.3e > 1e-6", k, res);
    const double wrong =
        factorized_hierarchy_residual(snaps[0], snaps[1], snaps[2], p.dt, sigma + 1.0, k);
    if (wrong <= 0.1) return fmt("order-%0.0f mismatch residual %.3e <= 0.1", k, wrong);
  }
  return std::nullopt;
}

Failure criterion_collision_operator() {
  const Grid g{1, 16, 6.0};
  const Field phi = smooth_datum(g);
  const double coupling = 8.0 * kPi * 0.23;
  const MarginalDensity g2 = projector_pair(phi);
  const MatrixXcd out = collision_apply(g2, coupling);
  double form_err = 0.0;
  for (int x = 0; x < g.m; ++x)
    for (int y = 0; y < g.m; ++y) {
      const Complex expected = Complex(0.0, coupling) *
                               (std::norm(phi.values[x]) - std::norm(phi.values[y])) *
                               phi.values[x] * std::conj(phi.values[y]);
      form_err = std::max(form_err, std::abs(out(x, y) - expected));
    }
  if (form_err > 1e-10) return fmt("factorized closed form defect %.3e > 1e-10", form_err);

  const double trace_err = std::abs(out.trace() * g.h());
  if (trace_err > 1e-12) return fmt("trace %.3e exceeds 1e-12", trace_err);

  // Commutator reality structure: i (output) anti-Hermitian, i.e. the kernel
  // itself Hermitian.
  const MatrixXcd iout = Complex(0.0, 1.0) * out;
  const double anti = (iout + iout.adjoint()).cwiseAbs().maxCoeff();
  if (anti > 1e-12) return fmt("i*kernel anti-Hermiticity defect %.3e > 1e-12", anti);
  return std::nullopt;
}

Failure criterion_graph_combinatorics() {
  const auto t0 = std::chrono::steady_clock::now();
  for (int k = 1; k <= 3; ++k) {
    for (int m = 0; m <= 4; ++m) {
      const auto graphs = enumerate_graphs(k, m);
      const DuhamelCounts counts = duhamel_counts(k, m);
      if (graphs.size() > counts.graph_bound) {
        return fmt("count %g exceeds the 2^{4m+k} bound at k+4m = %g",
                   static_cast<double>(graphs.size()), 4.0 * m + k);
      }
      for (const auto& gr : graphs) {
        const PairingReport report = validate_pairing(gr);
        if (!report.ok) return "graph invariant failed: " + report.violated;
        if (report.edges != 2 * k + 3 * m) return "edge count 2k+3m failed";
        if (report.leaves != 2 * k + 2 * m) return "leaf count 2k+2m failed";
        if (!report.leaf_pairing_perfect) return "leaf pairing not a perfect matching";
      }
      // Independent factorial cross-check of the summand count.
      unsigned long long fact_mk = 1, fact_k = 1;
      for (int i = 2; i <= m + k; ++i) fact_mk *= i;
      for (int i = 2; i <= k; ++i) fact_k *= i;
      if (counts.xi_summands != fact_mk / fact_k) return "summand count (m+k)!/k! failed";
    }
  }
  for (int k = 1; k <= 10; ++k) {
    for (int m = 0; m <= 10; ++m) {
      const PowerCounting pc = power_counting(k, m);
      if (pc.total != -(5 * k + m) ||
          pc.total != pc.volume + pc.leaf + pc.propagator + pc.observable) {
        return "power-counting identity failed";
      }
    }
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (wall >= 30.0) return fmt("runtime %.1f s >= 30 s", wall);
  return std::nullopt;
}

Failure criterion_f_bounds() {
  std::vector<double> lows;
  for (double v0 : {0.01, 0.02, 0.04}) {
    const PotentialSpec spec{PotentialKind::soft_sphere, v0, 1.0, 3};
    const ScatteringSolution sol = solve_zero_energy(spec);
    const double alpha = alpha_measure(spec);
    const FBoundReport rep = verify_f_bounds(sol, alpha);  // enforces f <= 1, monotone
    if (1.0 - sol.f0 > rep.c_low * alpha * (1.0 + 1e-12)) {
      return fmt("deviation exceeds c_low * alpha at v0 = %.3f", v0);
    }
    lows.push_back(rep.c_low);
  }
  for (double c : lows) {
    if (std::abs(c - lows[0]) > 0.2 * lows[0]) {
      return fmt("c_low drifts by more than 20%%: %.4f vs %.4f", c, lows[0]);
    }
  }
  return std::nullopt;
}

Failure criterion_energy_ratio_probe() {
  // Noninteracting product case: exact discrete closed form and ratio >= 1.
  {
    const Grid g{1, 16, 8.0};
    const Field phi = smooth_datum(g);
    LatticeSpec lat{16, 8.0, std::nullopt};
    DenseNBody psi = dense_product(phi, 2);
    DenseHamiltonian h(lat, 2, ScaledPair{PotentialSpec{}, 2, 0.5});
    const EnergyRatioProbe probe = energy_ratio_probe(psi, h);
    if (!probe.ratio || *probe.ratio < 1.0) {
      return fmt("free product ratio %.6f < 1", probe.ratio.value_or(-1.0));
    }
  }
  // Interacting two-body ground state at small alpha: ratio stable under grid
  // refinement. A weak trap keeps the state off the minimum-image seam, where
  // the scaled tail of the correlation function has a derivative kink.
  std::vector<double> ratios;
  for (int m : {24, 48}) {
    const double length = 6.0;
    const Grid grid{1, m, length};
    LatticeSpec lat{m, length, harmonic_trap(grid, 0.5)};
    const ScaledPair pair{PotentialSpec{PotentialKind::soft_sphere, 0.02, 1.0, 1}, 2, 0.0};
    DenseHamiltonian h(lat, 2, pair);
    auto apply_op = [&](const VectorXcd& in, VectorXcd& out) { h.apply(in, out); };
    const auto [e0, vec] = lowest_eigenpair(apply_op, static_cast<long>(m) * m, 400);
    DenseNBody psi;
    psi.lattice = lat;
    psi.n = 2;
    psi.tensor = vec;

    const PotentialSpec seed3d{PotentialKind::soft_sphere, 0.02, 1.0, 3};
    const ScatteringSolution sol = solve_zero_energy(seed3d);
    const CorrelationFunction f = build_correlation(sol, 2);
    const EnergyRatioProbe probe = energy_ratio_probe(psi, h, &f);
    if (!probe.ratio) return "interacting probe degenerated: " + probe.note;
    ratios.push_back(*probe.ratio);
  }
  const double rel = std::abs(ratios[1] - ratios[0]) / ratios[0];
  if (rel > 0.10) return fmt("ratio drifts %.1f%% > 10%% under refinement", 100.0 * rel);
  return std::nullopt;
}

Failure criterion_determinism() {
  {
    ExperimentConfig cfg;
    cfg.kind = "scattering";
    cfg.potential = PotentialSpec{PotentialKind::smooth_bump, 1.0, 1.0, 3};
    if (run_experiment(cfg).metrics_bytes() != run_experiment(cfg).metrics_bytes()) {
      return std::string("scattering metrics differ between reruns");
    }
  }
  {
    ExperimentConfig cfg;
    cfg.kind = "graphs";
    cfg.k_max = 2;
    cfg.m_max = 3;
    if (run_experiment(cfg).metrics_bytes() != run_experiment(cfg).metrics_bytes()) {
      return std::string("graph metrics differ between reruns");
    }
  }
  {
    ExperimentConfig cfg;
    cfg.kind = "mb_converge";
    cfg.potential = PotentialSpec{PotentialKind::smooth_bump, 3.0, 1.5, 1};
    cfg.m = 16;
    cfg.length = 6.0;
    cfg.n_min = 2;
    cfg.n_max = 3;
    cfg.t_final = 0.1;
    cfg.seed = 42;
    if (run_experiment(cfg).metrics_bytes() != run_experiment(cfg).metrics_bytes()) {
      return std::string("many-body metrics differ between reruns");
    }
  }
  return std::nullopt;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Failure()> run;
  };
  const std::vector<Criterion> criteria = {
      {"01 scattering oracle", criterion_scattering_oracle},
      {"02 integral identity and Born limit", criterion_integral_identity},
      {"03 scaling law a0/N", criterion_scaling_law},
      {"04 field solver (phase, mass, order, reversal)", criterion_gp_solver},
      {"05 ground-state minimizer", criterion_gp_minimizer},
      {"06 representation equivalence", criterion_representation_equivalence},
      {"07 convergence sweep N = 2..6", criterion_convergence_sweep},
      {"08 reduced-equation residual", criterion_reduced_equation},
      {"09 factorized hierarchy residual", criterion_factorized_hierarchy},
      {"10 collision operator", criterion_collision_operator},
      {"11 graph combinatorics", criterion_graph_combinatorics},
      {"12 correlation-function bounds", criterion_f_bounds},
      {"13 second-moment probe", criterion_energy_ratio_probe},
      {"14 determinism", criterion_determinism},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Failure failure;
    try {
      failure = criterion.run();
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (failure) {
      ++failures;
      std::printf("[FAIL] %s (%.1f s): %s\n", criterion.name, wall, failure->c_str());
    } else {
      std::printf("[PASS] %s (%.1f s)\n", criterion.name, wall);
    }
    std::fflush(stdout);
  }
  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
