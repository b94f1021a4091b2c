#include "bec/experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bec/graphs.hpp"
#include "bec/hierarchy.hpp"
#include "bec/marginals.hpp"
#include "bec/scattering.hpp"

namespace bec {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr const char* kVersionTag = "beclab 1.0";

std::string csv_join(const std::vector<std::string>& cells) {
  std::string out;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ",";
    out += cells[i];
  }
  return out + "\n";
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void assert_on(ResultRecord& rec, const std::string& name, bool ok) {
  rec.assertions.emplace_back(name, ok);
}

double effective_coupling(const ExperimentConfig& cfg) {
  if (cfg.sigma_override != 0.0) return cfg.sigma_override;
  return coupling_constant(cfg.potential, cfg.beta);
}

// delta_N = Tr | gamma1_{N,t} - |phi_t><phi_t| | for one particle count.
struct ConvergenceCell {
  double delta = 0.0;
  double delta_wrong = 0.0;
  double condensate = 0.0;
  double hk = 0.0;
};

ConvergenceCell converge_cell(const ExperimentConfig& cfg, int n, double sigma,
                              double sigma_wrong, const Field& phi0,
                              const std::optional<VectorXd>& trap_mb,
                              const std::optional<VectorXd>& trap_nls) {
  const Grid g = phi0.grid;
  LatticeSpec lat{cfg.m, cfg.length, trap_mb};
  const ScaledPair pair{cfg.potential, n, cfg.beta};

  const FockState psi0 = product_state(phi0, n);
  LatticeHamiltonian h(lat, psi0.basis, pair);
  const int mb_steps = std::max(1, static_cast<int>(std::llround(cfg.t_final / cfg.mb_dt)));
  const FockState psi_t =
      evolve_manybody(psi0, h, cfg.t_final / mb_steps, mb_steps, KrylovOptions{16, 1e-11});
  const MarginalDensity g1 = reduce(psi_t, 1);

  EvolutionParams p;
  p.sigma = sigma;
  p.dt = cfg.dt;
  p.steps = std::max(1, static_cast<int>(std::llround(cfg.t_final / cfg.dt)));
  p.dispersion = Dispersion::lattice;  // matches the hopping Laplacian
  p.v_ext = trap_nls;
  p.strict = cfg.strict;
  const Field phi_t = evolve_nls(phi0, p);

  ConvergenceCell cell;
  cell.delta = trace_distance(g1, projector(phi_t));
  cell.condensate = condensate_fraction(g1).first;
  cell.hk = hk_norm(g1);
  if (sigma_wrong != sigma) {
    EvolutionParams pw = p;
    pw.sigma = sigma_wrong;
    cell.delta_wrong = trace_distance(g1, projector(evolve_nls(phi0, pw)));
  }
  return cell;
}

ResultRecord run_scattering(const ExperimentConfig& cfg) {
  ResultRecord rec;
  PotentialSpec spec = cfg.potential;
  if (spec.dim != 3) {
    spec.dim = 3;  // the zero-energy problem is the 3D radial one
  }
  const ScatteringSolution sol = solve_zero_energy(spec);
  const nlohmann::json summary = scattering_summary(spec, sol);
  rec.metrics = summary;
  rec.metrics["residual"] = sol.residual;

  std::string csv = "r,u,f\n";
  for (size_t i = 0; i < sol.r.size(); i += 8) {
    csv += csv_join({num(sol.r[i]), num(sol.u[i]), num(sol.f(sol.r[i]))});
  }
  rec.tables.emplace_back("scattering_solution", csv);

  const double a_tail = summary.at("a0_tail").get<double>();
  const double a_int = summary.at("a0_integral").get<double>();
  const double scale = std::max(std::abs(a_tail), 1e-3 * spec.radius);
  assert_on(rec, "two_route_agreement", std::abs(a_tail - a_int) <= 1e-6 * scale);
  return rec;
}

ResultRecord run_gp_evolve(const ExperimentConfig& cfg) {
  ResultRecord rec;
  const Grid g{1, cfg.m, cfg.length};
  const Field phi0 = canonical_field(g);
  const double sigma = cfg.sigma_override != 0.0 ? cfg.sigma_override : 1.0;

  EvolutionParams p;
  p.sigma = sigma;
  p.dt = cfg.dt;
  p.steps = std::max(1, static_cast<int>(std::llround(cfg.t_final / cfg.dt)));
  p.strict = cfg.strict;

  std::string csv = "t,mass,energy\n";
  const int stride = std::max(1, p.steps / 64);
  StepObserver obs = [&](int step, double t, const Field& f) {
    if (step % stride == 0 || step == p.steps) {
      csv += csv_join({num(t), num(f.mass()), num(field_energy(f, sigma, std::nullopt))});
    }
  };
  const Field phi_t = evolve_nls(phi0, p, &obs);
  rec.tables.emplace_back("gp_series", csv);

  const double mass_drift = std::abs(phi_t.mass() - phi0.mass());
  const double e0 = field_energy(phi0, sigma, std::nullopt);
  const double e1 = field_energy(phi_t, sigma, std::nullopt);
  rec.metrics["sigma"] = sigma;
  rec.metrics["mass_drift"] = mass_drift;
  rec.metrics["energy_rel_drift"] = std::abs(e1 - e0) / std::max(std::abs(e0), 1e-300);
  assert_on(rec, "mass_conservation", mass_drift < 1e-10 * std::max(1.0, p.steps / 1e4));
  assert_on(rec, "energy_conservation", std::abs(e1 - e0) / std::abs(e0) < 1e-6);
  return rec;
}

ResultRecord run_gp_minimize(const ExperimentConfig& cfg) {
  ResultRecord rec;
  const Grid g{1, cfg.m, cfg.length};
  const VectorXd trap = harmonic_trap(g, cfg.trap_strength);
  const Field ground = minimize_gp_energy(g, cfg.a0, trap);
  const double energy = gp_energy(ground, cfg.a0, trap);
  const double grad = gp_gradient_norm(ground, cfg.a0, trap);
  rec.metrics["energy"] = energy;
  rec.metrics["gradient_norm"] = grad;
  assert_on(rec, "stationarity", grad <= 1e-6);

  std::string csv = "x,re,im,density\n";
  for (int i = 0; i < g.m; ++i) {
    csv += csv_join({num(g.x(i)), num(ground.values[i].real()), num(ground.values[i].imag()),
                     num(std::norm(ground.values[i]))});
  }
  rec.tables.emplace_back("ground_state", csv);
  return rec;
}

ResultRecord run_mb_converge(const ExperimentConfig& cfg) {
  ResultRecord rec;
  const Grid g{1, cfg.m, cfg.length};
  const Field phi0 = canonical_field(g);
  const double sigma = effective_coupling(cfg);
  rec.metrics["sigma"] = sigma;

  std::string csv = "n,delta,delta_wrong_coupling,condensate_fraction\n";
  std::vector<double> deltas, deltas_wrong;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    const ConvergenceCell cell =
        converge_cell(cfg, n, sigma, 2.0 * sigma, phi0, std::nullopt, std::nullopt);
    deltas.push_back(cell.delta);
    deltas_wrong.push_back(cell.delta_wrong);
    csv += csv_join({std::to_string(n), num(cell.delta), num(cell.delta_wrong),
                     num(cell.condensate)});
    rec.metrics["delta_" + std::to_string(n)] = cell.delta;
    rec.metrics["delta_wrong_" + std::to_string(n)] = cell.delta_wrong;
    rec.metrics["condensate_" + std::to_string(n)] = cell.condensate;
    rec.metrics["hk_norm_" + std::to_string(n)] = cell.hk;
  }
  rec.tables.emplace_back("convergence", csv);

  bool decreasing = true;
  for (size_t i = 1; i < deltas.size(); ++i) decreasing &= deltas[i] < deltas[i - 1];
  assert_on(rec, "delta_strictly_decreasing", decreasing);
  assert_on(rec, "delta_last_below_first", deltas.back() < deltas.front());
  bool control = true;
  for (size_t i = 0; i < deltas.size(); ++i) {
    const int n = cfg.n_min + static_cast<int>(i);
    if (n >= 3) control &= deltas_wrong[i] > deltas[i];
  }
  assert_on(rec, "wrong_coupling_control", control);
  return rec;
}

ResultRecord run_trap_release(const ExperimentConfig& cfg) {
  ResultRecord rec;
  const Grid g{1, cfg.m, cfg.length};
  const VectorXd trap = harmonic_trap(g, cfg.trap_strength);
  const double sigma = effective_coupling(cfg);
  const double a0_eff = sigma / (8.0 * kPi);
  const Field ground = minimize_gp_energy(g, a0_eff, trap);
  rec.metrics["sigma"] = sigma;
  rec.metrics["trap_energy"] = gp_energy(ground, a0_eff, trap);

  // Release: evolve both sides without the trap.
  std::string csv = "n,delta_t0,delta_final\n";
  std::vector<double> finals;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    const FockState psi0 = product_state(ground, n);
    const double d0 = trace_distance(reduce(psi0, 1), projector(ground));

    LatticeSpec lat{cfg.m, cfg.length, std::nullopt};
    const ScaledPair pair{cfg.potential, n, cfg.beta};
    LatticeHamiltonian h(lat, psi0.basis, pair);
    const int mb_steps = std::max(1, static_cast<int>(std::llround(cfg.t_final / cfg.mb_dt)));
    const FockState psi_t =
        evolve_manybody(psi0, h, cfg.t_final / mb_steps, mb_steps, KrylovOptions{16, 1e-11});

    EvolutionParams p;
    p.sigma = sigma;
    p.dt = cfg.dt;
    p.steps = std::max(1, static_cast<int>(std::llround(cfg.t_final / cfg.dt)));
    p.dispersion = Dispersion::lattice;
    p.strict = cfg.strict;
    const Field phi_t = evolve_nls(ground, p);
    const double dfinal = trace_distance(reduce(psi_t, 1), projector(phi_t));
    finals.push_back(dfinal);
    csv += csv_join({std::to_string(n), num(d0), num(dfinal)});
    rec.metrics["delta0_" + std::to_string(n)] = d0;
    rec.metrics["delta_" + std::to_string(n)] = dfinal;
    assert_on(rec, "initial_marginals_identical_n" + std::to_string(n), d0 <= 1e-10);
  }
  rec.tables.emplace_back("release", csv);
  bool decreasing = true;
  for (size_t i = 1; i < finals.size(); ++i) decreasing &= finals[i] < finals[i - 1];
  assert_on(rec, "delta_decreasing_in_n", decreasing);
  return rec;
}

ResultRecord run_beta_sweep(const ExperimentConfig& cfg) {
  ResultRecord rec;
  const Grid g{1, cfg.m, cfg.length};
  const Field phi0 = canonical_field(g);

  std::string csv = "beta,n,delta\n";
  std::string dip_csv = "beta,dip_depth\n";
  std::vector<double> dips;
  for (double beta : cfg.beta_list) {
    ExperimentConfig sub = cfg;
    sub.beta = beta;
    const double sigma = b0_integral(cfg.potential);  // the sub-unit-exponent coupling
    double first_delta = 0.0, last_delta = 0.0;
    for (int n : {cfg.n_min, cfg.n_max}) {
      const ConvergenceCell cell =
          converge_cell(sub, n, sigma, sigma, phi0, std::nullopt, std::nullopt);
      csv += csv_join({num(beta), std::to_string(n), num(cell.delta)});
      rec.metrics["delta_b" + num(beta) + "_n" + std::to_string(n)] = cell.delta;
      if (n == cfg.n_min) first_delta = cell.delta;
      if (n == cfg.n_max) last_delta = cell.delta;
    }
    assert_on(rec, "delta_decreasing_beta" + num(beta), last_delta < first_delta);

    // Pair-correlation dip at fixed particle count.
    LatticeSpec lat{cfg.m, cfg.length, std::nullopt};
    const ScaledPair pair{cfg.potential, cfg.n_dip, beta};
    const FockState psi0 = product_state(phi0, cfg.n_dip);
    LatticeHamiltonian h(lat, psi0.basis, pair);
    const int mb_steps = std::max(1, static_cast<int>(std::llround(cfg.t_final / cfg.mb_dt)));
    const FockState psi_t =
        evolve_manybody(psi0, h, cfg.t_final / mb_steps, mb_steps, KrylovOptions{16, 1e-11});
    const PairCorrelation pc = pair_correlation(reduce(psi_t, 2));
    const double dip = pc.g2.back() - pc.g2.front();
    dips.push_back(dip);
    dip_csv += csv_join({num(beta), num(dip)});
    rec.metrics["dip_b" + num(beta)] = dip;

    std::string profile = "r,g2\n";
    for (size_t i = 0; i < pc.r.size(); ++i) {
      profile += csv_join({num(pc.r[i]), num(pc.g2[i])});
    }
    rec.tables.emplace_back("g2_beta" + num(beta), profile);
  }
  rec.tables.emplace_back("beta_sweep", csv);
  rec.tables.emplace_back("dip", dip_csv);

  bool monotone = true;
  for (size_t i = 1; i < dips.size(); ++i) monotone &= dips[i] >= dips[i - 1];
  assert_on(rec, "dip_grows_with_beta", monotone);
  return rec;
}

ResultRecord run_hierarchy_check(const ExperimentConfig& cfg) {
  ResultRecord rec;
  const Grid g{1, cfg.m, cfg.length};
  const Field phi0 = canonical_field(g);
  const int n = std::min(cfg.n_max, 4);
  const double sigma = effective_coupling(cfg);

  LatticeSpec lat{cfg.m, cfg.length, std::nullopt};
  const ScaledPair pair{cfg.potential, n, cfg.beta};
  const FockState psi0 = product_state(phi0, n);
  LatticeHamiltonian h(lat, psi0.basis, pair);

  std::string csv = "dt,max_residual\n";
  std::string series_csv = "t,residual\n";
  std::string moments_csv = "t,norm,energy,energy2\n";
  std::vector<double> dts, errs;
  for (double dt : {2.0 * cfg.dt, cfg.dt}) {
    const MarginalTrajectory traj =
        record_trajectory(psi0, h, dt, 4, true, KrylovOptions{16, 1e-13});
    const auto residuals = bbgky_residual_k1(traj);
    double worst = 0.0;
    for (size_t i = 0; i < residuals.size(); ++i) {
      worst = std::max(worst, residuals[i]);
      if (dt == cfg.dt) series_csv += csv_join({num(traj.times[i + 1]), num(residuals[i])});
    }
    dts.push_back(dt);
    errs.push_back(worst);
    csv += csv_join({num(dt), num(worst)});
  }
  {
    FockState state = psi0;
    for (int step = 0; step <= 4; ++step) {
      const auto [e, e2] = expectation_moments(state, h);
      moments_csv += csv_join({num(step * cfg.dt), num(state.norm()), num(e), num(e2)});
      if (step < 4) state = evolve_manybody(state, h, cfg.dt, 1, KrylovOptions{16, 1e-13});
    }
  }
  rec.tables.emplace_back("reduced_residuals", csv);
  rec.tables.emplace_back("residual_series", series_csv);
  rec.tables.emplace_back("trajectory_moments", moments_csv);
  rec.metrics["residual_coarse"] = errs[0];
  rec.metrics["residual_fine"] = errs[1];
  const double order = convergence_order(dts, errs);
  rec.metrics["refinement_order"] = order;
  assert_on(rec, "residual_within_error_model",
            errs[1] <= 5.0 * (cfg.dt * cfg.dt + lat.h() * lat.h()));
  assert_on(rec, "residual_refines", order >= 1.0);

  // Factorized check against the effective flow on the same grid.
  EvolutionParams p;
  p.sigma = sigma;
  p.dt = cfg.dt;
  p.steps = 50;
  std::vector<Field> snaps;
  StepObserver obs = [&](int step, double, const Field& f) {
    if (step >= 48) snaps.push_back(f);
  };
  evolve_nls(phi0, p, &obs);
  for (int k : {1, 2}) {
    const double res =
        factorized_hierarchy_residual(snaps[0], snaps[1], snaps[2], p.dt, sigma, k);
    const double res_wrong =
        factorized_hierarchy_residual(snaps[0], snaps[1], snaps[2], p.dt, sigma + 1.0, k);
    rec.metrics["factorized_residual_k" + std::to_string(k)] = res;
    rec.metrics["factorized_residual_wrong_k" + std::to_string(k)] = res_wrong;
    assert_on(rec, "factorized_residual_k" + std::to_string(k), res <= 1e-6);
    assert_on(rec, "mismatched_coupling_detected_k" + std::to_string(k), res_wrong > 0.1);
  }
  return rec;
}

ResultRecord run_graphs(const ExperimentConfig& cfg) {
  ResultRecord rec;
  std::string csv = "k,m,count,bound,summands,power_total\n";
  bool all_ok = true;
  for (int k = 1; k <= cfg.k_max; ++k) {
    for (int m = 0; m <= cfg.m_max; ++m) {
      const auto graphs = enumerate_graphs(k, m);
      const DuhamelCounts counts = duhamel_counts(k, m);
      for (const auto& gr : graphs) all_ok &= validate_pairing(gr).ok;
      all_ok &= graphs.size() <= counts.graph_bound;
      const PowerCounting pc = power_counting(k, m);
      csv += csv_join({std::to_string(k), std::to_string(m), std::to_string(graphs.size()),
                       std::to_string(counts.graph_bound), std::to_string(counts.xi_summands),
                       std::to_string(pc.total)});
      rec.metrics["count_k" + std::to_string(k) + "_m" + std::to_string(m)] =
          graphs.size();
    }
  }
  rec.tables.emplace_back("graph_counts", csv);
  assert_on(rec, "all_graphs_validate_and_bounded", all_ok);
  return rec;
}

}  // namespace

void ExperimentConfig::validate() const {
  potential.validate();
  if (kind.empty()) throw Error("experiment kind missing");
  if (m < 8) throw Error("lattice needs at least 8 modes");
  if (!(length > 0.0)) throw Error("box length must be positive");
  if (n_min < 1 || n_max < n_min) throw Error("bad particle range");
  if (!(dt > 0.0) || !(mb_dt > 0.0)) throw Error("time steps must be positive");
  if (!(t_final > 0.0)) throw Error("final time must be positive");
}

bool ResultRecord::all_passed() const {
  for (const auto& [name, ok] : assertions) {
    if (!ok) return false;
  }
  return true;
}

nlohmann::json ResultRecord::to_json() const {
  nlohmann::json j;
  j["config"] = config_echo;
  j["metrics"] = metrics;
  j["version"] = version_tag;
  j["wall_seconds"] = wall_seconds;
  nlohmann::json checks = nlohmann::json::object();
  for (const auto& [name, ok] : assertions) checks[name] = ok;
  j["assertions"] = checks;
  j["passed"] = all_passed();
  return j;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["kind"] = cfg.kind;
  j["potential"] = cfg.potential;
  j["m"] = cfg.m;
  j["length"] = cfg.length;
  j["n_min"] = cfg.n_min;
  j["n_max"] = cfg.n_max;
  j["beta"] = cfg.beta;
  j["t_final"] = cfg.t_final;
  j["dt"] = cfg.dt;
  j["mb_dt"] = cfg.mb_dt;
  j["n_dip"] = cfg.n_dip;
  j["beta_list"] = cfg.beta_list;
  j["trap_strength"] = cfg.trap_strength;
  j["a0"] = cfg.a0;
  j["sigma_override"] = cfg.sigma_override;
  j["k_max"] = cfg.k_max;
  j["m_max"] = cfg.m_max;
  j["seed"] = cfg.seed;
  j["strict"] = cfg.strict;
  return j;
}

Field canonical_field(const Grid& g) {
  Field f = Field::sample(g, [&](double x, double, double) {
    return Complex(1.0 + 0.5 * std::cos(2.0 * kPi * x / g.length), 0.0);
  });
  f.normalize();
  return f;
}

VectorXd harmonic_trap(const Grid& g, double strength) {
  VectorXd trap(g.size());
  for (int i = 0; i < g.m; ++i) {
    const double d = g.min_image(g.x(i) - 0.5 * g.length);
    trap[i] = strength * d * d;
  }
  return trap;
}

ResultRecord run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  ResultRecord rec;
  if (cfg.kind == "scattering") {
    rec = run_scattering(cfg);
  } else if (cfg.kind == "gp_evolve") {
    rec = run_gp_evolve(cfg);
  } else if (cfg.kind == "gp_minimize") {
    rec = run_gp_minimize(cfg);
  } else if (cfg.kind == "mb_converge") {
    rec = run_mb_converge(cfg);
  } else if (cfg.kind == "trap_release") {
    rec = run_trap_release(cfg);
  } else if (cfg.kind == "beta_sweep") {
    rec = run_beta_sweep(cfg);
  } else if (cfg.kind == "hierarchy_check") {
    rec = run_hierarchy_check(cfg);
  } else if (cfg.kind == "graphs") {
    rec = run_graphs(cfg);
  } else {
    throw Error("unknown experiment kind '" + cfg.kind + "'");
  }
  rec.config_echo = config_to_json(cfg);
  rec.version_tag = kVersionTag;
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!cfg.out_dir.empty()) write_record(rec, cfg.out_dir);
  return rec;
}

void write_record(const ResultRecord& record, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out(std::filesystem::path(out_dir) / "record.json");
    if (!out) throw Error("cannot write record.json in '" + out_dir + "'");
    out << record.to_json().dump(2) << "\n";
  }
  for (const auto& [name, body] : record.tables) {
    std::ofstream out(std::filesystem::path(out_dir) / (name + ".csv"));
    if (!out) throw Error("cannot write table '" + name + "'");
    out << body;
  }
}

}  // namespace bec
