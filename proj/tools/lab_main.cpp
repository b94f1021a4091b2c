// Command-line front end: runs one experiment per invocation and writes
// record.json plus plot-ready CSV tables. Exit status reflects the declared
// assertions of the experiment.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "bec/experiments.hpp"

namespace {

struct CliOptions {
  bec::ExperimentConfig cfg;
  std::string potential_kind = "smooth_bump";
  bool minimize = false;
  bool release = false;
};

void add_common_options(CLI::App* sub, CliOptions& opt) {
  sub->set_config("--config", "", "read options from an ini-style file");
  sub->add_option("--potential", opt.potential_kind, "zero | soft_sphere | smooth_bump")
      ->capture_default_str();
  sub->add_option("--v0", opt.cfg.potential.v0, "interaction height")->capture_default_str();
  sub->add_option("--radius", opt.cfg.potential.radius, "interaction support radius")
      ->capture_default_str();
  sub->add_option("--dimension", opt.cfg.potential.dim, "profile dimension (1 or 3)")
      ->capture_default_str();
  sub->add_option("--modes,-m", opt.cfg.m, "lattice/grid points per axis")
      ->capture_default_str();
  sub->add_option("--length,-L", opt.cfg.length, "box length")->capture_default_str();
  sub->add_option("--n-min", opt.cfg.n_min, "smallest particle count")->capture_default_str();
  sub->add_option("--n-max", opt.cfg.n_max, "largest particle count")->capture_default_str();
  sub->add_option("--beta", opt.cfg.beta, "scaling exponent in (0, 1]")->capture_default_str();
  sub->add_option("--t-final", opt.cfg.t_final, "evolution time")->capture_default_str();
  sub->add_option("--dt", opt.cfg.dt, "effective-equation step")->capture_default_str();
  sub->add_option("--mb-dt", opt.cfg.mb_dt, "many-body stepper step")->capture_default_str();
  sub->add_option("--n-dip", opt.cfg.n_dip, "particle count for the g2 dip")
      ->capture_default_str();
  sub->add_option("--beta-list", opt.cfg.beta_list, "sweep exponents")->capture_default_str();
  sub->add_option("--trap", opt.cfg.trap_strength, "harmonic trap strength")
      ->capture_default_str();
  sub->add_option("--a0", opt.cfg.a0, "minimizer coupling (scattering length)")
      ->capture_default_str();
  sub->add_option("--sigma", opt.cfg.sigma_override,
                  "override the potential-derived nonlinearity");
  sub->add_option("--k-max", opt.cfg.k_max, "largest tree-pair count")->capture_default_str();
  sub->add_option("--m-max", opt.cfg.m_max, "largest vertex count")->capture_default_str();
  sub->add_option("--seed", opt.cfg.seed, "run seed (echoed into the record)")
      ->capture_default_str();
  sub->add_flag("--strict", opt.cfg.strict, "promote warnings to failures");
  sub->add_option("--out", opt.cfg.out_dir, "output directory for record.json and tables");
}

int run(const CliOptions& opt, const std::string& kind) {
  bec::ExperimentConfig cfg = opt.cfg;
  cfg.kind = kind;
  cfg.potential.kind = bec::potential_kind_from_string(opt.potential_kind);
  const bec::ResultRecord record = bec::run_experiment(cfg);

  std::printf("experiment: %s  (%.2f s)\n", kind.c_str(), record.wall_seconds);
  for (auto it = record.metrics.begin(); it != record.metrics.end(); ++it) {
    std::printf("  %-28s %s\n", it.key().c_str(), it.value().dump().c_str());
  }
  bool ok = true;
  for (const auto& [name, passed] : record.assertions) {
    std::printf("  [%s] %s\n", passed ? "PASS" : "FAIL", name.c_str());
    ok &= passed;
  }
  if (!cfg.out_dir.empty()) {
    std::printf("wrote %s/record.json\n", cfg.out_dir.c_str());
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for condensate dynamics on a desk"};
  app.require_subcommand(1);

  CliOptions opt;
  struct SubSpec {
    const char* name;
    const char* help;
  };
  const std::vector<std::pair<std::string, std::string>> subs = {
      {"scattering", "zero-energy scattering solve and both length routes"},
      {"gp", "effective-equation evolution (or --minimize for the ground state)"},
      {"manybody", "finite-N convergence table (or --release for the trap quench)"},
      {"hierarchy", "reduced-equation and factorized-hierarchy residuals"},
      {"graphs", "tree-pair enumeration, counts, and exponent budgets"},
      {"sweep", "scaling-exponent sweep of convergence and pair correlations"},
  };
  for (const auto& [name, help] : subs) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common_options(sub, opt);
    if (name == "gp") sub->add_flag("--minimize", opt.minimize, "imaginary-time ground state");
    if (name == "manybody") sub->add_flag("--release", opt.release, "trap quench comparison");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string sub = app.get_subcommands().front()->get_name();
    std::string kind;
    if (sub == "scattering") kind = "scattering";
    if (sub == "gp") kind = opt.minimize ? "gp_minimize" : "gp_evolve";
    if (sub == "manybody") kind = opt.release ? "trap_release" : "mb_converge";
    if (sub == "hierarchy") kind = "hierarchy_check";
    if (sub == "graphs") kind = "graphs";
    if (sub == "sweep") kind = "beta_sweep";
    return run(opt, kind);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
