#pragma once

#include <string>
#include <vector>

#include "bec/gp_field.hpp"
#include "bec/potentials.hpp"
#include "json.hpp"

namespace bec {

/// One experiment instance. Fields mirror the CLI flags; unset paths mean
/// no files are written.
struct ExperimentConfig {
  std::string kind;  // scattering | gp_evolve | gp_minimize | mb_converge |
                     // trap_release | beta_sweep | hierarchy_check | graphs
  PotentialSpec potential{PotentialKind::smooth_bump, 3.0, 1.5, 1};

  int m = 24;
  double length = 6.0;

  int n_min = 2;
  int n_max = 6;
  double beta = 0.5;
  double t_final = 0.5;
  double dt = 1e-3;     // effective-equation step
  double mb_dt = 5e-3;  // many-body exponential-stepper step
  int n_dip = 4;        // particle count for the pair-correlation dip
  std::vector<double> beta_list = {0.3, 0.5, 0.8};

  double trap_strength = 1.0;  // harmonic coefficient about the box center
  double a0 = 0.0;             // minimizer coupling
  double sigma_override = 0.0; // nonzero: bypass the potential-derived coupling

  int k_max = 3;
  int m_max = 4;

  uint64_t seed = 1;
  bool strict = false;
  std::string out_dir;

  void validate() const;
};

struct ResultRecord {
  nlohmann::json config_echo;
  nlohmann::json metrics;
  std::vector<std::pair<std::string, std::string>> tables;  // name -> csv body
  std::vector<std::pair<std::string, bool>> assertions;
  std::string version_tag;
  double wall_seconds = 0.0;

  bool all_passed() const;
  /// Deterministic byte serialization of the metrics map (the reproducibility
  /// contract compares exactly these bytes).
  std::string metrics_bytes() const { return metrics.dump(); }
  nlohmann::json to_json() const;
};

ResultRecord run_experiment(const ExperimentConfig& cfg);

/// Writes record.json plus one .csv per table into out_dir (created if needed).
void write_record(const ResultRecord& record, const std::string& out_dir);

nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Canonical smooth initial field of the lattice experiments.
Field canonical_field(const Grid& g);

/// Harmonic trap samples about the box center.
VectorXd harmonic_trap(const Grid& g, double strength);

}  // namespace bec
