#pragma once

#include <string>

#include "bec/numerics.hpp"
#include "json.hpp"

namespace bec {

enum class PotentialKind { zero, soft_sphere, smooth_bump };

std::string to_string(PotentialKind kind);
PotentialKind potential_kind_from_string(const std::string& name);

/// Radially symmetric, nonnegative, compactly supported interaction profile.
/// soft_sphere: V(r) = v0 for r < radius (admits closed-form scattering);
/// smooth_bump: V(r) = v0 * exp(-1/(1-(r/radius)^2)) for r < radius.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::zero;
  double v0 = 0.0;
  double radius = 1.0;
  int dim = 3;  // 1 or 3

  double radial(double r) const;
  void validate() const;
  bool is_zero() const { return kind == PotentialKind::zero || v0 == 0.0; }
};

/// Pair interaction w(x) = N^{dim*beta-1} V(N^beta x); for dim=3, beta=1 this
/// is the strong-scaling family N^2 V(Nx).
struct ScaledPair {
  PotentialSpec base;
  int n = 1;
  double beta = 1.0;

  void validate() const;
  double scale_factor() const;    // N^beta
  double support_radius() const;  // radius / N^beta
};

/// Dimensionless interaction-strength measure
/// sup_x |x|^2 V(x) + \int V(x)/|x| dx  (3D profiles; zero potential -> 0).
double alpha_measure(const PotentialSpec& spec);

/// \int V(x) dx over R^dim.
double b0_integral(const PotentialSpec& spec);

/// w(x) evaluated at |x| = r.
double scaled_eval(const ScaledPair& pair, double r);

/// \int w(x) dx over R^dim; equals b0_integral(base)/N by change of variables.
double scaled_integral(const ScaledPair& pair);

void to_json(nlohmann::json& j, const PotentialSpec& spec);
void from_json(const nlohmann::json& j, PotentialSpec& spec);
void to_json(nlohmann::json& j, const ScaledPair& pair);
void from_json(const nlohmann::json& j, ScaledPair& pair);

}  // namespace bec
