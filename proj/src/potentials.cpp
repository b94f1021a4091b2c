#include "bec/potentials.hpp"

#include <cmath>

namespace bec {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::zero: return "zero";
    case PotentialKind::soft_sphere: return "soft_sphere";
    case PotentialKind::smooth_bump: return "smooth_bump";
  }
  return "unknown";
}

PotentialKind potential_kind_from_string(const std::string& name) {
  if (name == "zero") return PotentialKind::zero;
  if (name == "soft_sphere") return PotentialKind::soft_sphere;
  if (name == "smooth_bump") return PotentialKind::smooth_bump;
  throw Error("unknown potential kind '" + name + "'");
}

double PotentialSpec::radial(double r) const {
  if (is_zero() || r > radius) return 0.0;
  switch (kind) {
    case PotentialKind::soft_sphere:
      return v0;
    case PotentialKind::smooth_bump: {
      const double u = r / radius;
      const double w = 1.0 - u * u;
      if (w <= 0.0) return 0.0;
      return v0 * std::exp(-1.0 / w);
    }
    default:
      return 0.0;
  }
}

void PotentialSpec::validate() const {
  if (v0 < 0.0) throw Error("potential height must be nonnegative");
  if (radius <= 0.0) throw Error("potential radius must be positive");
  if (dim != 1 && dim != 3) throw Error("potential dimension must be 1 or 3");
}

void ScaledPair::validate() const {
  base.validate();
  if (n < 1) throw Error("particle count must be >= 1");
  if (beta < 0.0 || beta > 1.0) throw Error("scaling exponent must lie in [0, 1]");
}

double ScaledPair::scale_factor() const { return std::pow(static_cast<double>(n), beta); }

double ScaledPair::support_radius() const { return base.radius / scale_factor(); }

double alpha_measure(const PotentialSpec& spec) {
  spec.validate();
  if (spec.is_zero()) return 0.0;
  if (spec.dim != 3) {
    // \int V/|x| dx diverges at the origin in 1D for V(0) > 0.
    throw Error("alpha_measure is defined for 3D profiles");
  }
  double sup_term = 0.0;
  switch (spec.kind) {
    case PotentialKind::soft_sphere:
      sup_term = spec.v0 * spec.radius * spec.radius;
      break;
    case PotentialKind::smooth_bump: {
      // Interior maximum of r^2 V(r): dense scan plus golden-section refinement.
      auto g = [&](double r) { return r * r * spec.radial(r); };
      const int n_scan = 20000;
      double best_r = 0.0, best = 0.0;
      for (int i = 0; i <= n_scan; ++i) {
        const double r = spec.radius * i / n_scan;
        const double v = g(r);
        if (v > best) {
          best = v;
          best_r = r;
        }
      }
      double a = std::max(0.0, best_r - spec.radius / n_scan);
      double b = std::min(spec.radius, best_r + spec.radius / n_scan);
      const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
      double c = b - gr * (b - a), d = a + gr * (b - a);
      for (int it = 0; it < 120; ++it) {
        if (g(c) < g(d)) {
          a = c;
        } else {
          b = d;
        }
        c = b - gr * (b - a);
        d = a + gr * (b - a);
      }
      sup_term = g(0.5 * (a + b));
      break;
    }
    default:
      break;
  }
  // \int V/|x| dx = 4*pi \int_0^R V(r) r dr
  double int_term;
  if (spec.kind == PotentialKind::soft_sphere) {
    int_term = 2.0 * kPi * spec.v0 * spec.radius * spec.radius;
  } else {
    int_term =
        4.0 * kPi * integrate([&](double r) { return spec.radial(r) * r; }, 0.0, spec.radius);
  }
  return sup_term + int_term;
}

double b0_integral(const PotentialSpec& spec) {
  spec.validate();
  if (spec.is_zero()) return 0.0;
  if (spec.dim == 3) {
    if (spec.kind == PotentialKind::soft_sphere) {
      return spec.v0 * 4.0 / 3.0 * kPi * spec.radius * spec.radius * spec.radius;
    }
    return 4.0 * kPi *
           integrate([&](double r) { return spec.radial(r) * r * r; }, 0.0, spec.radius, 1e-12);
  }
  if (spec.kind == PotentialKind::soft_sphere) return 2.0 * spec.v0 * spec.radius;
  return 2.0 * integrate([&](double r) { return spec.radial(r); }, 0.0, spec.radius, 1e-12);
}

double scaled_eval(const ScaledPair& pair, double r) {
  pair.validate();
  const double s = pair.scale_factor();
  const double prefactor = std::pow(static_cast<double>(pair.n), pair.base.dim * pair.beta - 1.0);
  return prefactor * pair.base.radial(s * std::abs(r));
}

double scaled_integral(const ScaledPair& pair) {
  pair.validate();
  if (pair.base.is_zero()) return 0.0;
  const double rsup = pair.support_radius();
  if (pair.base.dim == 3) {
    return 4.0 * kPi *
           integrate([&](double r) { return scaled_eval(pair, r) * r * r; }, 0.0, rsup, 1e-12);
  }
  return 2.0 * integrate([&](double r) { return scaled_eval(pair, r); }, 0.0, rsup, 1e-12);
}

void to_json(nlohmann::json& j, const PotentialSpec& spec) {
  j = nlohmann::json{{"kind", to_string(spec.kind)},
                     {"v0", spec.v0},
                     {"radius", spec.radius},
                     {"dimension", spec.dim}};
}

void from_json(const nlohmann::json& j, PotentialSpec& spec) {
  spec.kind = potential_kind_from_string(j.at("kind").get<std::string>());
  spec.v0 = j.at("v0").get<double>();
  spec.radius = j.at("radius").get<double>();
  spec.dim = j.at("dimension").get<int>();
  spec.validate();
}

void to_json(nlohmann::json& j, const ScaledPair& pair) {
  to_json(j, pair.base);
  j["n"] = pair.n;
  j["beta"] = pair.beta;
}

void from_json(const nlohmann::json& j, ScaledPair& pair) {
  from_json(j, pair.base);
  pair.n = j.at("n").get<int>();
  pair.beta = j.at("beta").get<double>();
  pair.validate();
}

}  // namespace bec
