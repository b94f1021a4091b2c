#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "bec/fft.hpp"
#include "bec/gp_field.hpp"

using namespace bec;

namespace {
constexpr double kPi = 3.14159265358979323846;

Grid grid1d(int m = 256, double length = 2.0 * kPi) { return Grid{1, m, length}; }

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
}  // namespace

TEST_CASE("free evolution advances plane waves by the exact phase") {
  const Grid g = grid1d(64);
  const Field phi = Field::plane_wave(g, {3, 0, 0});
  const double k = 2.0 * kPi * 3.0 / g.length;
  EvolutionParams p;
  p.sigma = 0.0;
  p.dt = 1e-2;
  p.steps = 100;
  const Field out = evolve_nls(phi, p);
  const Complex expected_phase = std::exp(Complex(0.0, -k * k * 1.0));
  for (int i = 0; i < g.m; ++i) {
    CHECK(std::abs(out.values[i] - expected_phase * phi.values[i]) < 1e-12);
  }
}

TEST_CASE("constant field rotates at the exact nonlinear phase") {
  const Grid g = grid1d(64);
  const Field phi = Field::constant(g, Complex(1.0, 0.0));  // |A| = 1, unnormalized
  EvolutionParams p;
  p.sigma = 2.0;
  p.dt = 1e-2;
  p.steps = 100;  // t = 1
  const Field out = evolve_nls(phi, p);
  const Complex expected = std::exp(Complex(0.0, -2.0));
  for (int i = 0; i < g.m; ++i) CHECK(std::abs(out.values[i] - expected) < 1e-8);
}

TEST_CASE("splitting is second order in dt") {
  const Grid g = grid1d(128);
  const Field phi = smooth_datum(g);
  EvolutionParams ref;
  ref.sigma = 1.0;
  ref.dt = 6.25e-5;
  ref.steps = 8192;  // t = 0.512
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
  CHECK(order == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("mass is conserved to 1e-10 over ten thousand steps") {
  const Grid g = grid1d(128);
  Field phi = smooth_datum(g);
  const double m0 = phi.mass();
  EvolutionParams p;
  p.sigma = 1.5;
  p.dt = 1e-3;
  p.steps = 10000;
  const Field out = evolve_nls(phi, p);
  CHECK(std::abs(out.mass() - m0) < 1e-10);
}

TEST_CASE("energy drifts less than 1e-6 relative over unit time") {
  const Grid g = grid1d(128);
  const Field phi = smooth_datum(g);
  EvolutionParams p;
  p.sigma = 1.0;
  p.dt = 1e-3;
  p.steps = 1000;
  const double e0 = field_energy(phi, p.sigma, std::nullopt);
  const Field out = evolve_nls(phi, p);
  const double e1 = field_energy(out, p.sigma, std::nullopt);
  CHECK(std::abs(e1 - e0) / std::abs(e0) < 1e-6);
}

TEST_CASE("evolution is time reversible") {
  const Grid g = grid1d(128);
  const Field phi = smooth_datum(g);
  EvolutionParams fwd;
  fwd.sigma = 1.0;
  fwd.dt = 1e-3;
  fwd.steps = 1000;
  EvolutionParams bwd = fwd;
  bwd.dt = -fwd.dt;
  const Field back = evolve_nls(evolve_nls(phi, fwd), bwd);
  CHECK(field_distance(back, phi) < 1e-8);
}

TEST_CASE("strict mode turns the aliasing warning into an error") {
  const Grid g = grid1d(32);
  const Field phi = Field::constant(g, Complex(1.0, 0.0));
  EvolutionParams p;
  p.sigma = 1e4;
  p.dt = 1e-3;
  p.steps = 1;
  p.strict = true;
  CHECK_THROWS_AS(evolve_nls(phi, p), Error);
  p.strict = false;
  CHECK_NOTHROW(evolve_nls(phi, p));
}

TEST_CASE("hartree evolution with zero kernel matches free evolution") {
  const Grid g = grid1d(64);
  const Field phi = smooth_datum(g);
  EvolutionParams free_p;
  free_p.sigma = 0.0;
  free_p.dt = 1e-3;
  free_p.steps = 200;
  EvolutionParams hart = free_p;
  hart.hartree_kernel = VectorXd::Zero(g.size());
  const Field a = evolve_nls(phi, free_p);
  const Field b = evolve_hartree(phi, hart);
  CHECK(field_distance(a, b) < 1e-13);
}

TEST_CASE("hartree phase of a constant field is |A|^2 times the kernel integral") {
  const Grid g = grid1d(64);
  const Field phi = Field::constant(g, Complex(1.0, 0.0));
  VectorXd kernel = sample_radial(g, [](double r) { return r < 1.0 ? 0.7 : 0.0; });
  const double integral = kernel.sum() * g.h();
  EvolutionParams p;
  p.hartree_kernel = kernel;
  p.dt = 1e-2;
  p.steps = 100;  // t = 1
  const Field out = evolve_hartree(phi, p);
  const Complex expected = std::exp(Complex(0.0, -integral));
  for (int i = 0; i < g.m; ++i) CHECK(std::abs(out.values[i] - expected) < 1e-8);
}

TEST_CASE("narrow hartree kernels approach the cubic flow") {
  const Grid g = grid1d(256);
  const Field phi = smooth_datum(g);
  const double sigma = 1.0;
  EvolutionParams nls;
  nls.sigma = sigma;
  nls.dt = 1e-3;
  nls.steps = 200;
  const Field cubic = evolve_nls(phi, nls);

  std::vector<double> errors;
  for (double width : {0.8, 0.4, 0.2}) {
    VectorXd kernel = sample_radial(g, [&](double r) {
      if (r >= width) return 0.0;
      const double u = r / width;
      return std::exp(-1.0 / (1.0 - u * u));
    });
    kernel *= sigma / (kernel.sum() * g.h());  // normalize \int v = sigma
    EvolutionParams hart;
    hart.hartree_kernel = kernel;
    hart.dt = 1e-3;
    hart.steps = 200;
    errors.push_back(field_distance(evolve_hartree(phi, hart), cubic));
  }
  CHECK(errors[1] < errors[0]);
  CHECK(errors[2] < errors[1]);
}

TEST_CASE("energy of simple fields matches hand computations") {
  SUBCASE("normalized plane wave has kinetic energy k^2") {
    const Grid g = grid1d(64);
    const Field phi = Field::plane_wave(g, {2, 0, 0});
    const double k = 2.0 * kPi * 2.0 / g.length;
    CHECK(gp_energy(phi, 0.0, std::nullopt) == doctest::Approx(k * k).epsilon(1e-12));
  }
  SUBCASE("constant field on a 1D box has energy 4 pi a0 / L") {
    const Grid g = grid1d(64, 3.0);
    Field phi = Field::constant(g, Complex(1.0, 0.0));
    phi.normalize();
    const double a0 = 0.25;
    CHECK(gp_energy(phi, a0, std::nullopt) ==
          doctest::Approx(4.0 * kPi * a0 / g.length).epsilon(1e-12));
  }
  SUBCASE("harmonic ground state has energy 1") {
    const Grid g = grid1d(256, 16.0);
    VectorXd trap = sample_radial(g, [](double r) { return r * r; });
    // Center the trap mid-box: sample (x - L/2)^2 via the min-image helper.
    Field gauss = Field::sample(g, [&](double x, double, double) {
      const double d = g.min_image(x - g.length / 2.0);
      return Complex(std::exp(-0.5 * d * d), 0.0);
    });
    gauss.normalize();
    VectorXd centered(g.size());
    for (int i = 0; i < g.m; ++i) {
      const double d = g.min_image(g.x(i) - g.length / 2.0);
      centered[i] = d * d;
    }
    CHECK(gp_energy(gauss, 0.0, centered) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("mass bookkeeping") {
  const Grid g = grid1d(64);
  Field phi = smooth_datum(g);
  CHECK(phi.mass() == doctest::Approx(1.0).epsilon(1e-12));
  Field doubled = phi;
  doubled.values *= 2.0;
  CHECK(doubled.mass() == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("minimizer reproduces known ground states") {
  SUBCASE("free periodic box relaxes to the constant field") {
    const Grid g = grid1d(64, 4.0);
    const Field ground = minimize_gp_energy(g, 0.0, std::nullopt);
    CHECK(gp_energy(ground, 0.0, std::nullopt) == doctest::Approx(0.0).epsilon(1e-10));
    const double expected = 1.0 / std::sqrt(g.length);
    for (int i = 0; i < g.m; ++i) CHECK(std::abs(ground.values[i]) ==
                                        doctest::Approx(expected).epsilon(1e-6));
  }
  SUBCASE("harmonic trap at a0 = 0 gives energy 1") {
    const Grid g = grid1d(256, 16.0);
    VectorXd trap(g.size());
    for (int i = 0; i < g.m; ++i) {
      const double d = g.min_image(g.x(i) - g.length / 2.0);
      trap[i] = d * d;
    }
    const Field ground = minimize_gp_energy(g, 0.0, trap);
    CHECK(gp_energy(ground, 0.0, trap) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(gp_gradient_norm(ground, 0.0, trap) < 1e-6);
  }
  SUBCASE("energy is nondecreasing in the coupling") {
    const Grid g = grid1d(128, 12.0);
    VectorXd trap(g.size());
    for (int i = 0; i < g.m; ++i) {
      const double d = g.min_image(g.x(i) - g.length / 2.0);
      trap[i] = d * d;
    }
    double prev = -1.0;
    for (double a0 : {0.0, 0.1, 0.2}) {
      const Field ground = minimize_gp_energy(g, a0, trap);
      const double e = gp_energy(ground, a0, trap);
      CHECK(e >= prev);
      prev = e;
    }
  }
}

TEST_CASE("gradient vanishes along random tangent directions at the minimizer") {
  const Grid g = grid1d(128, 12.0);
  VectorXd trap(g.size());
  for (int i = 0; i < g.m; ++i) {
    const double d = g.min_image(g.x(i) - g.length / 2.0);
    trap[i] = d * d;
  }
  const double a0 = 0.1;
  const Field ground = minimize_gp_energy(g, a0, trap);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  const double hd = g.h();
  for (int trial = 0; trial < 5; ++trial) {
    VectorXcd dir(g.size());
    for (long i = 0; i < g.size(); ++i) dir[i] = Complex(normal(rng), normal(rng));
    // Tangent to the mass sphere: remove the radial component, normalize.
    const Complex overlap = ground.values.dot(dir) * hd;
    dir -= overlap * ground.values;
    dir /= std::sqrt(dir.squaredNorm() * hd);
    const double eps = 1e-5;
    auto on_sphere = [&](double t) {
      Field f = ground;
      f.values = std::cos(t) * ground.values + std::sin(t) * dir;
      return gp_energy(f, a0, trap);
    };
    const double deriv = (on_sphere(eps) - on_sphere(-eps)) / (2.0 * eps);
    CHECK(std::abs(deriv) < 1e-6);
  }
}

TEST_CASE("field checkpoints round-trip") {
  const Grid g = grid1d(32, 5.0);
  const Field phi = smooth_datum(g);
  save_field_binary(phi, "field_ckpt.bin");
  const Field blob = load_field_binary("field_ckpt.bin");
  CHECK(blob.grid == phi.grid);
  CHECK((blob.values - phi.values).cwiseAbs().maxCoeff() == 0.0);

  save_field_csv(phi, "field_ckpt.csv");
  const Field csv = load_field_csv("field_ckpt.csv");
  CHECK(csv.grid == phi.grid);
  CHECK((csv.values - phi.values).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("3D free evolution matches the plane-wave phase") {
  const Grid g{3, 16, 2.0 * kPi};
  const Field phi = Field::plane_wave(g, {1, 2, 0});
  EvolutionParams p;
  p.dt = 5e-3;
  p.steps = 40;  // t = 0.2
  const Field out = evolve_nls(phi, p);
  const double k2 = 1.0 + 4.0;
  const Complex expected_phase = std::exp(Complex(0.0, -k2 * 0.2));
  CHECK(std::abs(out.values[5] - expected_phase * phi.values[5]) < 1e-12);
  CHECK(std::abs(out.mass() - phi.mass()) < 1e-12);
}
