#include "bec/hierarchy.hpp"

#include <cmath>

#include "bec/fft.hpp"

namespace bec {

namespace {

double l2_norm(const MatrixXcd& a, double h, int k) {
  return a.norm() * std::pow(h, k);
}

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  const long m = a.rows();
  const long p = b.rows();
  MatrixXcd out(m * p, m * p);
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < m; ++j)
      out.block(i * p, j * p, p, p) = a(i, j) * b;
  return out;
}

// Second-difference Laplacian of a kernel along rows (unprimed) or columns.
MatrixXcd row_laplacian(const MatrixXcd& g, double h) {
  const long m = g.rows();
  MatrixXcd out(m, g.cols());
  const double inv_h2 = 1.0 / (h * h);
  for (long x = 0; x < m; ++x) {
    const long xp = (x + 1) % m, xm = (x + m - 1) % m;
    out.row(x) = (g.row(xp) - 2.0 * g.row(x) + g.row(xm)) * inv_h2;
  }
  return out;
}

VectorXcd spectral_minus_laplacian(const Field& phi, Dispersion disp) {
  VectorXcd v = phi.values;
  const Grid& g = phi.grid;
  const double h = g.h();
  apply_multiplier(g, v, [&](double kx, double, double) {
    const double w = disp == Dispersion::continuum ? kx * kx : (2.0 - 2.0 * std::cos(kx * h)) / (h * h);
    return Complex(w, 0.0);
  });
  return v;
}

}  // namespace

MarginalTrajectory record_trajectory(const FockState& psi, const LatticeHamiltonian& h, double dt,
                                     int steps, bool with_gamma2, const KrylovOptions& opts) {
  MarginalTrajectory traj;
  traj.n = psi.particles();
  traj.m = psi.modes();
  traj.h = psi.lattice.h();
  traj.pair_w = h.pair_samples();
  FockObserver obs = [&](int, double t, const FockState& state) {
    traj.times.push_back(t);
    traj.gamma1.push_back(reduce(state, 1));
    if (with_gamma2) traj.gamma2.push_back(reduce(state, 2));
  };
  evolve_manybody(psi, h, dt, steps, opts, &obs);
  return traj;
}

std::vector<double> bbgky_residual_k1(const MarginalTrajectory& traj) {
  if (traj.times.size() < 3) throw Error("need at least three snapshots");
  if (traj.n > 1 && traj.gamma2.size() != traj.gamma1.size()) {
    throw Error("two-particle marginals are required for the interaction term");
  }
  const double dt = traj.times[1] - traj.times[0];
  const int m = traj.m;
  const double h = traj.h;
  const Complex iunit(0.0, 1.0);

  std::vector<double> residuals;
  for (size_t t = 1; t + 1 < traj.times.size(); ++t) {
    const MatrixXcd& g = traj.gamma1[t].kernel;
    const MatrixXcd dgdt = (traj.gamma1[t + 1].kernel - traj.gamma1[t - 1].kernel) / (2.0 * dt);
    const MatrixXcd time_term = iunit * dgdt;

    // (-Lap_1 + Lap'_1) gamma, second differences on each side.
    const MatrixXcd kinetic = -row_laplacian(g, h) + row_laplacian(g.adjoint(), h).adjoint();

    MatrixXcd interaction = MatrixXcd::Zero(m, m);
    if (traj.n > 1) {
      const MatrixXcd& g2 = traj.gamma2[t].kernel;
      for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) {
          Complex acc(0.0, 0.0);
          for (int v = 0; v < m; ++v) {
            const double wx = traj.pair_w[(x - v + m) % m];
            const double wy = traj.pair_w[(y - v + m) % m];
            acc += (wx - wy) * g2(x * m + v, y * m + v);
          }
          interaction(x, y) = acc * (h * (traj.n - 1));
        }
    }

    const MatrixXcd res = time_term - kinetic - interaction;
    const double scale = std::max({l2_norm(time_term, h, 1), l2_norm(kinetic, h, 1),
                                   l2_norm(interaction, h, 1), 1e-300});
    residuals.push_back(l2_norm(res, h, 1) / scale);
  }
  return residuals;
}

MatrixXcd contact_commutator(const MarginalDensity& g2) {
  if (g2.k != 2) throw Error("contact commutator expects a two-particle marginal");
  const int m = g2.m;
  MatrixXcd out(m, m);
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) {
      out(x, y) = g2.kernel(x * m + x, y * m + x) - g2.kernel(x * m + y, y * m + y);
    }
  return out;
}

MatrixXcd collision_apply(const MarginalDensity& g2, double coupling) {
  return Complex(0.0, coupling) * contact_commutator(g2);
}

MarginalDensity free_propagate(const MarginalDensity& g, double t) {
  if (g.k > 2) throw Error("free propagation is implemented for k <= 2");
  const int m = g.m;
  const Grid grid{1, m, m * g.h};
  MatrixXcd u(m, m);
  const double norm = 1.0 / std::sqrt(static_cast<double>(m));
  for (int k = 0; k < m; ++k)
    for (int x = 0; x < m; ++x) {
      const double phase = -2.0 * M_PI * k * x / m;
      u(k, x) = norm * Complex(std::cos(phase), std::sin(phase));
    }
  VectorXcd phases(m);
  for (int k = 0; k < m; ++k) {
    phases[k] = std::exp(Complex(0.0, -t * grid.k(k) * grid.k(k)));
  }
  const MatrixXcd p = u.adjoint() * phases.asDiagonal() * u;

  MarginalDensity out = g;
  if (g.k == 1) {
    out.kernel = p * g.kernel * p.adjoint();
  } else {
    const MatrixXcd p2 = kron(p, p);
    out.kernel = p2 * g.kernel * p2.adjoint();
  }
  return out;
}

double factorized_hierarchy_residual(const Field& before, const Field& middle,
                                     const Field& after, double dt, double sigma, int k,
                                     Dispersion dispersion) {
  if (!(before.grid == middle.grid) || !(middle.grid == after.grid)) {
    throw Error("field snapshots live on different grids");
  }
  if (middle.grid.dim != 1) throw Error("hierarchy residuals are 1D diagnostics");
  if (k < 1 || k > 2) throw Error("factorized residual supports k in {1, 2}");
  const int m = middle.grid.m;
  const double h = middle.grid.h();
  const Complex iunit(0.0, 1.0);

  const VectorXcd lphi = spectral_minus_laplacian(middle, dispersion);
  const MatrixXcd p = middle.values * middle.values.adjoint();
  const MatrixXcd commutator1 = lphi * middle.values.adjoint() - middle.values * lphi.adjoint();

  MatrixXcd time_term, kinetic, collision;
  if (k == 1) {
    time_term = iunit * (after.values * after.values.adjoint() -
                         before.values * before.values.adjoint()) /
                (2.0 * dt);
    kinetic = commutator1;
    collision = sigma * contact_commutator(projector_pair(middle));
  } else {
    const MatrixXcd pb = before.values * before.values.adjoint();
    const MatrixXcd pa = after.values * after.values.adjoint();
    time_term = iunit * (kron(pa, pa) - kron(pb, pb)) / (2.0 * dt);
    kinetic = kron(commutator1, p) + kron(p, commutator1);
    // Tr_3 [delta(x_j - x_3), gamma^(3)] in closed product form.
    collision.resize(static_cast<long>(m) * m, static_cast<long>(m) * m);
    for (int x1 = 0; x1 < m; ++x1)
      for (int x2 = 0; x2 < m; ++x2)
        for (int y1 = 0; y1 < m; ++y1)
          for (int y2 = 0; y2 < m; ++y2) {
            const double rho1 = std::norm(middle.values[x1]) - std::norm(middle.values[y1]);
            const double rho2 = std::norm(middle.values[x2]) - std::norm(middle.values[y2]);
            collision(x1 * m + x2, y1 * m + y2) = sigma * (rho1 + rho2) * middle.values[x1] *
                                                  middle.values[x2] *
                                                  std::conj(middle.values[y1]) *
                                                  std::conj(middle.values[y2]);
          }
  }

  const MatrixXcd res = time_term - kinetic - collision;
  const double scale = std::max({l2_norm(time_term, h, k), l2_norm(kinetic, h, k),
                                 l2_norm(collision, h, k), 1e-300});
  return l2_norm(res, h, k) / scale;
}

DuhamelCounts duhamel_counts(int k, int m) {
  if (k < 1 || m < 0) throw Error("invalid series order");
  DuhamelCounts out;
  out.xi_summands = 1;
  for (int i = 1; i <= m; ++i) {
    const unsigned long long factor = static_cast<unsigned long long>(k) + i;
    if (out.xi_summands > ~0ULL / factor) throw Error("summand count overflow");
    out.xi_summands *= factor;
  }
  const int exponent = 4 * m + k;
  if (exponent >= 64) throw Error("graph bound overflow");
  out.graph_bound = 1ULL << exponent;
  return out;
}

}  // namespace bec
