#include "bec/marginals.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <fstream>

namespace bec {

namespace {

// [a_x psi] for every x, as an m x dim(N-1) matrix of amplitudes.
MatrixXcd lowering_matrix(const FockState& psi, const BosonBasis& reduced) {
  const BosonBasis& basis = *psi.basis;
  const int m = basis.modes();
  MatrixXcd a = MatrixXcd::Zero(m, reduced.dim());
  std::vector<uint8_t> target(m);
  for (long i = 0; i < basis.dim(); ++i) {
    const Complex amp = psi.amps[i];
    if (amp == Complex(0.0, 0.0)) continue;
    const uint8_t* occ = basis.occ(i);
    for (int x = 0; x < m; ++x) {
      if (occ[x] == 0) continue;
      std::copy(occ, occ + m, target.begin());
      target[x] -= 1;
      a(x, reduced.rank(target.data())) += std::sqrt(static_cast<double>(occ[x])) * amp;
    }
  }
  return a;
}

// [a_{x2} a_{x1} psi] for every ordered pair, as an m^2 x dim(N-2) matrix.
MatrixXcd double_lowering_matrix(const FockState& psi, const BosonBasis& reduced) {
  const BosonBasis& basis = *psi.basis;
  const int m = basis.modes();
  MatrixXcd a = MatrixXcd::Zero(static_cast<long>(m) * m, reduced.dim());
  std::vector<uint8_t> target(m);
  for (long i = 0; i < basis.dim(); ++i) {
    const Complex amp = psi.amps[i];
    if (amp == Complex(0.0, 0.0)) continue;
    const uint8_t* occ = basis.occ(i);
    for (int x1 = 0; x1 < m; ++x1) {
      if (occ[x1] == 0) continue;
      for (int x2 = 0; x2 < m; ++x2) {
        double factor;
        if (x1 == x2) {
          if (occ[x1] < 2) continue;
          factor = std::sqrt(static_cast<double>(occ[x1]) * (occ[x1] - 1));
        } else {
          if (occ[x2] == 0) continue;
          factor = std::sqrt(static_cast<double>(occ[x1]) * occ[x2]);
        }
        std::copy(occ, occ + m, target.begin());
        target[x1] -= 1;
        target[x2] -= 1;
        a(static_cast<long>(x1) * m + x2, reduced.rank(target.data())) += factor * amp;
      }
    }
  }
  return a;
}

}  // namespace

double MarginalDensity::trace() const {
  return kernel.trace().real() * std::pow(h, k);
}

MarginalDensity reduce(const FockState& psi, int k) {
  const int n = psi.particles();
  if (k < 1 || k > n) throw Error("invalid marginal order");
  if (k > 2) throw Error("occupation-basis marginals are limited to k <= 2");
  const int m = psi.modes();
  const double h = psi.lattice.h();

  MarginalDensity g;
  g.k = k;
  g.m = m;
  g.h = h;
  if (k == 1) {
    BosonBasis reduced(m, n - 1);
    const MatrixXcd a = lowering_matrix(psi, reduced);
    g.kernel = (a * a.adjoint()) / (static_cast<double>(n) * h);
  } else {
    BosonBasis reduced(m, n - 2);
    const MatrixXcd a = double_lowering_matrix(psi, reduced);
    g.kernel = (a * a.adjoint()) / (static_cast<double>(n) * (n - 1) * h * h);
  }
  const double nrm = psi.amps.squaredNorm();
  if (std::abs(nrm - 1.0) > 1e-12) g.kernel /= nrm;
  return g;
}

MarginalDensity reduce(const DenseNBody& psi, int k) {
  const int n = psi.n;
  if (k < 1 || k > n) throw Error("invalid marginal order");
  const int m = psi.lattice.m;
  const double h = psi.lattice.h();
  long rows = 1, cols = 1;
  for (int i = 0; i < k; ++i) rows *= m;
  for (int i = k; i < n; ++i) cols *= m;

  Eigen::Map<const MatrixXcd> p(psi.tensor.data(), cols, rows);  // column-major view
  // tensor is row-major (x1 slowest), so the x1..xk block indexes columns here.
  MarginalDensity g;
  g.k = k;
  g.m = m;
  g.h = h;
  g.kernel = (p.transpose() * p.conjugate()) * std::pow(h, n - k);
  const double mass = psi.mass();
  if (std::abs(mass - 1.0) > 1e-12) g.kernel /= mass;
  return g;
}

MarginalInvariants check_invariants(const MarginalDensity& g) {
  MarginalInvariants inv;
  inv.hermiticity_defect = (g.kernel - g.kernel.adjoint()).cwiseAbs().maxCoeff();
  inv.trace_error = std::abs(g.trace() - 1.0);
  const MatrixXcd op = 0.5 * (g.kernel + g.kernel.adjoint()) * std::pow(g.h, g.k);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(op, Eigen::EigenvaluesOnly);
  inv.min_eigenvalue = es.eigenvalues().minCoeff();
  if (g.k == 2) {
    double defect = 0.0;
    const int m = g.m;
    for (int x1 = 0; x1 < m; ++x1)
      for (int x2 = 0; x2 < m; ++x2)
        for (int y1 = 0; y1 < m; ++y1)
          for (int y2 = 0; y2 < m; ++y2) {
            const Complex a = g.kernel(x1 * m + x2, y1 * m + y2);
            const Complex b = g.kernel(x2 * m + x1, y2 * m + y1);
            defect = std::max(defect, std::abs(a - b));
          }
    inv.symmetry_defect = defect;
  }
  return inv;
}

double trace_distance(const MarginalDensity& a, const MarginalDensity& b) {
  if (a.k != b.k || a.m != b.m) throw Error("marginal shape mismatch");
  const MatrixXcd diff = (a.kernel - b.kernel) * std::pow(a.h, a.k);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (diff + diff.adjoint()),
                                              Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

std::pair<double, VectorXcd> condensate_fraction(const MarginalDensity& g1) {
  if (g1.k != 1) throw Error("condensate fraction expects a one-particle marginal");
  const MatrixXcd op = g1.kernel * g1.h;
  VectorXcd v = VectorXcd::Zero(g1.m);
  // Deterministic start: the dominant diagonal column.
  long best = 0;
  op.diagonal().real().maxCoeff(&best);
  v[best] = 1.0;
  double lambda = 0.0;
  for (int it = 0; it < 20000; ++it) {
    VectorXcd w = op * v;
    const double nw = w.norm();
    if (nw == 0.0) break;
    w /= nw;
    const double next = (w.dot(op * w)).real();
    const bool done = std::abs(next - lambda) < 1e-14 * std::max(1.0, std::abs(next)) && it > 2;
    lambda = next;
    v = std::move(w);
    if (done) break;
  }
  v /= std::sqrt(g1.h);  // grid-function normalization sum |v|^2 h = 1
  return {lambda, v};
}

MarginalDensity partial_trace_last(const MarginalDensity& g2) {
  if (g2.k != 2) throw Error("partial trace expects a two-particle marginal");
  MarginalDensity g;
  g.k = 1;
  g.m = g2.m;
  g.h = g2.h;
  g.kernel = MatrixXcd::Zero(g2.m, g2.m);
  for (int x = 0; x < g2.m; ++x)
    for (int y = 0; y < g2.m; ++y) {
      Complex acc(0.0, 0.0);
      for (int v = 0; v < g2.m; ++v) acc += g2.kernel(x * g2.m + v, y * g2.m + v);
      g.kernel(x, y) = acc * g2.h;
    }
  return g;
}

MarginalDensity projector(const Field& phi) {
  if (phi.grid.dim != 1) throw Error("projector kernels are 1D here");
  MarginalDensity g;
  g.k = 1;
  g.m = phi.grid.m;
  g.h = phi.grid.h();
  g.kernel = phi.values * phi.values.adjoint();
  return g;
}

MarginalDensity tensor_square(const MarginalDensity& g1) {
  if (g1.k != 1) throw Error("tensor square expects a one-particle marginal");
  MarginalDensity g;
  g.k = 2;
  g.m = g1.m;
  g.h = g1.h;
  const int m = g1.m;
  g.kernel.resize(static_cast<long>(m) * m, static_cast<long>(m) * m);
  for (int x1 = 0; x1 < m; ++x1)
    for (int x2 = 0; x2 < m; ++x2)
      for (int y1 = 0; y1 < m; ++y1)
        for (int y2 = 0; y2 < m; ++y2)
          g.kernel(x1 * m + x2, y1 * m + y2) = g1.kernel(x1, y1) * g1.kernel(x2, y2);
  return g;
}

MarginalDensity projector_pair(const Field& phi) {
  return tensor_square(projector(phi));
}

PairCorrelation pair_correlation(const MarginalDensity& g2, const CorrelationFunction* f) {
  if (g2.k != 2) throw Error("pair correlation expects a two-particle marginal");
  const int m = g2.m;
  const MarginalDensity g1 = partial_trace_last(g2);

  PairCorrelation out;
  for (int s = 0; s <= m / 2; ++s) {
    double num = 0.0, den = 0.0;
    for (int x = 0; x < m; ++x) {
      const int y = (x + s) % m;
      num += g2.kernel(x * m + y, x * m + y).real();
      den += g1.kernel(x, x).real() * g1.kernel(y, y).real();
    }
    const double r = s * g2.h;
    out.r.push_back(r);
    const double val = num / den;
    out.g2.push_back(val);
    if (f) {
      const double fr = (*f)(r);
      out.g2_over_f2.push_back(val / (fr * fr));
    }
  }
  return out;
}

namespace {

// Unitary DFT matrix and the (1 + k^2)^{1/2} spectral multiplier on the grid.
MatrixXcd sobolev_multiplier(int m, double length) {
  MatrixXcd u(m, m);
  const double norm = 1.0 / std::sqrt(static_cast<double>(m));
  Grid g{1, m, length};
  for (int k = 0; k < m; ++k)
    for (int x = 0; x < m; ++x) {
      const double phase = -2.0 * M_PI * k * x / m;
      u(k, x) = norm * Complex(std::cos(phase), std::sin(phase));
    }
  VectorXd mult(m);
  for (int k = 0; k < m; ++k) mult[k] = std::sqrt(1.0 + g.k(k) * g.k(k));
  return u.adjoint() * mult.asDiagonal() * u;
}

}  // namespace

double hk_norm(const MarginalDensity& g) {
  if (g.k > 2) throw Error("the weighted norm is implemented for k <= 2");
  const MatrixXcd s = sobolev_multiplier(g.m, g.m * g.h);
  MatrixXcd op;
  if (g.k == 1) {
    op = s * (g.kernel * g.h) * s;
  } else {
    const long mm = static_cast<long>(g.m) * g.m;
    MatrixXcd s2(mm, mm);
    for (int a = 0; a < g.m; ++a)
      for (int b = 0; b < g.m; ++b)
        for (int c = 0; c < g.m; ++c)
          for (int d = 0; d < g.m; ++d)
            s2(a * g.m + b, c * g.m + d) = s(a, c) * s(b, d);
    op = s2 * (g.kernel * g.h * g.h) * s2;
  }
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (op + op.adjoint()),
                                              Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double total_momentum(const FockState& psi) {
  // <T> for the one-site translation T |occ> = |occ shifted right>; the
  // quasi-momentum is -arg<T>/h and is exactly conserved for V_ext = 0.
  const BosonBasis& basis = *psi.basis;
  const int m = basis.modes();
  std::vector<uint8_t> shifted(m);
  Complex overlap(0.0, 0.0);
  for (long i = 0; i < basis.dim(); ++i) {
    const uint8_t* occ = basis.occ(i);
    for (int x = 0; x < m; ++x) shifted[(x + 1) % m] = occ[x];
    overlap += std::conj(psi.amps[basis.rank(shifted.data())]) * psi.amps[i];
  }
  return -std::arg(overlap) / psi.lattice.h();
}

void save_marginal_csv(const MarginalDensity& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out.precision(17);
  out << "# k=" << g.k << " m=" << g.m << " h=" << g.h << "\n";
  for (long i = 0; i < g.kernel.rows(); ++i) {
    for (long j = 0; j < g.kernel.cols(); ++j) {
      if (j) out << ",";
      out << g.kernel(i, j).real() << "+" << g.kernel(i, j).imag() << "i";
    }
    out << "\n";
  }
}

}  // namespace bec
