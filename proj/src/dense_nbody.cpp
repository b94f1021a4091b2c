#include "bec/dense_nbody.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bec {

namespace {

long ipow(int base, int exp) {
  long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void decode(long idx, int m, int n, int* coords) {
  for (int a = n - 1; a >= 0; --a) {
    coords[a] = static_cast<int>(idx % m);
    idx /= m;
  }
}

}  // namespace

double DenseNBody::mass() const {
  return tensor.squaredNorm() * std::pow(lattice.h(), n);
}

DenseNBody dense_product(const Field& phi, int n) {
  if (phi.grid.dim != 1) throw Error("dense product states are built from 1D fields");
  if (n < 1 || n > 3) throw Error("dense representation is limited to n <= 3");
  DenseNBody psi;
  psi.lattice = LatticeSpec{phi.grid.m, phi.grid.length, std::nullopt};
  psi.n = n;
  const int m = phi.grid.m;
  psi.tensor.resize(ipow(m, n));
  int coords[3] = {0, 0, 0};
  for (long idx = 0; idx < psi.tensor.size(); ++idx) {
    decode(idx, m, n, coords);
    Complex v(1.0, 0.0);
    for (int a = 0; a < n; ++a) v *= phi.values[coords[a]];
    psi.tensor[idx] = v;
  }
  return psi;
}

void symmetrize(DenseNBody& psi) {
  if (psi.n > 3) throw Error("dense representation is limited to n <= 3");
  const int m = psi.lattice.m;
  const int n = psi.n;
  if (n == 1) return;

  const double before = psi.tensor.norm();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  VectorXcd out = VectorXcd::Zero(psi.tensor.size());
  int coords[3] = {0, 0, 0};
  int permuted[3] = {0, 0, 0};
  int count = 0;
  do {
    for (long idx = 0; idx < psi.tensor.size(); ++idx) {
      decode(idx, m, n, coords);
      for (int a = 0; a < n; ++a) permuted[a] = coords[perm[a]];
      long pidx = 0;
      for (int a = 0; a < n; ++a) pidx = pidx * m + permuted[a];
      out[idx] += psi.tensor[pidx];
    }
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  out /= static_cast<double>(count);

  const double after = out.norm();
  if (after < 1e-12 * std::max(before, 1e-300)) {
    throw Error("symmetrization annihilated the state (antisymmetric input)");
  }
  psi.tensor = out * (before / after);
}

DenseHamiltonian::DenseHamiltonian(const LatticeSpec& lat, int n, const ScaledPair& pair,
                                   PairSampling sampling)
    : lat_(lat), n_(n) {
  lat_.validate();
  if (n < 1 || n > 3) throw Error("dense representation is limited to n <= 3");
  size_ = ipow(lat_.m, n_);
  pair_w_ = sample_pair_coupling(lat_, pair, sampling);
  inv_h2_ = 1.0 / (lat_.h() * lat_.h());

  diag_.resize(size_);
  const int m = lat_.m;
  int coords[3] = {0, 0, 0};
  for (long idx = 0; idx < size_; ++idx) {
    decode(idx, m, n_, coords);
    double v = 2.0 * n_ * inv_h2_;  // hopping diagonal
    for (int a = 0; a < n_; ++a) {
      if (lat_.v_ext) v += (*lat_.v_ext)[coords[a]];
      for (int b = a + 1; b < n_; ++b) {
        const int sep = (coords[a] - coords[b] + m) % m;
        v += pair_w_[sep];
      }
    }
    diag_[idx] = v;
  }
}

void DenseHamiltonian::apply(const VectorXcd& in, VectorXcd& out) const {
  if (in.size() != size_) throw Error("tensor size mismatch");
  out.resize(size_);
  const int m = lat_.m;
  for (long idx = 0; idx < size_; ++idx) out[idx] = diag_[idx] * in[idx];
  // Hopping along each coordinate: -(psi(x+h) + psi(x-h))/h^2.
  long stride = 1;
  for (int a = n_ - 1; a >= 0; --a) {
    for (long idx = 0; idx < size_; ++idx) {
      const int x = static_cast<int>((idx / stride) % m);
      const long up = idx + (x + 1 < m ? stride : stride - static_cast<long>(m) * stride);
      const long dn = idx - (x > 0 ? stride : stride - static_cast<long>(m) * stride);
      out[idx] -= inv_h2_ * (in[up] + in[dn]);
    }
    stride *= m;
  }
}

DenseNBody evolve_dense(const DenseNBody& psi, const DenseHamiltonian& h, double dt, int steps,
                        const KrylovOptions& opts) {
  if (psi.n != h.particles()) throw Error("particle count mismatch");
  DenseNBody out = psi;
  auto apply_op = [&h](const VectorXcd& in, VectorXcd& o) { h.apply(in, o); };
  for (int step = 0; step < steps; ++step) {
    krylov_propagate(apply_op, out.tensor, dt, opts);
  }
  return out;
}

EnergyRatioProbe energy_ratio_probe(const DenseNBody& psi, const DenseHamiltonian& h,
                                    const CorrelationFunction* f) {
  EnergyRatioProbe probe;
  const int m = psi.lattice.m;
  const int n = psi.n;
  if (n < 2) throw Error("the second-moment probe needs at least two particles");
  const double hstep = psi.lattice.h();
  const double hn = std::pow(hstep, n);

  VectorXcd state = psi.tensor / (psi.tensor.norm() * std::sqrt(hn));

  VectorXcd hpsi;
  h.apply(state, hpsi);
  probe.lhs = hpsi.squaredNorm() * hn;

  // f_N sampled on the minimum-image lattice separations.
  VectorXd fsep = VectorXd::Ones(m);
  if (f) {
    for (int s = 0; s < m; ++s) {
      fsep[s] = (*f)(std::min(s, m - s) * hstep);
      if (std::abs(fsep[s]) < 1e-12) throw Error("degenerate quotient: f_N vanishes on the grid");
    }
  }

  int coords[3] = {0, 0, 0};
  double max_term = 0.0;
  VectorXcd quotient(state.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (long idx = 0; idx < state.size(); ++idx) {
        decode(idx, m, n, coords);
        const int sep = (coords[i] - coords[j] + m) % m;
        quotient[idx] = state[idx] / fsep[sep];
      }
      const long si = ipow(m, n - 1 - i);
      const long sj = ipow(m, n - 1 - j);
      auto shifted = [&](long idx, long stride, int coord, int dir) {
        const int x = coord;
        const int xs = (x + dir + m) % m;
        return idx + (xs - x) * stride;
      };
      double acc = 0.0;
      for (long idx = 0; idx < state.size(); ++idx) {
        decode(idx, m, n, coords);
        const long pp = shifted(shifted(idx, si, coords[i], 1), sj, coords[j], 1);
        const long pm = shifted(shifted(idx, si, coords[i], 1), sj, coords[j], -1);
        const long mp = shifted(shifted(idx, si, coords[i], -1), sj, coords[j], 1);
        const long mm = shifted(shifted(idx, si, coords[i], -1), sj, coords[j], -1);
        const Complex d =
            (quotient[pp] - quotient[pm] - quotient[mp] + quotient[mm]) / (4.0 * hstep * hstep);
        acc += std::norm(d);
      }
      max_term = std::max(max_term, acc * hn);
    }
  }
  probe.rhs = static_cast<double>(n) * n * max_term;

  if (probe.rhs < 1e-14 * std::max(1.0, probe.lhs)) {
    probe.note = "degenerate: mixed derivative of the quotient vanishes";
  } else {
    probe.ratio = probe.lhs / probe.rhs;
  }
  return probe;
}

}  // namespace bec
