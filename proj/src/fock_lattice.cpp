#include "bec/fock_lattice.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

namespace bec {

void LatticeSpec::validate() const {
  if (m < 8) throw Error("lattice needs at least 8 modes");
  if (!(length > 0.0)) throw Error("lattice length must be positive");
  if (v_ext && v_ext->size() != m) throw Error("trap sample count does not match the lattice");
}

VectorXd sample_pair_coupling(const LatticeSpec& lat, const ScaledPair& pair,
                              PairSampling sampling) {
  lat.validate();
  pair.validate();
  VectorXd w = VectorXd::Zero(lat.m);
  if (pair.base.is_zero()) return w;
  if (pair.base.dim != 1) throw Error("lattice pair coupling requires a 1D profile");

  const double h = lat.h();
  const double rsup = pair.support_radius();
  if (rsup < 2.0 * h) {
    throw Error("resolution constraint violated: interaction range " + std::to_string(rsup) +
                " is below 2h = " + std::to_string(2.0 * h));
  }
  if (rsup > 0.5 * lat.length) {
    throw Error("resolution constraint violated: interaction range exceeds half the box");
  }

  for (int s = 0; s < lat.m; ++s) {
    const double dist = std::min(s, lat.m - s) * h;
    if (sampling == PairSampling::pointwise) {
      w[s] = scaled_eval(pair, dist);
      continue;
    }
    // Cell average (1/h) \int_{dist-h/2}^{dist+h/2} w(|xi|) d xi, clipped to the support.
    double lo = dist - 0.5 * h, hi = dist + 0.5 * h;
    double acc = 0.0;
    if (lo < 0.0) {
      const double upper = std::min(-lo, rsup);
      if (upper > 0.0) acc += integrate([&](double r) { return scaled_eval(pair, r); }, 0.0, upper);
      lo = 0.0;
    }
    hi = std::min(hi, rsup);
    if (hi > lo) acc += integrate([&](double r) { return scaled_eval(pair, r); }, lo, hi);
    w[s] = acc / h;
  }
  return w;
}

FockState product_state(const Field& phi, int particles) {
  if (phi.grid.dim != 1) throw Error("product states are built from 1D fields");
  if (particles < 1 || particles > 20) throw Error("particle count out of range for product state");
  if (std::abs(phi.mass() - 1.0) > 1e-8) throw Error("field must be normalized to unit mass");

  FockState psi;
  psi.lattice = LatticeSpec{phi.grid.m, phi.grid.length, std::nullopt};
  psi.basis = std::make_shared<BosonBasis>(phi.grid.m, particles);
  psi.amps.resize(psi.basis->dim());

  const double sqrt_h = std::sqrt(phi.grid.h());
  std::vector<Complex> c(phi.grid.m);
  for (int x = 0; x < phi.grid.m; ++x) c[x] = phi.values[x] * sqrt_h;

  std::vector<double> fact(particles + 1, 1.0);
  for (int i = 1; i <= particles; ++i) fact[i] = fact[i - 1] * i;

  const int m = phi.grid.m;
  for (long i = 0; i < psi.basis->dim(); ++i) {
    const uint8_t* occ = psi.basis->occ(i);
    double weight = fact[particles];
    Complex amp(1.0, 0.0);
    for (int x = 0; x < m; ++x) {
      if (occ[x] == 0) continue;
      weight /= fact[occ[x]];
      for (int p = 0; p < occ[x]; ++p) amp *= c[x];
    }
    psi.amps[i] = std::sqrt(weight) * amp;
  }
  return psi;
}

namespace {
constexpr uint32_t kFockMagic = 0x4245434b;  // "BECK"
}

void save_fock_binary(const FockState& psi, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  uint32_t magic = kFockMagic;
  int32_t m = psi.modes(), n = psi.particles();
  int64_t dim = psi.basis->dim();
  double length = psi.lattice.length;
  out.write(reinterpret_cast<const char*>(&magic), sizeof magic);
  out.write(reinterpret_cast<const char*>(&m), sizeof m);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
  out.write(reinterpret_cast<const char*>(&length), sizeof length);
  out.write(reinterpret_cast<const char*>(psi.amps.data()),
            static_cast<std::streamsize>(dim * sizeof(Complex)));
}

FockState load_fock_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  uint32_t magic = 0;
  int32_t m = 0, n = 0;
  int64_t dim = 0;
  double length = 0.0;
  in.read(reinterpret_cast<char*>(&magic), sizeof magic);
  if (magic != kFockMagic) throw Error("not a state checkpoint: " + path);
  in.read(reinterpret_cast<char*>(&m), sizeof m);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&dim), sizeof dim);
  in.read(reinterpret_cast<char*>(&length), sizeof length);
  FockState psi;
  psi.lattice = LatticeSpec{m, length, std::nullopt};
  psi.basis = std::make_shared<BosonBasis>(m, n);
  if (psi.basis->dim() != dim) throw Error("corrupt state checkpoint: " + path);
  psi.amps.resize(dim);
  in.read(reinterpret_cast<char*>(psi.amps.data()),
          static_cast<std::streamsize>(dim * sizeof(Complex)));
  if (!in) throw Error("truncated state checkpoint: " + path);
  return psi;
}

LatticeHamiltonian::LatticeHamiltonian(const LatticeSpec& lat,
                                       std::shared_ptr<const BosonBasis> basis,
                                       const ScaledPair& pair, PairSampling sampling)
    : lat_(lat), basis_(std::move(basis)) {
  lat_.validate();
  if (!basis_) throw Error("null basis");
  if (basis_->modes() != lat_.m) throw Error("basis does not match the lattice");
  pair_w_ = sample_pair_coupling(lat_, pair, sampling);

  const int m = lat_.m;
  const int n = basis_->particles();
  const long dim = basis_->dim();
  const double h = lat_.h();
  const double inv_h2 = 1.0 / (h * h);

  diag_.resize(dim);
  row_offset_.assign(dim + 1, 0);

  std::vector<int> occupied;
  occupied.reserve(n);

  // Pass 1: diagonal and row sizes.
  for (long i = 0; i < dim; ++i) {
    const uint8_t* occ = basis_->occ(i);
    occupied.clear();
    double trap = 0.0;
    for (int x = 0; x < m; ++x) {
      if (occ[x] > 0) {
        occupied.push_back(x);
        if (lat_.v_ext) trap += (*lat_.v_ext)[x] * occ[x];
      }
    }
    double pair_acc = 0.0;
    for (int a : occupied) {
      for (int b : occupied) {
        const int sep = a >= b ? a - b : a - b + m;
        pair_acc += pair_w_[sep] * occ[a] * occ[b];
      }
    }
    pair_acc -= pair_w_[0] * n;
    diag_[i] = 2.0 * n * inv_h2 + trap + 0.5 * pair_acc;
    row_offset_[i + 1] = row_offset_[i] + 2 * static_cast<long>(occupied.size());
  }

  cols_.resize(row_offset_[dim]);
  hop_.resize(row_offset_[dim]);

  // Pass 2: hopping moves a+_y a_x for y = x +- 1 (periodic).
  std::vector<uint8_t> target(m);
  for (long i = 0; i < dim; ++i) {
    const uint8_t* occ = basis_->occ(i);
    long slot = row_offset_[i];
    for (int x = 0; x < m; ++x) {
      if (occ[x] == 0) continue;
      for (int dx : {1, m - 1}) {
        const int y = (x + dx) % m;
        std::memcpy(target.data(), occ, m);
        target[x] -= 1;
        target[y] += 1;
        cols_[slot] = static_cast<int32_t>(basis_->rank(target.data()));
        hop_[slot] = -std::sqrt(static_cast<double>(occ[x]) * (occ[y] + 1.0)) * inv_h2;
        ++slot;
      }
    }
  }

  bound_ = 0.0;
  for (long i = 0; i < dim; ++i) {
    double row = std::abs(diag_[i]);
    for (long s = row_offset_[i]; s < row_offset_[i + 1]; ++s) row += std::abs(hop_[s]);
    bound_ = std::max(bound_, row);
  }
}

void LatticeHamiltonian::apply(const VectorXcd& in, VectorXcd& out) const {
  const long dim = basis_->dim();
  if (in.size() != dim) throw Error("state dimension mismatch");
  out.resize(dim);
  const Complex* pin = in.data();
  Complex* pout = out.data();
  for (long i = 0; i < dim; ++i) {
    Complex acc = diag_[i] * pin[i];
    for (long s = row_offset_[i]; s < row_offset_[i + 1]; ++s) {
      acc += hop_[s] * pin[cols_[s]];
    }
    pout[i] = acc;
  }
}

VectorXcd LatticeHamiltonian::operator*(const VectorXcd& in) const {
  VectorXcd out;
  apply(in, out);
  return out;
}

std::pair<double, double> expectation_moments(const FockState& psi,
                                              const LatticeHamiltonian& h) {
  const double n2 = psi.amps.squaredNorm();
  if (n2 <= 0.0) throw Error("zero state");
  VectorXcd hpsi;
  h.apply(psi.amps, hpsi);
  const double e = psi.amps.dot(hpsi).real() / n2;
  const double e2 = hpsi.squaredNorm() / n2;
  return {e, e2};
}

namespace {

// One adaptive Lanczos exponential substep; recurses on halved steps when the
// truncation estimate exceeds the budget.
void krylov_substep(const std::function<void(const VectorXcd&, VectorXcd&)>& apply_op,
                    VectorXcd& psi, double tau, const KrylovOptions& opts, int depth) {
  const double beta0 = psi.norm();
  if (beta0 == 0.0 || tau == 0.0) return;

  const int max_dim = std::max(4, opts.max_dim);
  std::vector<VectorXcd> v;
  v.reserve(max_dim + 1);
  v.push_back(psi / beta0);
  std::vector<double> alpha, beta;
  bool breakdown = false;

  VectorXcd w;
  for (int j = 0; j < max_dim; ++j) {
    apply_op(v[j], w);
    if (j > 0) w -= beta[j - 1] * v[j - 1];
    const double a = v[j].dot(w).real();
    alpha.push_back(a);
    w -= a * v[j];
    for (size_t l = 0; l < v.size(); ++l) {  // one reorthogonalization pass
      w -= v[l].dot(w) * v[l];
    }
    const double b = w.norm();
    const double scale = std::abs(a) + (j > 0 ? std::abs(beta[j - 1]) : 0.0) + 1.0;
    if (b < 1e-13 * scale) {
      breakdown = true;  // invariant subspace: the small exponential is exact
      break;
    }
    beta.push_back(b);
    if (j + 1 < max_dim) v.push_back(w / b);
  }
  const int m = static_cast<int>(alpha.size());

  auto small_exp = [&](int dim_t) -> Eigen::VectorXcd {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dim_t, dim_t);
    for (int i = 0; i < dim_t; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < dim_t) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    Eigen::VectorXcd phases(dim_t);
    for (int i = 0; i < dim_t; ++i) {
      phases[i] = std::exp(Complex(0.0, -tau * es.eigenvalues()[i]));
    }
    Eigen::VectorXcd e1 = es.eigenvectors().row(0).cast<Complex>();
    return es.eigenvectors().cast<Complex>() * (phases.array() * e1.array()).matrix();
  };

  const Eigen::VectorXcd y = small_exp(m);
  if (!breakdown && m > 4) {
    const Eigen::VectorXcd y_probe = small_exp(m - 3);
    double err = 0.0;
    for (int i = 0; i < m; ++i) {
      const Complex p = i < m - 3 ? y_probe[i] : Complex(0.0, 0.0);
      err += std::norm(y[i] - p);
    }
    err = std::sqrt(err);
    if (err > opts.tol) {
      if (depth >= 24) {
        throw Error("propagator step control failed: reduce dt");
      }
      krylov_substep(apply_op, psi, 0.5 * tau, opts, depth + 1);
      krylov_substep(apply_op, psi, 0.5 * tau, opts, depth + 1);
      return;
    }
  }

  VectorXcd result = VectorXcd::Zero(psi.size());
  for (int i = 0; i < static_cast<int>(v.size()) && i < m; ++i) {
    result += (beta0 * y[i]) * v[i];
  }
  psi = std::move(result);
}

}  // namespace

void krylov_propagate(const std::function<void(const VectorXcd&, VectorXcd&)>& apply_op,
                      VectorXcd& psi, double t, const KrylovOptions& opts) {
  krylov_substep(apply_op, psi, t, opts, 0);
}

FockState evolve_manybody(const FockState& psi, const LatticeHamiltonian& h, double dt, int steps,
                          const KrylovOptions& opts, const FockObserver* obs) {
  if (psi.basis != h.basis() && psi.basis->dim() != h.basis()->dim()) {
    throw Error("state and Hamiltonian bases differ");
  }
  FockState out = psi;
  auto apply_op = [&h](const VectorXcd& in, VectorXcd& o) { h.apply(in, o); };
  if (obs) (*obs)(0, 0.0, out);
  for (int step = 0; step < steps; ++step) {
    krylov_propagate(apply_op, out.amps, dt, opts);
    if (obs) (*obs)(step + 1, (step + 1) * dt, out);
  }
  return out;
}

std::pair<double, VectorXcd> lowest_eigenpair(
    const std::function<void(const VectorXcd&, VectorXcd&)>& apply_op, long dim, int iters,
    uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  VectorXcd start(dim);
  for (long i = 0; i < dim; ++i) start[i] = Complex(normal(rng), normal(rng));
  start /= start.norm();

  std::vector<VectorXcd> v{start};
  std::vector<double> alpha, beta;
  VectorXcd w;
  const int max_it = static_cast<int>(std::min<long>(iters, dim));
  for (int j = 0; j < max_it; ++j) {
    apply_op(v[j], w);
    if (j > 0) w -= beta[j - 1] * v[j - 1];
    const double a = v[j].dot(w).real();
    alpha.push_back(a);
    w -= a * v[j];
    for (size_t l = 0; l < v.size(); ++l) w -= v[l].dot(w) * v[l];
    const double b = w.norm();
    if (b < 1e-13 * (std::abs(a) + 1.0)) break;
    beta.push_back(b);
    if (j + 1 < max_it) v.push_back(w / b);
  }
  const int m = static_cast<int>(alpha.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    t(i, i) = alpha[i];
    if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  const Eigen::VectorXd u = es.eigenvectors().col(0);
  VectorXcd vec = VectorXcd::Zero(dim);
  for (int i = 0; i < static_cast<int>(v.size()) && i < m; ++i) vec += u[i] * v[i];
  vec /= vec.norm();
  return {es.eigenvalues()[0], vec};
}

}  // namespace bec
