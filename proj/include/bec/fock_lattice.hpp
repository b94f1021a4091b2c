#pragma once

#include <memory>
#include <optional>

#include "bec/boson_basis.hpp"
#include "bec/field.hpp"
#include "bec/potentials.hpp"

namespace bec {

/// 1D periodic lattice carrier for the many-body runs.
struct LatticeSpec {
  int m = 0;
  double length = 0.0;
  std::optional<VectorXd> v_ext;

  double h() const { return length / m; }
  Grid grid() const { return Grid{1, m, length}; }
  void validate() const;
};

/// How the continuum pair interaction is put on the lattice. Cell averaging
/// keeps h * sum_s w_eff(s) equal to the continuum integral b0/N exactly,
/// which is what the mean-field comparison depends on.
enum class PairSampling { cell_average, pointwise };

/// w evaluated per separation index s = 0..m-1 (minimum image).
VectorXd sample_pair_coupling(const LatticeSpec& lat, const ScaledPair& pair,
                              PairSampling sampling = PairSampling::cell_average);

/// Fixed-N bosonic state over the lattice modes in the occupation basis.
struct FockState {
  LatticeSpec lattice;
  std::shared_ptr<const BosonBasis> basis;
  VectorXcd amps;

  int modes() const { return basis->modes(); }
  int particles() const { return basis->particles(); }
  double norm() const { return amps.norm(); }
};

/// Condensate state (sum_x c_x a_x^dag)^N |0> / sqrt(N!) for c_x = phi(x) sqrt(h).
FockState product_state(const Field& phi, int particles);

void save_fock_binary(const FockState& psi, const std::string& path);
FockState load_fock_binary(const std::string& path);

/// Matrix-free H = hopping Laplacian + trap + (1/2) sum_{x,y} w(x-y) a+_x a+_y a_y a_x,
/// stored as a CSR hopping structure plus a diagonal.
class LatticeHamiltonian {
 public:
  LatticeHamiltonian(const LatticeSpec& lat, std::shared_ptr<const BosonBasis> basis,
                     const ScaledPair& pair, PairSampling sampling = PairSampling::cell_average);

  void apply(const VectorXcd& in, VectorXcd& out) const;
  VectorXcd operator*(const VectorXcd& in) const;

  const LatticeSpec& lattice() const { return lat_; }
  const std::shared_ptr<const BosonBasis>& basis() const { return basis_; }
  const VectorXd& pair_samples() const { return pair_w_; }
  double spectral_bound() const { return bound_; }

 private:
  LatticeSpec lat_;
  std::shared_ptr<const BosonBasis> basis_;
  VectorXd pair_w_;
  VectorXd diag_;
  std::vector<long> row_offset_;
  std::vector<int32_t> cols_;
  std::vector<double> hop_;
  double bound_ = 0.0;
};

/// <H> and <H^2> for a normalized state.
std::pair<double, double> expectation_moments(const FockState& psi, const LatticeHamiltonian& h);

struct KrylovOptions {
  int max_dim = 16;
  double tol = 1e-11;  // per-step truncation target (absolute, unit-norm state)
};

/// psi <- exp(-i t A) psi for a Hermitian operator, Lanczos with adaptive
/// substep halving. Reports irreducible step-control failure.
void krylov_propagate(const std::function<void(const VectorXcd&, VectorXcd&)>& apply_op,
                      VectorXcd& psi, double t, const KrylovOptions& opts = {});

using FockObserver = std::function<void(int, double, const FockState&)>;

/// Schroedinger evolution over steps * dt, one Krylov exponential per step.
FockState evolve_manybody(const FockState& psi, const LatticeHamiltonian& h, double dt, int steps,
                          const KrylovOptions& opts = {}, const FockObserver* obs = nullptr);

/// Lowest eigenpair by Lanczos with full reorthogonalization (small spectra).
std::pair<double, VectorXcd> lowest_eigenpair(
    const std::function<void(const VectorXcd&, VectorXcd&)>& apply_op, long dim, int iters = 200,
    uint64_t seed = 12345);

}  // namespace bec
