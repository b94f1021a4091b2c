#pragma once

#include <optional>

#include "bec/fock_lattice.hpp"
#include "bec/scattering.hpp"

namespace bec {

/// First-quantized dense tensor over m^n lattice points (oracle path, n <= 3).
/// Index (x1, ..., xn) is flattened row-major with x1 slowest; mass convention
/// h^n sum |psi|^2 = 1.
struct DenseNBody {
  LatticeSpec lattice;
  int n = 0;
  VectorXcd tensor;

  long size() const { return tensor.size(); }
  double mass() const;
};

DenseNBody dense_product(const Field& phi, int n);

/// Averages over all n! coordinate permutations and renormalizes.
/// Throws when the projection annihilates the state (antisymmetric input).
void symmetrize(DenseNBody& psi);

/// Matrix-free first-quantized H = sum_j (-Lap_j) + sum_j V_ext(x_j)
/// + sum_{i<j} w(x_i - x_j) with the hopping Laplacian.
class DenseHamiltonian {
 public:
  DenseHamiltonian(const LatticeSpec& lat, int n, const ScaledPair& pair,
                   PairSampling sampling = PairSampling::cell_average);

  void apply(const VectorXcd& in, VectorXcd& out) const;
  const VectorXd& pair_samples() const { return pair_w_; }
  int particles() const { return n_; }

 private:
  LatticeSpec lat_;
  int n_;
  long size_;
  VectorXd pair_w_;
  VectorXd diag_;
  double inv_h2_;
};

DenseNBody evolve_dense(const DenseNBody& psi, const DenseHamiltonian& h, double dt, int steps,
                        const KrylovOptions& opts = {});

/// Both sides of the second-moment bound: lhs = <H^2>, rhs = N^2 max_{i<j}
/// || D_i D_j (psi / f_N(x_i - x_j)) ||^2 with centered mixed differences.
struct EnergyRatioProbe {
  double lhs = 0.0;
  double rhs = 0.0;
  std::optional<double> ratio;
  std::string note;  // set when the quotient or the ratio is degenerate
};

EnergyRatioProbe energy_ratio_probe(const DenseNBody& psi, const DenseHamiltonian& h,
                                    const CorrelationFunction* f = nullptr);

}  // namespace bec
