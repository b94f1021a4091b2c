#pragma once

#include "bec/dense_nbody.hpp"
#include "bec/fock_lattice.hpp"
#include "bec/scattering.hpp"

namespace bec {

/// k-particle reduced density kernel gamma(x_1..x_k; x'_1..x'_k) on a 1D
/// lattice, stored as an (m^k) x (m^k) matrix with multi-indices flattened
/// row-major. Traces and compositions carry the measure weight h^k per side;
/// the type invariants are unit trace, Hermiticity, positivity, and bosonic
/// exchange symmetry.
struct MarginalDensity {
  int k = 1;
  int m = 0;
  double h = 0.0;
  MatrixXcd kernel;

  double trace() const;
};

/// Partial trace of |psi><psi| over all but the first k particles.
MarginalDensity reduce(const FockState& psi, int k);
MarginalDensity reduce(const DenseNBody& psi, int k);

struct MarginalInvariants {
  double hermiticity_defect = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;
  double symmetry_defect = 0.0;  // bosonic exchange, k = 2 only
};

MarginalInvariants check_invariants(const MarginalDensity& g);

/// Tr |a - b| via the eigenvalues of the Hermitian difference.
double trace_distance(const MarginalDensity& a, const MarginalDensity& b);

/// Dominant eigenpair by power iteration; the eigenvector is returned as a
/// grid function with sum |v|^2 h = 1.
std::pair<double, VectorXcd> condensate_fraction(const MarginalDensity& g1);

/// Tr_2 gamma^(2) -> gamma^(1).
MarginalDensity partial_trace_last(const MarginalDensity& g2);

/// Rank-one projector |phi><phi| and its tensor square (phi normalized).
MarginalDensity projector(const Field& phi);
MarginalDensity projector_pair(const Field& phi);
MarginalDensity tensor_square(const MarginalDensity& g1);

struct PairCorrelation {
  std::vector<double> r;            // separations 0..L/2
  std::vector<double> g2;           // normalized pair correlation
  std::vector<double> g2_over_f2;   // filled when a correlation function is supplied
};

PairCorrelation pair_correlation(const MarginalDensity& g2,
                                 const CorrelationFunction* f = nullptr);

/// Tr |(1-Lap_1)^{1/2}...(1-Lap_k)^{1/2} gamma (1-Lap_k)^{1/2}...(1-Lap_1)^{1/2}|
/// with the spectral multiplier on the grid momenta (k <= 2).
double hk_norm(const MarginalDensity& g);

/// Total quasi-momentum: the phase of the one-site translation operator
/// expectation, divided by -h. On the lattice this is the exactly conserved
/// momentum (mode-sum momentum is conserved only modulo the reciprocal
/// lattice once interactions scatter across the zone boundary).
double total_momentum(const FockState& psi);

void save_marginal_csv(const MarginalDensity& g, const std::string& path);

}  // namespace bec
