#pragma once

#include "bec/gp_field.hpp"
#include "bec/marginals.hpp"

namespace bec {

/// Uniformly spaced marginal snapshots of a many-body run, together with the
/// exact pair-coupling samples used by the generator.
struct MarginalTrajectory {
  std::vector<double> times;
  std::vector<MarginalDensity> gamma1;
  std::vector<MarginalDensity> gamma2;  // optional (needed for the k=1 residual)
  int n = 0;
  int m = 0;
  double h = 0.0;
  VectorXd pair_w;  // per separation index, as sampled for the Hamiltonian
};

/// Evolves psi and records gamma^(1) (and gamma^(2) when requested) at every step.
MarginalTrajectory record_trajectory(const FockState& psi, const LatticeHamiltonian& h, double dt,
                                     int steps, bool with_gamma2,
                                     const KrylovOptions& opts = {});

/// Normalized residual of the k = 1 reduced evolution equation at each
/// interior snapshot: i d/dt gamma1 - [(-Lap_1 + Lap'_1) gamma1]
/// - (N-1) h sum_v (w(x-v) - w(y-v)) gamma2(x,v; y,v).
std::vector<double> bbgky_residual_k1(const MarginalTrajectory& traj);

/// Contact commutator contraction Tr_2 [delta(x1 - x2), gamma2] as a
/// one-particle kernel (the lattice delta is Kronecker/h).
MatrixXcd contact_commutator(const MarginalDensity& g2);

/// Collision operator kernel i c [gamma2(x,x;y,x) - gamma2(x,y;y,y)] with
/// c = 8 pi a0 (or the 1D coupling sigma in its place).
MatrixXcd collision_apply(const MarginalDensity& g2, double coupling);

/// Conjugation by the free propagator exp(i t Lap) per coordinate (k <= 2).
MarginalDensity free_propagate(const MarginalDensity& g, double t);

/// Residual of the factorized infinite hierarchy at order k for three
/// consecutive field snapshots (centered time difference at the middle one).
double factorized_hierarchy_residual(const Field& before, const Field& middle,
                                     const Field& after, double dt, double sigma, int k,
                                     Dispersion dispersion = Dispersion::continuum);

struct DuhamelCounts {
  unsigned long long xi_summands = 0;  // (m+k)!/k!
  unsigned long long graph_bound = 0;  // 2^{4m+k}
};

/// Exact integer bookkeeping of the iterated-series sizes; throws on overflow.
DuhamelCounts duhamel_counts(int k, int m);

}  // namespace bec
