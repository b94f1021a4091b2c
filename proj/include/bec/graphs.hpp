#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bec/numerics.hpp"

namespace bec {

/// One of 2k disjoint, paired, oriented, rooted trees with m vertices in
/// total. Edges 0..2k-1 are the roots (edge j belongs to tree j); each vertex
/// carries one father edge and three son edges, exactly one of them marked.
/// The father/marked-son chains are the particle lines; the two unmarked sons
/// open the lines of the fresh particle.
struct FeynmanGraph {
  int k = 0;
  int m = 0;
  struct Vertex {
    int father = -1;
    int sons[3] = {-1, -1, -1};
  };
  std::vector<Vertex> vertices;
  std::vector<int> edge_tree;          // tree index per edge
  std::vector<int> vertex_on_edge;     // vertex whose father this edge is, or -1
  std::vector<int> parent_vertex_of;   // vertex owning this edge as a son, or -1 (roots)
  std::vector<char> marked;            // marked son flags per edge

  int edge_count() const { return static_cast<int>(edge_tree.size()); }
  bool is_leaf(int e) const { return vertex_on_edge[e] < 0; }
  std::vector<int> roots() const;
  std::vector<int> leaves() const;
  /// Orientation +1 on even (ket) trees, -1 on odd (bra) trees.
  int tau(int e) const { return edge_tree[e] % 2 == 0 ? 1 : -1; }

  /// Roots are paired (0,1), (2,3), ...
  std::vector<std::pair<int, int>> root_pairing() const;
  /// Leaf pairing induced by the unmarked-son rule; throws on malformed graphs.
  std::vector<std::pair<int, int>> leaf_pairing() const;

  /// Canonical text encoding (nested parenthesization per tree); two graphs
  /// are equal iff their encodings match.
  std::string canonical() const;
};

/// Exhaustive construction by sequential vertex attachment, deduplicated by
/// canonical form. Desk-scale bound k + m <= 8.
std::vector<FeynmanGraph> enumerate_graphs(int k, int m);

struct PairingReport {
  bool ok = true;
  std::string violated;  // name of the first violated invariant
  int edges = 0, roots = 0, leaves = 0, vertices = 0;
  bool leaf_pairing_perfect = false;
  bool partial_order_ok = false;
};

PairingReport validate_pairing(const FeynmanGraph& g);

/// Large-momentum exponent budget at cutoff kappa: volume from the loop
/// integrations, decay from leaves, propagators, and the observable.
struct PowerCounting {
  int volume = 0;       // 10k + 10m
  int leaf = 0;         // -(5k + 5m)
  int propagator = 0;   // -(4k + 6m)
  int observable = 0;   // -6k
  int total = 0;        // -(5k + m)
};

PowerCounting power_counting(int k, int m);

/// Symbolic bound record C^{k+m} t^{m/4} per graph, aggregated over the class
/// by the enumerated count when available (the 2^{4m+k} bound otherwise).
struct AmplitudeBound {
  int c_exponent = 0;       // k + m
  double t_exponent = 0.0;  // m / 4
  double t = 0.0;
  unsigned long long count = 0;
  bool count_is_exact = false;
};

AmplitudeBound amplitude_bound(int k, int m, double t,
                               std::optional<unsigned long long> enumerated_count = std::nullopt);

}  // namespace bec
