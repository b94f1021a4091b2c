#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>

#include "bec/graphs.hpp"

using namespace bec;

namespace {

// Independent counting oracle: shapes of a single rooted tree with m vertices
// (marked subtree ordered first, the two unmarked subtrees unordered), then
// compositions over the 2k ordered trees.
long tree_shapes(int m, std::map<int, long>& memo) {
  if (m == 0) return 1;
  auto it = memo.find(m);
  if (it != memo.end()) return it->second;
  long total = 0;
  for (int a = 0; a <= m - 1; ++a) {
    const int rest = m - 1 - a;
    long pair_count = 0;
    for (int b = 0; 2 * b <= rest; ++b) {
      const int c = rest - b;
      const long tb = tree_shapes(b, memo);
      const long tc = tree_shapes(c, memo);
      pair_count += (b == c) ? tb * (tb + 1) / 2 : tb * tc;
    }
    total += tree_shapes(a, memo) * pair_count;
  }
  memo[m] = total;
  return total;
}

long forest_count(int trees, int m, std::map<int, long>& memo) {
  if (trees == 1) return tree_shapes(m, memo);
  long total = 0;
  for (int first = 0; first <= m; ++first) {
    total += tree_shapes(first, memo) * forest_count(trees - 1, m - first, memo);
  }
  return total;
}

}  // namespace

TEST_CASE("the empty class has exactly one graph") {
  const auto graphs = enumerate_graphs(1, 0);
  REQUIRE(graphs.size() == 1);
  const auto report = validate_pairing(graphs[0]);
  CHECK(report.ok);
  CHECK(report.edges == 2);
  CHECK(report.leaves == 2);
  const auto pairs = graphs[0].leaf_pairing();
  REQUIRE(pairs.size() == 1);
  CHECK(((pairs[0].first == 0 && pairs[0].second == 1) ||
         (pairs[0].first == 1 && pairs[0].second == 0)));
}

TEST_CASE("enumeration matches the independent counting oracle") {
  std::map<int, long> memo;
  for (int k = 1; k <= 3; ++k) {
    long prev = -1;
    for (int m = 0; m <= 4; ++m) {
      const auto graphs = enumerate_graphs(k, m);
      const long expected = forest_count(2 * k, m, memo);
      CHECK(static_cast<long>(graphs.size()) == expected);
      // Counts stay under the coarse bound and grow with m.
      CHECK(graphs.size() <= (1ULL << (4 * m + k)));
      CHECK(static_cast<long>(graphs.size()) >= prev);
      prev = static_cast<long>(graphs.size());
    }
  }
}

TEST_CASE("regression counts for the smallest classes") {
  CHECK(enumerate_graphs(1, 1).size() == 2);
  CHECK(enumerate_graphs(1, 2).size() == 5);
  CHECK(enumerate_graphs(1, 3).size() == 16);
  CHECK(enumerate_graphs(2, 2).size() == 14);
}

TEST_CASE("every enumerated graph satisfies the structural invariants") {
  for (int k = 1; k <= 2; ++k) {
    for (int m = 0; m <= 3; ++m) {
      for (const auto& g : enumerate_graphs(k, m)) {
        const auto report = validate_pairing(g);
        CHECK(report.ok);
        CHECK(report.edges == 2 * k + 3 * m);
        CHECK(report.roots == 2 * k);
        CHECK(report.leaves == 2 * k + 2 * m);
        CHECK(report.leaf_pairing_perfect);
        CHECK(report.partial_order_ok);
      }
    }
  }
}

TEST_CASE("canonical encodings are idempotent and orientation follows the tree side") {
  for (const auto& g : enumerate_graphs(2, 2)) {
    CHECK(g.canonical() == g.canonical());
    for (int e = 0; e < g.edge_count(); ++e) {
      CHECK(g.tau(e) == (g.edge_tree[e] % 2 == 0 ? 1 : -1));
    }
  }
  // Dedup is stable: re-enumerating gives identical canonical sets.
  auto a = enumerate_graphs(1, 3);
  auto b = enumerate_graphs(1, 3);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].canonical() == b[i].canonical());
}

TEST_CASE("moving a marked flag breaks validation with a named invariant") {
  auto graphs = enumerate_graphs(1, 1);
  REQUIRE(!graphs.empty());
  FeynmanGraph mutant = graphs[1 % graphs.size()];
  REQUIRE(mutant.vertices.size() == 1);
  // Move the mark from the marked son onto an unmarked one.
  const auto& sons = mutant.vertices[0].sons;
  int marked_son = -1, unmarked_son = -1;
  for (int s : sons) {
    if (mutant.marked[s]) {
      marked_son = s;
    } else if (unmarked_son < 0) {
      unmarked_son = s;
    }
  }
  mutant.marked[marked_son] = 0;
  mutant.marked[unmarked_son] = 1;
  mutant.marked[marked_son] = 1;  // two marked sons now
  const auto report = validate_pairing(mutant);
  CHECK_FALSE(report.ok);
  CHECK(report.violated == "exactly one marked son per vertex");

  SUBCASE("zero marked sons is also caught") {
    FeynmanGraph bare = graphs[1 % graphs.size()];
    for (int s : bare.vertices[0].sons) bare.marked[s] = 0;
    const auto r2 = validate_pairing(bare);
    CHECK_FALSE(r2.ok);
    CHECK(!r2.violated.empty());
  }
}

TEST_CASE("size guard rejects oversize classes") {
  CHECK_THROWS_AS(enumerate_graphs(4, 5), Error);
  CHECK_THROWS_AS(enumerate_graphs(0, 2), Error);
}

TEST_CASE("power counting reproduces the exponent budget") {
  SUBCASE("small cases") {
    const PowerCounting a = power_counting(1, 0);
    CHECK(a.total == -5);
    const PowerCounting b = power_counting(1, 1);
    CHECK(b.volume == 20);
    CHECK(b.leaf == -10);
    CHECK(b.propagator == -10);
    CHECK(b.observable == -6);
    CHECK(b.total == -6);
    CHECK(power_counting(2, 3).total == -13);
  }
  SUBCASE("integer identity over the full desk-scale range") {
    for (int k = 1; k <= 10; ++k) {
      for (int m = 0; m <= 10; ++m) {
        const PowerCounting pc = power_counting(k, m);
        CHECK(pc.total == pc.volume + pc.leaf + pc.propagator + pc.observable);
        CHECK(pc.total == -(5 * k + m));
      }
    }
  }
}

TEST_CASE("amplitude bounds carry the right exponents") {
  const AmplitudeBound free_term = amplitude_bound(2, 0, 1.5);
  CHECK(free_term.t_exponent == 0.0);
  CHECK(free_term.c_exponent == 2);

  const AmplitudeBound b = amplitude_bound(1, 4, 2.0);
  CHECK(b.t_exponent == doctest::Approx(1.0));
  CHECK(b.c_exponent == 5);
  CHECK_FALSE(b.count_is_exact);
  CHECK(b.count == (1ULL << 17));

  const auto graphs = enumerate_graphs(1, 2);
  const AmplitudeBound exact = amplitude_bound(1, 2, 2.0, graphs.size());
  CHECK(exact.count == graphs.size());
  CHECK(exact.count_is_exact);
  CHECK(exact.count < (1ULL << 9));
}
