#include "bec/graphs.hpp"

#include <algorithm>
#include <map>

namespace bec {

std::vector<int> FeynmanGraph::roots() const {
  std::vector<int> r(2 * k);
  for (int i = 0; i < 2 * k; ++i) r[i] = i;
  return r;
}

std::vector<int> FeynmanGraph::leaves() const {
  std::vector<int> out;
  for (int e = 0; e < edge_count(); ++e) {
    if (is_leaf(e)) out.push_back(e);
  }
  return out;
}

std::vector<std::pair<int, int>> FeynmanGraph::root_pairing() const {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < k; ++i) pairs.emplace_back(2 * i, 2 * i + 1);
  return pairs;
}

std::vector<std::pair<int, int>> FeynmanGraph::leaf_pairing() const {
  // Each particle line starts at a root or at an unmarked son edge and runs
  // through marked sons to its unique leaf. Pair the leaves whose lines start
  // at the two unmarked sons of one vertex, or at two paired roots.
  const int ne = edge_count();
  std::vector<int> line_leaf(ne, -1);  // start edge of a line -> leaf of that line
  auto chain_leaf = [&](int start) {
    int e = start;
    int guard = 0;
    while (!is_leaf(e)) {
      const Vertex& v = vertices[vertex_on_edge[e]];
      int next = -1;
      for (int s : v.sons) {
        if (s >= 0 && marked[s]) next = s;
      }
      if (next < 0) throw Error("graph invariant violated: vertex without a marked son");
      e = next;
      if (++guard > ne) throw Error("graph invariant violated: marked chain cycles");
    }
    return e;
  };
  for (int e = 0; e < ne; ++e) {
    const bool line_start = (parent_vertex_of[e] < 0) || !marked[e];
    if (line_start) line_leaf[e] = chain_leaf(e);
  }

  std::vector<std::pair<int, int>> pairs;
  // Lines opened by the two unmarked sons of the same vertex.
  for (const Vertex& v : vertices) {
    std::vector<int> unmarked;
    for (int s : v.sons) {
      if (s >= 0 && !marked[s]) unmarked.push_back(s);
    }
    if (unmarked.size() != 2) {
      throw Error("graph invariant violated: vertex lacks exactly two unmarked sons");
    }
    pairs.emplace_back(line_leaf[unmarked[0]], line_leaf[unmarked[1]]);
  }
  // Lines opened by paired roots.
  for (auto [r1, r2] : root_pairing()) {
    pairs.emplace_back(line_leaf[r1], line_leaf[r2]);
  }
  return pairs;
}

namespace {

std::string encode_edge(const FeynmanGraph& g, int e) {
  if (g.is_leaf(e)) return "x";
  const FeynmanGraph::Vertex& v = g.vertices[g.vertex_on_edge[e]];
  std::string marked_enc;
  std::vector<std::string> unmarked_enc;
  for (int s : v.sons) {
    if (s < 0) continue;
    if (g.marked[s]) {
      marked_enc = encode_edge(g, s);
    } else {
      unmarked_enc.push_back(encode_edge(g, s));
    }
  }
  std::sort(unmarked_enc.begin(), unmarked_enc.end());
  std::string out = "(" + marked_enc;
  for (const auto& u : unmarked_enc) out += "," + u;
  return out + ")";
}

}  // namespace

std::string FeynmanGraph::canonical() const {
  std::string out;
  for (int r = 0; r < 2 * k; ++r) {
    if (r) out += ";";
    out += encode_edge(*this, r);
  }
  return out;
}

std::vector<FeynmanGraph> enumerate_graphs(int k, int m) {
  if (k < 1 || m < 0) throw Error("invalid graph class");
  if (k + m > 8) throw Error("size limit exceeded: k + m must stay <= 8");

  FeynmanGraph seed;
  seed.k = k;
  seed.m = 0;
  seed.edge_tree.resize(2 * k);
  seed.vertex_on_edge.assign(2 * k, -1);
  seed.parent_vertex_of.assign(2 * k, -1);
  seed.marked.assign(2 * k, 0);
  for (int i = 0; i < 2 * k; ++i) seed.edge_tree[i] = i;

  std::map<std::string, FeynmanGraph> found;
  // Attach vertices one at a time to any current leaf; the new vertex turns
  // that leaf into its father edge and opens one marked and two unmarked sons.
  std::function<void(FeynmanGraph&, int)> attach = [&](FeynmanGraph& g, int remaining) {
    if (remaining == 0) {
      found.emplace(g.canonical(), g);
      return;
    }
    const int ne = g.edge_count();
    for (int e = 0; e < ne; ++e) {
      if (!g.is_leaf(e)) continue;
      FeynmanGraph next = g;
      FeynmanGraph::Vertex v;
      v.father = e;
      for (int s = 0; s < 3; ++s) {
        v.sons[s] = next.edge_count();
        next.edge_tree.push_back(next.edge_tree[e]);
        next.vertex_on_edge.push_back(-1);
        next.parent_vertex_of.push_back(static_cast<int>(next.vertices.size()));
        next.marked.push_back(s == 0 ? 1 : 0);
      }
      next.vertex_on_edge[e] = static_cast<int>(next.vertices.size());
      next.vertices.push_back(v);
      next.m += 1;
      attach(next, remaining - 1);
    }
  };
  attach(seed, m);

  std::vector<FeynmanGraph> out;
  out.reserve(found.size());
  for (auto& [enc, g] : found) out.push_back(std::move(g));
  return out;
}

PairingReport validate_pairing(const FeynmanGraph& g) {
  PairingReport report;
  report.edges = g.edge_count();
  report.roots = 2 * g.k;
  report.vertices = static_cast<int>(g.vertices.size());
  report.leaves = static_cast<int>(g.leaves().size());

  auto fail = [&](const std::string& what) {
    report.ok = false;
    if (report.violated.empty()) report.violated = what;
  };

  if (report.edges != 2 * g.k + 3 * g.m) fail("edge count 2k+3m");
  if (report.vertices != g.m) fail("vertex count m");
  if (report.leaves != 2 * g.k + 2 * g.m) fail("leaf count 2k+2m");

  // Exactly one marked son per vertex.
  for (const auto& v : g.vertices) {
    int marked_count = 0, present = 0;
    for (int s : v.sons) {
      if (s >= 0) {
        ++present;
        if (g.marked[s]) ++marked_count;
      }
    }
    if (present != 3) fail("vertex has three sons");
    if (marked_count != 1) fail("exactly one marked son per vertex");
  }

  // The ancestor relation must be a strict partial order: walking father
  // edges toward the roots terminates without revisiting a vertex.
  bool order_ok = true;
  for (size_t vi = 0; vi < g.vertices.size(); ++vi) {
    std::vector<char> seen(g.vertices.size(), 0);
    int edge = g.vertices[vi].father;
    int guard = 0;
    while (edge >= 0 && g.parent_vertex_of[edge] >= 0) {
      const int up = g.parent_vertex_of[edge];
      if (seen[up]) {
        order_ok = false;
        break;
      }
      seen[up] = 1;
      edge = g.vertices[up].father;
      if (++guard > report.edges) {
        order_ok = false;
        break;
      }
    }
    if (!order_ok) break;
  }
  report.partial_order_ok = order_ok;
  if (!order_ok) fail("strict partial order of vertices");

  try {
    const auto pairs = g.leaf_pairing();
    std::vector<char> hit(g.edge_count(), 0);
    bool perfect = static_cast<int>(pairs.size()) * 2 == report.leaves;
    for (auto [a, b] : pairs) {
      if (a < 0 || b < 0 || a == b || !g.is_leaf(a) || !g.is_leaf(b) || hit[a] || hit[b]) {
        perfect = false;
        break;
      }
      hit[a] = hit[b] = 1;
    }
    report.leaf_pairing_perfect = perfect;
    if (!perfect) fail("leaf pairing is a perfect matching");
  } catch (const Error& e) {
    report.leaf_pairing_perfect = false;
    fail(e.what());
  }
  return report;
}

PowerCounting power_counting(int k, int m) {
  if (k < 0 || m < 0) throw Error("invalid exponents");
  PowerCounting pc;
  pc.volume = 10 * k + 10 * m;
  pc.leaf = -(5 * k + 5 * m);
  pc.propagator = -(4 * k + 6 * m);
  pc.observable = -6 * k;
  pc.total = pc.volume + pc.leaf + pc.propagator + pc.observable;
  return pc;
}

AmplitudeBound amplitude_bound(int k, int m, double t,
                               std::optional<unsigned long long> enumerated_count) {
  if (t < 0.0) throw Error("time must be nonnegative");
  AmplitudeBound b;
  b.c_exponent = k + m;
  b.t_exponent = m / 4.0;
  b.t = t;
  if (enumerated_count) {
    b.count = *enumerated_count;
    b.count_is_exact = true;
  } else {
    const int exponent = 4 * m + k;
    if (exponent >= 64) throw Error("graph bound overflow");
    b.count = 1ULL << exponent;
    b.count_is_exact = false;
  }
  return b;
}

}  // namespace bec
