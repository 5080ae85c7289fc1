#pragma once

#include <algorithm>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "linnet/errors.hpp"
#include "linnet/network.hpp"
#include "linnet/partition.hpp"

namespace linnet {

// Directed structure of a network. Edge a -> b means node b listens to node
// a, i.e. the module matrix entry (b, a) is nonzero. Public node ids are
// 1-based to match the rest of the library.
struct StructuralGraph {
  int n = 0;
  std::vector<std::vector<bool>> adj;  // adj[from][to], 0-based internally

  StructuralGraph() = default;
  explicit StructuralGraph(int nodes)
      : n(nodes),
        adj(static_cast<size_t>(nodes),
            std::vector<bool>(static_cast<size_t>(nodes), false)) {}

  static StructuralGraph from_model(const NetworkModel& m) {
    StructuralGraph g(m.L);
    for (int to = 0; to < m.L; ++to)
      for (int from = 0; from < m.L; ++from)
        if (to != from && !m.G.at(to, from).is_zero())
          g.adj[static_cast<size_t>(from)][static_cast<size_t>(to)] = true;
    return g;
  }

  void check_node(int k) const {
    if (k < 1 || k > n)
      throw DimensionMismatch("node index " + std::to_string(k) +
                              " outside 1.." + std::to_string(n));
  }
  void add_edge(int from, int to) {
    check_node(from);
    check_node(to);
    if (from == to) throw InvalidPartition("self-edges are not allowed");
    adj[static_cast<size_t>(from - 1)][static_cast<size_t>(to - 1)] = true;
  }
  bool has_edge(int from, int to) const {
    check_node(from);
    check_node(to);
    return adj[static_cast<size_t>(from - 1)][static_cast<size_t>(to - 1)];
  }
};

using Edge = std::pair<int, int>;  // (from, to), 1-based

// True iff a directed path (at least one edge) runs from `from` to `to`
// whose intermediate nodes all avoid `blockers`; endpoints are exempt.
// When `forbidden` names an edge, the search treats it as absent (over
// simple paths that exactly removes the one-edge path from..to).
// from == to asks for a loop.
inline bool path_exists_avoiding(const StructuralGraph& g, int from, int to,
                                 const std::vector<int>& blockers,
                                 std::optional<Edge> forbidden = {}) {
  g.check_node(from);
  g.check_node(to);
  std::vector<bool> blocked(static_cast<size_t>(g.n), false);
  for (int b : blockers) {
    g.check_node(b);
    blocked[static_cast<size_t>(b - 1)] = true;
  }
  const int src = from - 1, dst = to - 1;
  std::vector<bool> visited(static_cast<size_t>(g.n), false);
  std::queue<int> frontier;
  frontier.push(src);
  visited[static_cast<size_t>(src)] = true;
  while (!frontier.empty()) {
    int u = frontier.front();
    frontier.pop();
    for (int w = 0; w < g.n; ++w) {
      if (!g.adj[static_cast<size_t>(u)][static_cast<size_t>(w)]) continue;
      if (forbidden && forbidden->first - 1 == u && forbidden->second - 1 == w)
        continue;
      if (w == dst) return true;
      if (visited[static_cast<size_t>(w)] || blocked[static_cast<size_t>(w)])
        continue;
      visited[static_cast<size_t>(w)] = true;
      frontier.push(w);
    }
  }
  return false;
}

// Shortest such path as a 1-based node sequence (ties broken toward lower
// node ids); empty when none exists. Used to pick the branching point of the
// selection search.
inline std::vector<int> shortest_path_avoiding(
    const StructuralGraph& g, int from, int to,
    const std::vector<int>& blockers, std::optional<Edge> forbidden = {}) {
  g.check_node(from);
  g.check_node(to);
  std::vector<bool> blocked(static_cast<size_t>(g.n), false);
  for (int b : blockers) blocked[static_cast<size_t>(b - 1)] = true;
  const int src = from - 1, dst = to - 1;
  std::vector<int> parent(static_cast<size_t>(g.n), -2);  // -2 unseen
  std::queue<int> frontier;
  frontier.push(src);
  parent[static_cast<size_t>(src)] = -1;
  int hit_parent = -2;
  while (!frontier.empty() && hit_parent == -2) {
    int u = frontier.front();
    frontier.pop();
    for (int w = 0; w < g.n && hit_parent == -2; ++w) {
      if (!g.adj[static_cast<size_t>(u)][static_cast<size_t>(w)]) continue;
      if (forbidden && forbidden->first - 1 == u && forbidden->second - 1 == w)
        continue;
      if (w == dst) {
        hit_parent = u;
        break;
      }
      if (parent[static_cast<size_t>(w)] != -2 ||
          blocked[static_cast<size_t>(w)])
        continue;
      parent[static_cast<size_t>(w)] = u;
      frontier.push(w);
    }
  }
  if (hit_parent == -2) return {};
  std::vector<int> path{to};
  for (int u = hit_parent; u != -1; u = parent[static_cast<size_t>(u)])
    path.push_back(u + 1);
  std::reverse(path.begin(), path.end());
  return path;
}

// Module-invariance screen for plain immersion: with D = s_tilde \ {j},
// the input must be kept, every indirect route from i to j must cross D,
// and every loop at j must cross D.
inline bool check_immersion_invariance(const StructuralGraph& g, int i, int j,
                                       const std::vector<int>& s_tilde) {
  g.check_node(i);
  g.check_node(j);
  if (i == j) return false;
  bool has_i = false, has_j = false;
  std::vector<int> d;
  for (int k : s_tilde) {
    g.check_node(k);
    has_i = has_i || k == i;
    has_j = has_j || k == j;
    if (k != j) d.push_back(k);
  }
  if (!has_i || !has_j) return false;
  if (path_exists_avoiding(g, i, j, d, Edge{i, j})) return false;
  if (path_exists_avoiding(g, j, j, d)) return false;
  return true;
}

// Invariance query for the generalized reduction: module from i to j with
// the given partition.
struct InvarianceQuery {
  int i = 0;
  int j = 0;
  Partition partition;
};

// Structural sufficient condition for the reduced module (j, i) to equal
// the original one: with targets J = {j} ∪ l_set and blockers
// K = v_set ∪ s_tilde \ {j}, every path from i into J other than the direct
// edge i -> j crosses K \ {i}, and every path from j into J crosses K.
inline bool check_generalized_invariance(const StructuralGraph& g,
                                         const InvarianceQuery& q) {
  validate_partition(q.partition, g.n);
  g.check_node(q.i);
  g.check_node(q.j);
  if (q.i == q.j) return false;
  const auto& st = q.partition.s_tilde;
  if (std::find(st.begin(), st.end(), q.i) == st.end()) return false;
  if (std::find(st.begin(), st.end(), q.j) == st.end()) return false;

  std::vector<int> targets{q.j};
  for (int l : detail::sorted_copy(q.partition.l_set)) targets.push_back(l);
  std::vector<int> blockers = q.partition.v_set;
  for (int s : st)
    if (s != q.j) blockers.push_back(s);
  std::vector<int> blockers_no_i;
  for (int b : blockers)
    if (b != q.i) blockers_no_i.push_back(b);

  for (int t : targets) {
    std::optional<Edge> forbidden;
    if (t == q.j) forbidden = Edge{q.i, q.j};
    if (path_exists_avoiding(g, q.i, t, blockers_no_i, forbidden))
      return false;
    if (path_exists_avoiding(g, q.j, t, blockers)) return false;
  }
  return true;
}

// Maximum number of vertex-disjoint directed paths from `sources` to
// `sinks` whose intermediate nodes all lie in `allowed_intermediates`.
// Node-splitting reduction to unit-capacity max flow.
inline int vertex_disjoint_paths(const StructuralGraph& g,
                                 const std::vector<int>& sources,
                                 const std::vector<int>& sinks,
                                 const std::vector<int>& allowed_intermediates) {
  enum Role { kNone, kSource, kSink, kAllowed };
  std::vector<Role> role(static_cast<size_t>(g.n), kNone);
  for (int a : allowed_intermediates) {
    g.check_node(a);
    role[static_cast<size_t>(a - 1)] = kAllowed;
  }
  for (int s : sources) {
    g.check_node(s);
    role[static_cast<size_t>(s - 1)] = kSource;
  }
  for (int t : sinks) {
    g.check_node(t);
    if (role[static_cast<size_t>(t - 1)] == kSource)
      throw InvalidPartition("sources and sinks must be disjoint");
    role[static_cast<size_t>(t - 1)] = kSink;
  }

  // Flow nodes: for every graph node x, in(x) = 2x and out(x) = 2x+1; super
  // source and sink at the end. Unit capacities throughout.
  const int fn = 2 * g.n + 2;
  const int super_s = 2 * g.n, super_t = 2 * g.n + 1;
  std::vector<std::vector<int>> cap(static_cast<size_t>(fn),
                                    std::vector<int>(static_cast<size_t>(fn), 0));
  auto in = [](int x) { return 2 * x; };
  auto out = [](int x) { return 2 * x + 1; };
  for (int x = 0; x < g.n; ++x) {
    switch (role[static_cast<size_t>(x)]) {
      case kSource:
        cap[static_cast<size_t>(super_s)][static_cast<size_t>(out(x))] = 1;
        break;
      case kSink:
        cap[static_cast<size_t>(in(x))][static_cast<size_t>(super_t)] = 1;
        break;
      case kAllowed:
        cap[static_cast<size_t>(in(x))][static_cast<size_t>(out(x))] = 1;
        break;
      case kNone:
        break;
    }
  }
  for (int a = 0; a < g.n; ++a) {
    Role ra = role[static_cast<size_t>(a)];
    if (ra != kSource && ra != kAllowed) continue;
    for (int b = 0; b < g.n; ++b) {
      if (!g.adj[static_cast<size_t>(a)][static_cast<size_t>(b)]) continue;
      Role rb = role[static_cast<size_t>(b)];
      if (rb != kSink && rb != kAllowed) continue;
      cap[static_cast<size_t>(out(a))][static_cast<size_t>(in(b))] = 1;
    }
  }

  // Edmonds-Karp.
  int flow = 0;
  for (;;) {
    std::vector<int> parent(static_cast<size_t>(fn), -1);
    parent[static_cast<size_t>(super_s)] = super_s;
    std::queue<int> bfs;
    bfs.push(super_s);
    while (!bfs.empty() && parent[static_cast<size_t>(super_t)] == -1) {
      int u = bfs.front();
      bfs.pop();
      for (int w = 0; w < fn; ++w)
        if (parent[static_cast<size_t>(w)] == -1 &&
            cap[static_cast<size_t>(u)][static_cast<size_t>(w)] > 0) {
          parent[static_cast<size_t>(w)] = u;
          bfs.push(w);
        }
    }
    if (parent[static_cast<size_t>(super_t)] == -1) break;
    for (int w = super_t; w != super_s;
         w = parent[static_cast<size_t>(w)]) {
      int u = parent[static_cast<size_t>(w)];
      --cap[static_cast<size_t>(u)][static_cast<size_t>(w)];
      ++cap[static_cast<size_t>(w)][static_cast<size_t>(u)];
    }
    ++flow;
  }
  return flow;
}

// Structural prerequisite for reconstructing the removed observed nodes:
// as many disjoint routes into the observation set as there are nodes to
// reconstruct, using only eliminated nodes in between.
inline bool has_disjoint_observation_routes(const StructuralGraph& g,
                                            const Partition& p) {
  if (p.v_set.empty()) return true;
  return vertex_disjoint_paths(g, p.v_set, p.l_set, p.z_tilde) ==
         static_cast<int>(p.v_set.size());
}

// Graphviz rendering; when a partition is given the four roles are colored.
inline std::string export_dot(const StructuralGraph& g,
                              const Partition* partition = nullptr,
                              const std::vector<std::string>& labels = {}) {
  auto name = [&labels](int k) {
    return k <= static_cast<int>(labels.size()) && !labels.empty()
               ? labels[static_cast<size_t>(k - 1)]
               : "w" + std::to_string(k);
  };
  std::string dot = "digraph network {\n  rankdir=LR;\n";
  std::vector<std::string> color(static_cast<size_t>(g.n) + 1, "");
  if (partition) {
    validate_partition(*partition, g.n);
    for (int k : partition->s_tilde) color[static_cast<size_t>(k)] = "palegreen";
    for (int k : partition->l_set) color[static_cast<size_t>(k)] = "lightblue";
    for (int k : partition->v_set) color[static_cast<size_t>(k)] = "orange";
    for (int k : partition->z_tilde) color[static_cast<size_t>(k)] = "lightgray";
  }
  for (int k = 1; k <= g.n; ++k) {
    dot += "  n" + std::to_string(k) + " [label=\"" + name(k) + "\"";
    if (!color[static_cast<size_t>(k)].empty())
      dot += ", style=filled, fillcolor=" + color[static_cast<size_t>(k)];
    dot += "];\n";
  }
  for (int a = 1; a <= g.n; ++a)
    for (int b = 1; b <= g.n; ++b)
      if (g.adj[static_cast<size_t>(a - 1)][static_cast<size_t>(b - 1)])
        dot += "  n" + std::to_string(a) + " -> n" + std::to_string(b) + ";\n";
  dot += "}\n";
  return dot;
}

}  // namespace linnet
