#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "linnet/errors.hpp"
#include "linnet/graph.hpp"
#include "linnet/partition.hpp"

namespace linnet {

// One admissible way to recover the module from i to j: measure s_tilde,
// observe l_set in order to reconstruct v_set, abstract the rest.
struct Selection {
  Partition partition;
  int cost = 0;  // number of measured signals |s_tilde| + |l_set|
};

struct SelectOptions {
  int max_results = 16;
  long budget = 100000;  // feasibility evaluations before giving up
};

namespace detail {

struct SelectState {
  std::vector<int> s_tilde;  // sorted
  std::vector<int> l_set;    // sorted
  std::vector<int> v_set;    // sorted

  int cost() const {
    return static_cast<int>(s_tilde.size() + l_set.size());
  }
  std::vector<int> measured() const {
    std::vector<int> m = s_tilde;
    m.insert(m.end(), l_set.begin(), l_set.end());
    std::sort(m.begin(), m.end());
    return m;
  }
  std::vector<int> assigned() const {
    std::vector<int> a = s_tilde;
    a.insert(a.end(), l_set.begin(), l_set.end());
    a.insert(a.end(), v_set.begin(), v_set.end());
    std::sort(a.begin(), a.end());
    return a;
  }
  // Exploration order: fewest measured signals first, then lexicographic on
  // the sorted measured set, then on the role split.
  auto order_key() const {
    return std::make_tuple(cost(), measured(), s_tilde, l_set, v_set);
  }
  auto identity_key() const { return std::make_tuple(s_tilde, l_set, v_set); }

  Partition to_partition(int n) const {
    Partition p;
    p.s_tilde = s_tilde;
    p.l_set = l_set;
    p.v_set = v_set;
    std::vector<int> taken = assigned();
    for (int k = 1; k <= n; ++k)
      if (!std::binary_search(taken.begin(), taken.end(), k))
        p.z_tilde.push_back(k);
    return p;
  }
};

inline void insert_sorted(std::vector<int>& v, int x) {
  v.insert(std::upper_bound(v.begin(), v.end(), x), x);
}

// First path that defeats the current blocking, in a fixed scan order:
// target j then the observed nodes, direct-edge exemption only for the
// (i, j) pair, paths out of i before paths out of j.
inline std::vector<int> first_offending_path(const StructuralGraph& g, int i,
                                             int j, const SelectState& st) {
  std::vector<int> targets{j};
  for (int l : st.l_set) targets.push_back(l);
  std::vector<int> blockers = st.v_set;
  for (int s : st.s_tilde)
    if (s != j) blockers.push_back(s);
  std::vector<int> blockers_no_i;
  for (int b : blockers)
    if (b != i) blockers_no_i.push_back(b);
  for (int t : targets) {
    std::optional<Edge> forbidden;
    if (t == j) forbidden = Edge{i, j};
    auto path = shortest_path_avoiding(g, i, t, blockers_no_i, forbidden);
    if (!path.empty()) return path;
  }
  for (int t : targets) {
    auto path = shortest_path_avoiding(g, j, t, blockers);
    if (!path.empty()) return path;
  }
  return {};
}

}  // namespace detail

// Enumerates minimal-measurement selections that make the module from i to
// j recoverable: the blocking conditions must hold and the observed set must
// expose enough disjoint routes to reconstruct the indirectly observed
// nodes. Search walks outward from s_tilde = {i, j}, fixing one offending
// path at a time by either measuring one of its inner nodes or observing it
// through a fresh measurable node; admissible states are reported and not
// refined further. Results come out cheapest first.
inline std::vector<Selection> select_nodes(const StructuralGraph& g, int i,
                                           int j,
                                           const std::vector<int>& measurable,
                                           SelectOptions opts = {}) {
  g.check_node(i);
  g.check_node(j);
  if (i == j) throw InvalidPartition("module endpoints must differ");
  std::set<int> measurable_set;
  for (int m : measurable) {
    g.check_node(m);
    measurable_set.insert(m);
  }
  if (!measurable_set.count(i) || !measurable_set.count(j))
    throw InvalidPartition("both module endpoints must be measurable");

  using detail::SelectState;
  auto feasible = [&](const SelectState& st) {
    Partition p = st.to_partition(g.n);
    InvarianceQuery q{i, j, p};
    if (!check_generalized_invariance(g, q)) return std::pair{false, false};
    return std::pair{true, has_disjoint_observation_routes(g, p)};
  };

  std::vector<Selection> results;
  long evaluations = 0;
  std::set<decltype(SelectState{}.identity_key())> seen;
  std::map<decltype(SelectState{}.order_key()), SelectState> frontier;

  SelectState root;
  root.s_tilde = {std::min(i, j), std::max(i, j)};
  frontier.emplace(root.order_key(), root);
  seen.insert(root.identity_key());

  while (!frontier.empty() &&
         static_cast<int>(results.size()) < opts.max_results &&
         evaluations < opts.budget) {
    SelectState st = frontier.begin()->second;
    frontier.erase(frontier.begin());
    ++evaluations;
    auto [invariant, recoverable] = feasible(st);
    if (invariant && recoverable) {
      results.push_back(Selection{st.to_partition(g.n), st.cost()});
      continue;  // admissible states are not refined further
    }
    if (invariant && !recoverable) continue;  // no repair by adding blockers

    auto path = detail::first_offending_path(g, i, j, st);
    if (path.size() < 3) continue;  // nothing assignable on a direct edge
    std::vector<int> taken = st.assigned();
    auto is_assigned = [&taken](int x) {
      return std::binary_search(taken.begin(), taken.end(), x);
    };
    for (size_t idx = 1; idx + 1 < path.size(); ++idx) {
      int x = path[idx];
      if (is_assigned(x)) continue;
      if (measurable_set.count(x)) {
        SelectState child = st;
        detail::insert_sorted(child.s_tilde, x);
        if (seen.insert(child.identity_key()).second)
          frontier.emplace(child.order_key(), child);
      }
      // Observe x indirectly through any fresh measurable node reachable
      // from x across still-abstracted nodes.
      for (int o : measurable_set) {
        if (o == x || is_assigned(o)) continue;
        if (!path_exists_avoiding(g, x, o, taken)) continue;
        SelectState child = st;
        detail::insert_sorted(child.v_set, x);
        detail::insert_sorted(child.l_set, o);
        if (seen.insert(child.identity_key()).second)
          frontier.emplace(child.order_key(), child);
      }
    }
  }

  if (!results.empty()) return results;

  // Last resort: measure everything measurable.
  SelectState all;
  all.s_tilde.assign(measurable_set.begin(), measurable_set.end());
  auto [invariant, recoverable] = feasible(all);
  if (invariant && recoverable)
    return {Selection{all.to_partition(g.n), all.cost()}};
  throw NoFeasibleSelection(
      "no admissible selection, even measuring every measurable node");
}

}  // namespace linnet
