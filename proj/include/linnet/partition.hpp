#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "linnet/errors.hpp"

namespace linnet {

// Disjoint split of the node set {1..L} into four roles:
//   s_tilde  kept nodes whose equations stay untouched,
//   l_set    kept nodes used as indirect observations,
//   v_set    removed nodes reconstructed through l_set,
//   z_tilde  removed nodes eliminated by substitution.
// Indices are 1-based node numbers.
struct Partition {
  std::vector<int> s_tilde;
  std::vector<int> l_set;
  std::vector<int> v_set;
  std::vector<int> z_tilde;

  int total() const {
    return static_cast<int>(s_tilde.size() + l_set.size() + v_set.size() +
                            z_tilde.size());
  }
};

namespace detail {
inline std::vector<int> sorted_copy(const std::vector<int>& v) {
  std::vector<int> out = v;
  std::sort(out.begin(), out.end());
  return out;
}
}  // namespace detail

// Throws InvalidPartition unless the four sets are disjoint, cover {1..L}
// exactly, and |l_set| >= |v_set| (needed for the observation matrix to
// have full column rank at all).
inline void validate_partition(const Partition& p, int L) {
  std::vector<int> all;
  all.reserve(static_cast<size_t>(p.total()));
  for (const auto* set : {&p.s_tilde, &p.l_set, &p.v_set, &p.z_tilde})
    all.insert(all.end(), set->begin(), set->end());
  for (int k : all)
    if (k < 1 || k > L)
      throw InvalidPartition("node index " + std::to_string(k) +
                             " outside 1.." + std::to_string(L));
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw InvalidPartition("partition sets overlap");
  if (static_cast<int>(all.size()) != L)
    throw InvalidPartition("partition does not cover every node");
  if (p.l_set.size() < p.v_set.size())
    throw InvalidPartition("fewer observation nodes than removed nodes: " +
                           std::to_string(p.l_set.size()) + " < " +
                           std::to_string(p.v_set.size()));
}

// Nodes surviving the abstraction, in result order (sorted kept-as-is nodes
// first, then sorted observation nodes).
inline std::vector<int> kept_nodes(const Partition& p) {
  std::vector<int> out = detail::sorted_copy(p.s_tilde);
  std::vector<int> l = detail::sorted_copy(p.l_set);
  out.insert(out.end(), l.begin(), l.end());
  return out;
}

// Full node permutation in block order (kept, observations, removed
// observed, removed eliminated); each block sorted.
inline std::vector<int> block_order(const Partition& p) {
  std::vector<int> out = kept_nodes(p);
  std::vector<int> v = detail::sorted_copy(p.v_set);
  std::vector<int> z = detail::sorted_copy(p.z_tilde);
  out.insert(out.end(), v.begin(), v.end());
  out.insert(out.end(), z.begin(), z.end());
  return out;
}

}  // namespace linnet
