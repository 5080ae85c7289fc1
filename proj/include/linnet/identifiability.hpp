#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "linnet/errors.hpp"
#include "linnet/network.hpp"
#include "linnet/partition.hpp"
#include "linnet/transfer_matrix.hpp"

namespace linnet {

// Coarse structure of a matrix block: identically zero, diagonal (all
// off-diagonal entries zero), or unstructured.
enum class Pat { Zero, Diag, Star };

inline char pat_symbol(Pat p) {
  switch (p) {
    case Pat::Zero: return '0';
    case Pat::Diag: return 'D';
    default: return '*';
  }
}

// Worst-case algebra over block structures: every concrete instance of the
// operands conforms to the predicted structure of the result.
inline Pat pat_mul(Pat a, Pat b) {
  if (a == Pat::Zero || b == Pat::Zero) return Pat::Zero;
  if (a == Pat::Diag && b == Pat::Diag) return Pat::Diag;
  return Pat::Star;
}
inline Pat pat_add(Pat a, Pat b) {
  if (a == Pat::Zero) return b;
  if (b == Pat::Zero) return a;
  if (a == Pat::Diag && b == Pat::Diag) return Pat::Diag;
  return Pat::Star;
}
// Structure of (I - A)^{-1} given the structure of the square block A.
inline Pat pat_loop_inverse(Pat a) {
  return a == Pat::Star ? Pat::Star : Pat::Diag;
}

// Block-partitioned structure matrix. Blocks with zero rows or columns are
// carried along as Zero so that partitions with empty roles need no special
// casing.
struct StructurePattern {
  std::vector<int> row_sizes;
  std::vector<int> col_sizes;
  std::vector<std::vector<Pat>> entries;  // entries[block_row][block_col]

  StructurePattern() = default;
  StructurePattern(std::vector<int> rs, std::vector<int> cs)
      : row_sizes(std::move(rs)), col_sizes(std::move(cs)) {
    entries.assign(row_sizes.size(),
                   std::vector<Pat>(col_sizes.size(), Pat::Zero));
  }

  int total_rows() const {
    int n = 0;
    for (int s : row_sizes) n += s;
    return n;
  }
  int total_cols() const {
    int n = 0;
    for (int s : col_sizes) n += s;
    return n;
  }

  Pat& at(size_t r, size_t c) { return entries[r][c]; }
  Pat at(size_t r, size_t c) const { return entries[r][c]; }

  void set(size_t r, size_t c, Pat p) {
    // Degenerate blocks are identically zero no matter what.
    if (row_sizes[r] == 0 || col_sizes[c] == 0) p = Pat::Zero;
    if (p == Pat::Diag && row_sizes[r] != col_sizes[c])
      throw DimensionMismatch("diagonal structure requires a square block");
    entries[r][c] = p;
  }

  static StructurePattern identity(std::vector<int> sizes) {
    StructurePattern s(sizes, sizes);
    for (size_t k = 0; k < sizes.size(); ++k) s.set(k, k, Pat::Diag);
    return s;
  }

  std::string render() const {
    std::string out;
    for (const auto& row : entries) {
      for (size_t c = 0; c < row.size(); ++c) {
        if (c) out += ' ';
        out += pat_symbol(row[c]);
      }
      out += '\n';
    }
    return out;
  }
};

inline StructurePattern pattern_mul(const StructurePattern& a,
                                    const StructurePattern& b) {
  if (a.col_sizes != b.row_sizes)
    throw DimensionMismatch("structure product needs matching block sizes");
  StructurePattern out(a.row_sizes, b.col_sizes);
  for (size_t i = 0; i < a.row_sizes.size(); ++i)
    for (size_t j = 0; j < b.col_sizes.size(); ++j) {
      Pat acc = Pat::Zero;
      for (size_t k = 0; k < a.col_sizes.size(); ++k) {
        if (a.col_sizes[k] == 0) continue;  // empty inner block adds nothing
        acc = pat_add(acc, pat_mul(a.at(i, k), b.at(k, j)));
      }
      out.set(i, j, acc);
    }
  return out;
}

inline StructurePattern pattern_add(const StructurePattern& a,
                                    const StructurePattern& b) {
  if (a.row_sizes != b.row_sizes || a.col_sizes != b.col_sizes)
    throw DimensionMismatch("structure sum needs matching block sizes");
  StructurePattern out(a.row_sizes, a.col_sizes);
  for (size_t i = 0; i < a.row_sizes.size(); ++i)
    for (size_t j = 0; j < a.col_sizes.size(); ++j)
      out.set(i, j, pat_add(a.at(i, j), b.at(i, j)));
  return out;
}

// True when structure `a` is at least as constrained as `b`
// (Zero conforms to anything, Diag conforms to Diag or Star).
inline bool conforms_to(const StructurePattern& a, const StructurePattern& b) {
  if (a.row_sizes != b.row_sizes || a.col_sizes != b.col_sizes) return false;
  auto rank = [](Pat p) { return p == Pat::Zero ? 0 : p == Pat::Diag ? 1 : 2; };
  for (size_t i = 0; i < a.row_sizes.size(); ++i)
    for (size_t j = 0; j < a.col_sizes.size(); ++j)
      if (rank(a.at(i, j)) > rank(b.at(i, j))) return false;
  return true;
}

namespace detail {

// 0-based index lists of the four roles, each sorted.
inline std::vector<std::vector<int>> role_indices(const Partition& p) {
  auto zb = [](const std::vector<int>& v) {
    auto s = sorted_copy(v);
    for (int& x : s) --x;
    return s;
  };
  return {zb(p.s_tilde), zb(p.l_set), zb(p.v_set), zb(p.z_tilde)};
}

inline Pat classify_block(const TransferMatrix& m, const std::vector<int>& rows,
                          const std::vector<int>& cols) {
  if (rows.empty() || cols.empty()) return Pat::Zero;
  bool any_nonzero = false, off_diag_nonzero = false;
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < cols.size(); ++c) {
      if (m.at(rows[r], cols[c]).is_zero()) continue;
      any_nonzero = true;
      if (r != c) off_diag_nonzero = true;
    }
  if (!any_nonzero) return Pat::Zero;
  if (!off_diag_nonzero && rows.size() == cols.size()) return Pat::Diag;
  return Pat::Star;
}

}  // namespace detail

// Block structure of a square node-indexed matrix under the partition, with
// blocks ordered (kept, observed, reconstructed, abstracted) on both axes.
inline StructurePattern pattern_of(const TransferMatrix& m,
                                   const Partition& p) {
  int n = p.total();
  validate_partition(p, n);
  if (m.rows() != n || m.cols() != n)
    throw DimensionMismatch(
        "structure extraction needs one row and column per node");
  auto roles = detail::role_indices(p);
  std::vector<int> sizes;
  for (const auto& r : roles) sizes.push_back(static_cast<int>(r.size()));
  StructurePattern out(sizes, sizes);
  for (size_t i = 0; i < roles.size(); ++i)
    for (size_t j = 0; j < roles.size(); ++j)
      out.set(i, j, detail::classify_block(m, roles[i], roles[j]));
  return out;
}

namespace detail {

// Predicted structures of the four reduction factors, derived from the block
// structure of the module matrix alone. Index order: kept, observed,
// reconstructed, abstracted.
struct FactorPatterns {
  StructurePattern p1, p2, p3, p4;
  StructurePattern g1;  // structure after eliminating the abstracted block
};

inline FactorPatterns factor_patterns(const StructurePattern& g) {
  const size_t S = 0, L = 1, V = 2, Z = 3;
  auto sizes = g.row_sizes;
  Pat w = pat_loop_inverse(g.at(Z, Z));

  StructurePattern g1(sizes, sizes);
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j)
      g1.set(i, j,
             pat_add(g.at(i, j), pat_mul(g.at(i, Z), pat_mul(w, g.at(Z, j)))));

  FactorPatterns f{StructurePattern::identity(sizes),
                   StructurePattern::identity(sizes),
                   StructurePattern::identity(sizes),
                   StructurePattern::identity(sizes), g1};
  // Factor 1: substitute the abstracted nodes away.
  for (size_t i = 0; i < 3; ++i) f.p1.set(i, Z, pat_mul(g.at(i, Z), w));
  f.p1.set(Z, Z, w);
  // Factor 2: swap reconstructed nodes for their observations.
  f.p2.set(L, V, pat_mul(g1.at(L, V), pat_loop_inverse(g1.at(V, V))));
  f.p2.set(V, V, Pat::Zero);
  f.p2.set(V, L, g1.at(L, V) == Pat::Diag ? Pat::Diag : Pat::Star);
  // Factor 3: clear the columns of the reconstructed nodes.
  f.p3.set(S, V, g1.at(S, V));
  f.p3.set(Z, V, g1.at(Z, V));
  // Factor 4 only rescales rows, i.e. stays diagonal.
  return f;
}

// Structure of [I 0] (P4 P3 P2 P1) U for a node-indexed input matrix U.
inline StructurePattern reduced_input_pattern(const StructurePattern& g,
                                              const StructurePattern& u) {
  auto f = factor_patterns(g);
  StructurePattern full = pattern_mul(
      f.p4, pattern_mul(f.p3, pattern_mul(f.p2, pattern_mul(f.p1, u))));
  StructurePattern kept({full.row_sizes[0], full.row_sizes[1]}, full.col_sizes);
  for (size_t i = 0; i < 2; ++i)
    for (size_t j = 0; j < full.col_sizes.size(); ++j)
      kept.set(i, j, full.at(i, j));
  return kept;
}

}  // namespace detail

// Sufficient structural conditions under which the reduced input matrix can
// be permuted to a leading diagonal.
struct DiagonalInputReport {
  bool kept_inputs_private = false;     // clause on inputs of kept nodes
  bool observed_inputs_private = false; // clause on inputs of reconstructed nodes
  bool observation_topology = false;    // clause on the module structure
  std::vector<std::string> failures;

  bool ok() const {
    return kept_inputs_private && observed_inputs_private &&
           observation_topology;
  }
};

inline DiagonalInputReport check_diagonal_input_conditions(const NetworkModel& m, const Partition& p) {
  validate_partition(p, m.L);
  if (m.K != m.L)
    throw DimensionMismatch(
        "the diagonal-input screen needs one excitation channel per node");
  auto roles = detail::role_indices(p);
  const auto& s = roles[0];
  const auto& l = roles[1];
  const auto& v = roles[2];
  const auto& z = roles[3];

  DiagonalInputReport rep;
  auto complement = [&](const std::vector<int>& keep) {
    std::vector<int> rest;
    for (int k = 0; k < m.L; ++k)
      if (!std::binary_search(keep.begin(), keep.end(), k)) rest.push_back(k);
    return rest;
  };
  auto diag_private = [&](const std::vector<int>& nodes, std::string role,
                          bool& flag) {
    flag = true;
    if (nodes.empty()) return;
    if (detail::classify_block(m.R, nodes, nodes) == Pat::Star) {
      flag = false;
      rep.failures.push_back("inputs of the " + role +
                             " nodes are not diagonal");
    }
    if (detail::classify_block(m.R, complement(nodes), nodes) != Pat::Zero) {
      flag = false;
      rep.failures.push_back("inputs of the " + role +
                             " nodes also excite other nodes");
    }
  };
  diag_private(s, "kept", rep.kept_inputs_private);
  diag_private(v, "reconstructed", rep.observed_inputs_private);

  rep.observation_topology = true;
  auto demand_zero = [&](const std::vector<int>& rows,
                         const std::vector<int>& cols, const char* what) {
    if (detail::classify_block(m.G, rows, cols) != Pat::Zero) {
      rep.observation_topology = false;
      rep.failures.push_back(what);
    }
  };
  if (l.size() != v.size() ||
      detail::classify_block(m.G, l, v) == Pat::Star) {
    rep.observation_topology = false;
    rep.failures.push_back(
        "observed-from-reconstructed block is not square diagonal");
  }
  demand_zero(l, z, "observed nodes listen to abstracted nodes");
  demand_zero(v, v, "reconstructed nodes listen to each other");
  demand_zero(v, z, "reconstructed nodes listen to abstracted nodes");
  return rep;
}

// Predicted block structure of the reduced input matrix (rows: kept then
// observed; columns: all four roles of the original input channels).
inline StructurePattern r_check_structure(const NetworkModel& m,
                                          const Partition& p) {
  if (m.K != m.L)
    throw DimensionMismatch(
        "input-structure prediction needs one excitation channel per node");
  return detail::reduced_input_pattern(pattern_of(m.G, p),
                                       pattern_of(m.R, p));
}

// Same prediction for the reduced noise filter.
inline StructurePattern v_check_structure(const NetworkModel& m,
                                          const Partition& p) {
  return detail::reduced_input_pattern(pattern_of(m.G, p),
                                       pattern_of(m.noise.F, p));
}

// The target structure: kept rows get a private diagonal from their own
// inputs, observed rows from the inputs of the reconstructed nodes.
inline StructurePattern diagonal_input_template(const Partition& p) {
  auto roles = detail::role_indices(p);
  std::vector<int> sizes;
  for (const auto& r : roles) sizes.push_back(static_cast<int>(r.size()));
  StructurePattern t({sizes[0], sizes[1]}, sizes);
  auto star = [&](size_t r, size_t c) {
    if (t.row_sizes[r] > 0 && t.col_sizes[c] > 0) t.set(r, c, Pat::Star);
  };
  t.set(0, 0, Pat::Diag);
  star(0, 1);
  star(0, 3);
  if (sizes[1] == sizes[2])
    t.set(1, 2, Pat::Diag);
  else
    star(1, 2);
  star(1, 1);
  star(1, 3);
  return t;
}

// True when some column permutation gives every row k a structurally
// nonzero diagonal entry whose column is structurally zero above row k.
// Decided by augmenting-path matching over the eligible (row, column) pairs.
inline bool has_leading_diagonal(const StructurePattern& pat) {
  int rows = pat.total_rows(), cols = pat.total_cols();
  if (rows == 0) return true;
  if (rows > cols) return false;

  // Expand the block grid to an entry-level nonzero mask.
  std::vector<std::vector<bool>> nz(static_cast<size_t>(rows),
                                    std::vector<bool>(static_cast<size_t>(cols),
                                                      false));
  int row_base = 0;
  for (size_t br = 0; br < pat.row_sizes.size(); ++br) {
    int col_base = 0;
    for (size_t bc = 0; bc < pat.col_sizes.size(); ++bc) {
      Pat p = pat.at(br, bc);
      for (int r = 0; r < pat.row_sizes[br]; ++r)
        for (int c = 0; c < pat.col_sizes[bc]; ++c)
          if (p == Pat::Star || (p == Pat::Diag && r == c))
            nz[static_cast<size_t>(row_base + r)]
              [static_cast<size_t>(col_base + c)] = true;
      col_base += pat.col_sizes[bc];
    }
    row_base += pat.row_sizes[br];
  }

  // Column c can serve as the diagonal of row r only when everything above
  // row r in that column is structurally zero.
  auto eligible = [&](int r, int c) {
    if (!nz[static_cast<size_t>(r)][static_cast<size_t>(c)]) return false;
    for (int above = 0; above < r; ++above)
      if (nz[static_cast<size_t>(above)][static_cast<size_t>(c)]) return false;
    return true;
  };

  std::vector<int> match_col(static_cast<size_t>(cols), -1);
  std::vector<bool> tried;
  std::function<bool(int)> augment = [&](int r) -> bool {
    for (int c = 0; c < cols; ++c) {
      if (tried[static_cast<size_t>(c)] || !eligible(r, c)) continue;
      tried[static_cast<size_t>(c)] = true;
      if (match_col[static_cast<size_t>(c)] == -1 ||
          augment(match_col[static_cast<size_t>(c)])) {
        match_col[static_cast<size_t>(c)] = r;
        return true;
      }
    }
    return false;
  };
  for (int r = 0; r < rows; ++r) {
    tried.assign(static_cast<size_t>(cols), false);
    if (!augment(r)) return false;
  }
  return true;
}

// Concrete counterpart of conforms_to: the matrix must already be arranged
// in the pattern's block order.
inline bool matrix_conforms(const TransferMatrix& m,
                            const StructurePattern& pat) {
  if (m.rows() != pat.total_rows() || m.cols() != pat.total_cols())
    throw DimensionMismatch("matrix does not fit the block structure");
  int row_base = 0;
  for (size_t br = 0; br < pat.row_sizes.size(); ++br) {
    int col_base = 0;
    for (size_t bc = 0; bc < pat.col_sizes.size(); ++bc) {
      Pat p = pat.at(br, bc);
      for (int r = 0; r < pat.row_sizes[br]; ++r)
        for (int c = 0; c < pat.col_sizes[bc]; ++c) {
          const auto& entry = m.at(row_base + r, col_base + c);
          if (p == Pat::Zero && !entry.is_zero()) return false;
          if (p == Pat::Diag && r != c && !entry.is_zero()) return false;
        }
      col_base += pat.col_sizes[bc];
    }
    row_base += pat.row_sizes[br];
  }
  return true;
}

}  // namespace linnet
