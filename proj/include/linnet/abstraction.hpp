#pragma once

#include <numeric>
#include <random>
#include <vector>

#include "linnet/network.hpp"
#include "linnet/partition.hpp"
#include "linnet/transform.hpp"

namespace linnet {

// Output of removing the nodes in v_set and z_tilde. The reduced model keeps
// the nodes listed in `kept` (original 1-based indices, in result row order).
// p_abs is the full-size premultiplier realizing the reduction, in original
// node order; the substitution route does not construct it and leaves it
// empty. g4 is the fully transformed module matrix in original node order:
// its removed columns are exactly zero and its kept diagonal is exactly zero
// (the substitution route zero-pads the removed rows).
struct AbstractionResult {
  NetworkModel abstracted;
  Transformation p_abs;
  TransferMatrix g4;
  Partition partition;
  std::vector<int> kept;
  bool g_proper = true;
  bool input_proper = true;
  int max_degree = 0;
};

namespace detail {

// Node permutation into block order (kept, observations, observed-removed,
// eliminated-removed) with the positions of each block.
struct BlockLayout {
  std::vector<int> perm;  // permuted position -> original 0-based index
  int s = 0, l = 0, v = 0, z = 0;
  std::vector<int> sb, lb, vb, zb, keptb, removedb;

  int n() const { return s + l + v + z; }
};

inline BlockLayout make_layout(const Partition& p, int L) {
  validate_partition(p, L);
  BlockLayout b;
  b.s = static_cast<int>(p.s_tilde.size());
  b.l = static_cast<int>(p.l_set.size());
  b.v = static_cast<int>(p.v_set.size());
  b.z = static_cast<int>(p.z_tilde.size());
  for (int k : block_order(p)) b.perm.push_back(k - 1);
  auto range = [](int lo, int n) {
    std::vector<int> r(static_cast<size_t>(n));
    std::iota(r.begin(), r.end(), lo);
    return r;
  };
  b.sb = range(0, b.s);
  b.lb = range(b.s, b.l);
  b.vb = range(b.s + b.l, b.v);
  b.zb = range(b.s + b.l + b.v, b.z);
  b.keptb = range(0, b.s + b.l);
  b.removedb = range(b.s + b.l, b.v + b.z);
  return b;
}

inline TransferMatrix permute_rows(const TransferMatrix& m,
                                   const std::vector<int>& perm) {
  std::vector<int> cols(static_cast<size_t>(m.cols()));
  std::iota(cols.begin(), cols.end(), 0);
  return tm_select(m, perm, cols);
}

// Undo the block permutation of a square matrix.
inline TransferMatrix unpermute_square(const TransferMatrix& mp,
                                       const std::vector<int>& perm) {
  TransferMatrix out(mp.rows(), mp.cols());
  for (int i = 0; i < mp.rows(); ++i)
    for (int j = 0; j < mp.cols(); ++j)
      out.at(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]) =
          mp.at(i, j);
  return out;
}

// G' = I - P (I - G), the module matrix after premultiplying by P.
inline TransferMatrix transform_modules(const TransferMatrix& p,
                                        const TransferMatrix& g) {
  TransferMatrix eye = TransferMatrix::identity(g.rows());
  return tm_sub(eye, tm_mul(p, tm_sub(eye, g)));
}

// (I - G_zz)^-1 over the eliminated block.
inline TransferMatrix eliminated_loop_inverse(const TransferMatrix& gp,
                                              const BlockLayout& b) {
  return tm_inverse(tm_sub(TransferMatrix::identity(b.z),
                           tm_select(gp, b.zb, b.zb)));
}

// The composite observation matrix G_LV + G_LZ (I-G_ZZ)^-1 G_ZV, whose
// column rank decides whether the observation nodes can stand in for the
// removed observed nodes.
inline TransferMatrix observation_matrix(const TransferMatrix& gp,
                                         const BlockLayout& b) {
  TransferMatrix direct = tm_select(gp, b.lb, b.vb);
  if (b.z == 0) return direct;
  TransferMatrix w = eliminated_loop_inverse(gp, b);
  return tm_add(direct, tm_mul(tm_mul(tm_select(gp, b.lb, b.zb), w),
                               tm_select(gp, b.zb, b.vb)));
}

inline void scan_properness(const TransferMatrix& m, bool& proper,
                            int& max_degree) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const RationalFunction& f = m.at(i, j);
      proper = proper && f.is_proper();
      max_degree = std::max(
          {max_degree, f.num().degree(), f.den().degree()});
    }
}

}  // namespace detail

// True iff the observation nodes generically separate the removed observed
// nodes: the composite observation matrix has full column rank, probed at
// deterministic random points on the unit circle.
inline bool check_indirect_observations(const NetworkModel& m,
                                        const Partition& p) {
  check_model_dimensions(m);
  detail::BlockLayout b = detail::make_layout(p, m.L);
  if (b.v == 0) return true;
  TransferMatrix gp = tm_select(m.G, b.perm, b.perm);
  TransferMatrix obs = detail::observation_matrix(gp, b);
  std::mt19937 rng(0x0b5e);
  return rank_at(obs, FrequencyGrid::random_points(8, rng)) == b.v;
}

// First factor: substitute the eliminated nodes away. Identity outside the
// eliminated columns; declared in block order (kept, observations, observed,
// eliminated), like the other three factors.
inline Transformation build_p1(const NetworkModel& m, const Partition& p) {
  detail::BlockLayout b = detail::make_layout(p, m.L);
  TransferMatrix gp = tm_select(m.G, b.perm, b.perm);
  TransferMatrix p1 = TransferMatrix::identity(m.L);
  if (b.z > 0) {
    TransferMatrix w = detail::eliminated_loop_inverse(gp, b);
    std::vector<int> others;
    others.insert(others.end(), b.sb.begin(), b.sb.end());
    others.insert(others.end(), b.lb.begin(), b.lb.end());
    others.insert(others.end(), b.vb.begin(), b.vb.end());
    const int z0 = b.s + b.l + b.v;
    tm_set_block(p1, 0, z0, tm_mul(tm_select(gp, others, b.zb), w));
    tm_set_block(p1, z0, z0, w);
  }
  return Transformation{p1};
}

// Second factor: rewrite the observed-removed rows through the observation
// rows. g1 is the module matrix produced by the first factor, block order.
inline Transformation build_p2(const NetworkModel& m, const Partition& p,
                               const TransferMatrix& g1) {
  detail::BlockLayout b = detail::make_layout(p, m.L);
  TransferMatrix p2 = TransferMatrix::identity(m.L);
  if (b.v > 0) {
    TransferMatrix g1_lv = tm_select(g1, b.lb, b.vb);
    TransferMatrix bmat =
        tm_mul(g1_lv, tm_inverse(tm_sub(TransferMatrix::identity(b.v),
                                        tm_select(g1, b.vb, b.vb))));
    TransferMatrix d = tm_left_inverse(g1_lv);
    const int l0 = b.s;
    const int v0 = b.s + b.l;
    tm_set_block(p2, l0, v0, bmat);
    for (int i = 0; i < b.v; ++i)
      p2.at(v0 + i, v0 + i) = RationalFunction::zero();
    tm_set_block(p2, v0, l0, d);
  }
  return Transformation{p2};
}

// Third factor: cancel the residual observed-removed columns. g2 is the
// module matrix produced by the second factor.
inline Transformation build_p3(const NetworkModel& m, const Partition& p,
                               const TransferMatrix& g2) {
  detail::BlockLayout b = detail::make_layout(p, m.L);
  TransferMatrix p3 = TransferMatrix::identity(m.L);
  if (b.v > 0) {
    const int v0 = b.s + b.l;
    tm_set_block(p3, 0, v0, tm_neg(tm_select(g2, b.sb, b.vb)));
    if (b.z > 0)
      tm_set_block(p3, v0 + b.v, v0,
                   tm_neg(tm_select(g2, b.zb, b.vb)));
  }
  return Transformation{p3};
}

// Fourth factor: remove the self-loops created along the way by scaling each
// row with 1/(1 - g3_jj). g3 is the module matrix after the third factor.
inline Transformation build_p4(const NetworkModel& m, const Partition& p,
                               const TransferMatrix& g3) {
  detail::BlockLayout b = detail::make_layout(p, m.L);
  (void)b;
  TransferMatrix p4(m.L, m.L);
  for (int j = 0; j < m.L; ++j) {
    RationalFunction denom = RationalFunction::one() - g3.at(j, j);
    if (denom.is_zero())
      throw SelfLoopSingular("self-loop gain of node " + std::to_string(j) +
                             " equals one identically");
    p4.at(j, j) = denom.inverse();
  }
  return Transformation{p4};
}

namespace detail {

inline AbstractionResult assemble_result(
    const NetworkModel& m, const Partition& p, const BlockLayout& b,
    TransferMatrix g_kept, TransferMatrix r_kept, TransferMatrix f_kept,
    TransferMatrix p_abs_original, TransferMatrix g4_original) {
  AbstractionResult res;
  res.partition = p;
  res.kept = kept_nodes(p);
  res.p_abs = Transformation{std::move(p_abs_original)};
  res.g4 = std::move(g4_original);

  NetworkModel& out = res.abstracted;
  out.L = b.s + b.l;
  out.K = m.K;
  out.G = std::move(g_kept);
  out.R = std::move(r_kept);
  out.noise.F = std::move(f_kept);
  out.noise.Lambda = m.noise.Lambda;
  out.noise.monic_flag = false;
  if (!m.node_labels.empty())
    for (int k : res.kept)
      out.node_labels.push_back(m.node_labels[static_cast<size_t>(k - 1)]);
  out.signal_labels = m.signal_labels;

  scan_properness(out.G, res.g_proper, res.max_degree);
  bool input_ok = true;
  scan_properness(out.R, input_ok, res.max_degree);
  scan_properness(out.noise.F, input_ok, res.max_degree);
  res.input_proper = input_ok;
  return res;
}

}  // namespace detail

// Reduction via the explicit premultiplier product: compose the four
// factors, transform the module matrix once per factor, and read the kept
// blocks off the result.
inline AbstractionResult abstract_by_transformation(const NetworkModel& m,
                                                    const Partition& p) {
  check_model_dimensions(m);
  detail::BlockLayout b = detail::make_layout(p, m.L);
  TransferMatrix gp = tm_select(m.G, b.perm, b.perm);

  Transformation p1 = build_p1(m, p);
  TransferMatrix g1 = detail::transform_modules(p1.P, gp);
  Transformation p2 = build_p2(m, p, g1);
  TransferMatrix g2 = detail::transform_modules(p2.P, g1);
  Transformation p3 = build_p3(m, p, g2);
  TransferMatrix g3 = detail::transform_modules(p3.P, g2);
  Transformation p4 = build_p4(m, p, g3);
  TransferMatrix g4 = detail::transform_modules(p4.P, g3);

  TransferMatrix p_abs =
      tm_mul(p4.P, tm_mul(p3.P, tm_mul(p2.P, p1.P)));

  for (int c : b.removedb)
    for (int r = 0; r < m.L; ++r)
      if (!g4.at(r, c).is_zero())
        throw Error("removed column survived the reduction");
  for (int k : b.keptb)
    if (!g4.at(k, k).is_zero())
      throw Error("kept diagonal entry survived the reduction");

  TransferMatrix r_all = tm_mul(p_abs, detail::permute_rows(m.R, b.perm));
  TransferMatrix f_all =
      tm_mul(p_abs, detail::permute_rows(m.noise.F, b.perm));
  std::vector<int> rcols(static_cast<size_t>(m.K));
  std::iota(rcols.begin(), rcols.end(), 0);
  std::vector<int> fcols(static_cast<size_t>(m.noise.F.cols()));
  std::iota(fcols.begin(), fcols.end(), 0);

  return detail::assemble_result(
      m, p, b, tm_select(g4, b.keptb, b.keptb),
      tm_select(r_all, b.keptb, rcols), tm_select(f_all, b.keptb, fcols),
      detail::unpermute_square(p_abs, b.perm),
      detail::unpermute_square(g4, b.perm));
}

// Reduction via the block substitution formulas: eliminate the z-block,
// reconstruct the observed nodes from the observation rows, then clear the
// self-loops row by row. Independent of the premultiplier route.
inline AbstractionResult abstract_by_substitution(const NetworkModel& m,
                                                  const Partition& p) {
  check_model_dimensions(m);
  detail::BlockLayout b = detail::make_layout(p, m.L);
  TransferMatrix gp = tm_select(m.G, b.perm, b.perm);
  TransferMatrix up = tm_hstack(detail::permute_rows(m.R, b.perm),
                                detail::permute_rows(m.noise.F, b.perm));

  // Eliminate the z-block from every remaining equation.
  const std::vector<int>* blocks[3] = {&b.sb, &b.lb, &b.vb};
  TransferMatrix g1[3][3];
  TransferMatrix u1[3];
  std::vector<int> ucols(static_cast<size_t>(up.cols()));
  std::iota(ucols.begin(), ucols.end(), 0);
  if (b.z > 0) {
    TransferMatrix w = detail::eliminated_loop_inverse(gp, b);
    for (int x = 0; x < 3; ++x) {
      TransferMatrix carry = tm_mul(tm_select(gp, *blocks[x], b.zb), w);
      for (int y = 0; y < 3; ++y)
        g1[x][y] = tm_add(tm_select(gp, *blocks[x], *blocks[y]),
                          tm_mul(carry, tm_select(gp, b.zb, *blocks[y])));
      u1[x] = tm_add(tm_select(up, *blocks[x], ucols),
                     tm_mul(carry, tm_select(up, b.zb, ucols)));
    }
  } else {
    for (int x = 0; x < 3; ++x) {
      for (int y = 0; y < 3; ++y)
        g1[x][y] = tm_select(gp, *blocks[x], *blocks[y]);
      u1[x] = tm_select(up, *blocks[x], ucols);
    }
  }
  enum { S = 0, LB = 1, V = 2 };

  // Swap the observed-removed signals for observation-based reconstructions.
  TransferMatrix g3_ss = g1[S][S], g3_sl = g1[S][LB];
  TransferMatrix g3_ls = g1[LB][S], g3_ll = g1[LB][LB];
  TransferMatrix u3_s = u1[S], u3_l = u1[LB];
  if (b.v > 0) {
    TransferMatrix d = tm_left_inverse(g1[LB][V]);
    TransferMatrix e = tm_inverse(
        tm_sub(TransferMatrix::identity(b.v), g1[V][V]));
    TransferMatrix sv_d = tm_mul(g1[S][V], d);
    TransferMatrix lv_e = tm_mul(g1[LB][V], e);
    g3_ss = tm_sub(g1[S][S], tm_mul(sv_d, g1[LB][S]));
    g3_sl = tm_add(g1[S][LB],
                   tm_mul(sv_d, tm_sub(TransferMatrix::identity(b.l),
                                       g1[LB][LB])));
    g3_ls = tm_add(g1[LB][S], tm_mul(lv_e, g1[V][S]));
    g3_ll = tm_add(g1[LB][LB], tm_mul(lv_e, g1[V][LB]));
    u3_s = tm_sub(u1[S], tm_mul(sv_d, u1[LB]));
    u3_l = tm_add(u1[LB], tm_mul(lv_e, u1[V]));
  }

  const int n2 = b.s + b.l;
  TransferMatrix g3(n2, n2);
  tm_set_block(g3, 0, 0, g3_ss);
  tm_set_block(g3, 0, b.s, g3_sl);
  tm_set_block(g3, b.s, 0, g3_ls);
  tm_set_block(g3, b.s, b.s, g3_ll);
  TransferMatrix u3 = tm_vstack(u3_s, u3_l);

  // Remove the self-loop of each surviving equation.
  for (int j = 0; j < n2; ++j) {
    RationalFunction denom = RationalFunction::one() - g3.at(j, j);
    if (denom.is_zero())
      throw SelfLoopSingular("self-loop gain of node " + std::to_string(j) +
                             " equals one identically");
    RationalFunction scale = denom.inverse();
    for (int k = 0; k < n2; ++k)
      g3.at(j, k) = k == j ? RationalFunction::zero()
                           : scale * g3.at(j, k);
    for (int k = 0; k < up.cols(); ++k) u3.at(j, k) = scale * u3.at(j, k);
  }

  std::vector<int> rcols(static_cast<size_t>(m.K));
  std::iota(rcols.begin(), rcols.end(), 0);
  std::vector<int> fcols(static_cast<size_t>(m.noise.F.cols()));
  std::iota(fcols.begin(), fcols.end(), 0);
  for (int& c : fcols) c += m.K;
  std::vector<int> allrows(static_cast<size_t>(n2));
  std::iota(allrows.begin(), allrows.end(), 0);

  // Zero-padded full module matrix: kept block at the kept original
  // positions, removed rows and columns zero.
  TransferMatrix g4_original(m.L, m.L);
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n2; ++j)
      g4_original.at(b.perm[static_cast<size_t>(i)],
                     b.perm[static_cast<size_t>(j)]) = g3.at(i, j);

  return detail::assemble_result(
      m, p, b, std::move(g3), tm_select(u3, allrows, rcols),
      tm_select(u3, allrows, fcols), TransferMatrix(),
      std::move(g4_original));
}

// Plain node removal: keep exactly `keep`, eliminate everything else by
// substitution; no observation machinery involved.
inline AbstractionResult immersion(const NetworkModel& m,
                                   const std::vector<int>& keep) {
  if (keep.empty()) throw InvalidPartition("must keep at least one node");
  Partition p;
  p.s_tilde = keep;
  std::vector<bool> kept(static_cast<size_t>(m.L) + 1, false);
  for (int k : keep) {
    if (k < 1 || k > m.L)
      throw InvalidPartition("node index " + std::to_string(k) +
                             " outside 1.." + std::to_string(m.L));
    kept[static_cast<size_t>(k)] = true;
  }
  for (int k = 1; k <= m.L; ++k)
    if (!kept[static_cast<size_t>(k)]) p.z_tilde.push_back(k);
  return abstract_by_transformation(m, p);
}

}  // namespace linnet
