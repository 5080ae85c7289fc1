#pragma once

#include <random>

#include "linnet/abstraction.hpp"
#include "linnet/network.hpp"
#include "rng.hpp"

namespace testsupport {

using linnet::NetworkModel;
using linnet::NoiseRep;
using linnet::Rat;
using linnet::RationalFunction;
using linnet::TransferMatrix;

inline RationalFunction delay_gain(const Rat& c) {
  return RationalFunction::delay_term(c, 1);
}

// Four-node loop network used throughout: node 1 listens to 2, 3 and 4,
// node 2 listens to 4, node 4 listens to 1; identity input map and white
// unit noise.
inline NetworkModel four_node_example(const RationalFunction& g12,
                                      const RationalFunction& g13,
                                      const RationalFunction& g14,
                                      const RationalFunction& g24,
                                      const RationalFunction& g41) {
  NetworkModel m;
  m.L = 4;
  m.K = 4;
  m.G = TransferMatrix(4, 4);
  m.G.at(0, 1) = g12;
  m.G.at(0, 2) = g13;
  m.G.at(0, 3) = g14;
  m.G.at(1, 3) = g24;
  m.G.at(3, 0) = g41;
  m.R = TransferMatrix::identity(4);
  m.noise = NoiseRep::white(4);
  return m;
}

// Distinct module gains, so no accidental cancellations hide index bugs.
inline NetworkModel four_node_default() {
  return four_node_example(delay_gain(Rat(1, 2)), delay_gain(Rat(1, 3)),
                           delay_gain(Rat(1, 4)), delay_gain(Rat(2, 5)),
                           delay_gain(Rat(3, 7)));
}

// All five modules equal to c * q^-1.
inline NetworkModel four_node_uniform(const Rat& c = Rat(3, 10)) {
  RationalFunction g = delay_gain(c);
  return four_node_example(g, g, g, g, g);
}

// Random model with single-delay modules small enough that the closed loop
// is guaranteed stable (row sums below one keep the loop a contraction).
inline NetworkModel random_stable_model(std::mt19937& rng, int L,
                                        double edge_prob = 0.5) {
  NetworkModel m;
  m.L = L;
  m.K = L;
  m.G = TransferMatrix(L, L);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> num(1, 3);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) {
      if (i == j || coin(rng) >= edge_prob) continue;
      m.G.at(i, j) = delay_gain(Rat(num(rng), 4 * L));
    }
  m.R = TransferMatrix::identity(L);
  m.noise = NoiseRep::white(L);
  return m;
}

// Six-node observation benchmark: two source nodes feed three sink nodes,
// one of them through a relay. Labels: 1=v1, 2=v2, 3=z, 4=l1, 5=l2, 6=l3.
inline NetworkModel observation_example() {
  NetworkModel m;
  m.L = 6;
  m.K = 6;
  m.G = TransferMatrix(6, 6);
  m.G.at(3, 0) = delay_gain(Rat(1, 2));   // v1 -> l1
  m.G.at(4, 0) = delay_gain(Rat(1, 3));   // v1 -> l2
  m.G.at(2, 1) = delay_gain(Rat(2, 3));   // v2 -> z
  m.G.at(4, 2) = delay_gain(Rat(3, 4));   // z -> l2
  m.G.at(5, 2) = delay_gain(Rat(1, 5));   // z -> l3
  m.R = TransferMatrix::identity(6);
  m.noise = NoiseRep::white(6);
  m.node_labels = {"v1", "v2", "z", "l1", "l2", "l3"};
  return m;
}

// Six-node network for exercising the node-selection search on the module
// from node 1 to node 2. Two parallel routes (through node 3 and through
// node 5) must be blocked; nodes 4 and 6 can serve as observation points.
inline NetworkModel selection_example() {
  NetworkModel m;
  m.L = 6;
  m.K = 6;
  m.G = TransferMatrix(6, 6);
  m.G.at(1, 0) = delay_gain(Rat(1, 2));   // 1 -> 2, module of interest
  m.G.at(2, 0) = delay_gain(Rat(2, 3));   // 1 -> 3
  m.G.at(1, 2) = delay_gain(Rat(3, 4));   // 3 -> 2
  m.G.at(3, 2) = delay_gain(Rat(4, 5));   // 3 -> 4
  m.G.at(4, 0) = delay_gain(Rat(5, 6));   // 1 -> 5
  m.G.at(3, 4) = delay_gain(Rat(6, 7));   // 5 -> 4
  m.G.at(5, 4) = delay_gain(Rat(7, 8));   // 5 -> 6
  m.R = TransferMatrix::identity(6);
  m.noise = NoiseRep::white(6);
  m.node_labels = {"i", "j", "u", "l", "w2", "w3"};
  return m;
}

// Random well-posed model with strictly proper modules of degree at most
// two; the unit constant term of det(I-G) keeps every loop inverse alive.
inline NetworkModel random_generic_model(std::mt19937& rng, int L,
                                         double edge_prob = 0.6) {
  NetworkModel m;
  m.L = L;
  m.K = L;
  m.G = TransferMatrix(L, L);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> num(-3, 3);
  std::uniform_int_distribution<int> den(1, 3);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) {
      if (i == j || coin(rng) >= edge_prob) continue;
      linnet::Polynomial n{Rat(0), Rat(num(rng), den(rng)),
                           Rat(num(rng), den(rng))};
      if (n.is_zero()) n = linnet::Polynomial{Rat(0), Rat(1, 2)};
      m.G.at(i, j) = RationalFunction(
          n, linnet::Polynomial{Rat(1), Rat(num(rng), 4)});
    }
  m.R = TransferMatrix::identity(L);
  m.noise = NoiseRep::white(L);
  return m;
}

// Random partition of {1..L} that passes the indirect-observation rank
// check for the given model; at least `min_kept` nodes stay.
inline linnet::Partition random_feasible_partition(std::mt19937& rng,
                                                   const NetworkModel& m,
                                                   int min_kept = 1) {
  for (int attempt = 0; attempt < 400; ++attempt) {
    linnet::Partition p;
    for (int k = 1; k <= m.L; ++k) {
      switch (rng() % 4) {
        case 0: p.s_tilde.push_back(k); break;
        case 1: p.l_set.push_back(k); break;
        case 2: p.v_set.push_back(k); break;
        default: p.z_tilde.push_back(k); break;
      }
    }
    if (static_cast<int>(p.s_tilde.size() + p.l_set.size()) < min_kept)
      continue;
    if (p.l_set.size() < p.v_set.size()) continue;
    if (!linnet::check_indirect_observations(m, p)) continue;
    return p;
  }
  // Degenerate but always feasible: keep everything.
  linnet::Partition p;
  for (int k = 1; k <= m.L; ++k) p.s_tilde.push_back(k);
  return p;
}

// Random model meeting all three structural conditions for a diagonal-input
// reduction: identity inputs, square diagonal observed-from-reconstructed
// block, and no forbidden edges into the observed or reconstructed nodes.
// Returns the model and the partition it satisfies the conditions for.
inline std::pair<NetworkModel, linnet::Partition> random_diagonal_input_model(
    std::mt19937& rng) {
  int s = 1 + static_cast<int>(rng() % 3);
  int lv = static_cast<int>(rng() % 3);
  int z = static_cast<int>(rng() % 3);
  if (lv == 0 && z == 0) z = 1;
  int L = s + 2 * lv + z;

  linnet::Partition p;
  int next = 1;
  for (int k = 0; k < s; ++k) p.s_tilde.push_back(next++);
  for (int k = 0; k < lv; ++k) p.l_set.push_back(next++);
  for (int k = 0; k < lv; ++k) p.v_set.push_back(next++);
  for (int k = 0; k < z; ++k) p.z_tilde.push_back(next++);

  auto in = [](const std::vector<int>& set, int node) {
    return std::find(set.begin(), set.end(), node + 1) != set.end();
  };
  NetworkModel m;
  m.L = L;
  m.K = L;
  m.G = TransferMatrix(L, L);
  std::uniform_int_distribution<int> num(1, 5);
  for (int row = 0; row < L; ++row)
    for (int col = 0; col < L; ++col) {
      if (row == col) continue;
      bool row_l = in(p.l_set, row), row_v = in(p.v_set, row);
      bool col_v = in(p.v_set, col), col_z = in(p.z_tilde, col);
      if (row_l && (col_v || col_z)) continue;  // filled separately / zero
      if (row_v && (col_v || col_z)) continue;  // must stay zero
      if (rng() % 3 == 0) m.G.at(row, col) = delay_gain(Rat(num(rng), 6));
    }
  // Square diagonal observed-from-reconstructed block, nonzero diagonal.
  for (int k = 0; k < lv; ++k)
    m.G.at(p.l_set[static_cast<size_t>(k)] - 1,
           p.v_set[static_cast<size_t>(k)] - 1) = delay_gain(Rat(num(rng), 4));
  m.R = TransferMatrix::identity(L);
  m.noise = NoiseRep::white(L);
  return {m, p};
}

// Random proper noise filter and an exactly positive definite covariance.
inline void randomize_noise(std::mt19937& rng, NetworkModel& m) {
  std::uniform_int_distribution<int> num(-2, 2);
  TransferMatrix f = TransferMatrix::identity(m.L);
  for (int i = 0; i < m.L; ++i)
    for (int j = 0; j < m.L; ++j)
      if (i != j && num(rng) > 0)
        f.at(i, j) = delay_gain(Rat(num(rng), 3));
  TransferMatrix a(m.L, m.L);
  for (int i = 0; i < m.L; ++i)
    for (int j = 0; j < m.L; ++j)
      a.at(i, j) = RationalFunction(Rat(num(rng)));
  TransferMatrix lam = linnet::tm_add(linnet::tm_mul(linnet::tm_transpose(a), a),
                                      TransferMatrix::identity(m.L));
  m.noise = NoiseRep{f, lam, true};
}

}  // namespace testsupport
