#pragma once

#include "linnet/network.hpp"
#include "linnet/transfer_matrix.hpp"

namespace linnet {

// Premultiplier P rewriting the network equations without changing the
// external behaviour: w = G w + u becomes w = G' w + P u with
// G' = I - P(I - G).
struct Transformation {
  TransferMatrix P;
};

// Valid iff P is nonsingular as a rational matrix and the rewritten module
// matrix keeps an exactly zero diagonal.
inline bool is_valid_transformation(const Transformation& t,
                                    const NetworkModel& m) {
  check_model_dimensions(m);
  if (t.P.rows() != m.L || t.P.cols() != m.L)
    throw DimensionMismatch("transformation must be L x L");
  if (!tm_nonsingular(t.P)) return false;
  TransferMatrix g2 = tm_sub(TransferMatrix::identity(m.L),
                             tm_mul(t.P, detail::loop_matrix(m)));
  for (int k = 0; k < m.L; ++k)
    if (!g2.at(k, k).is_zero()) return false;
  return true;
}

// G' = I - P(I-G), R' = P R, noise filter P F (left unfactorized).
inline NetworkModel apply_transformation(const NetworkModel& m,
                                         const Transformation& t) {
  if (!is_valid_transformation(t, m))
    throw InvalidTransformation(
        "transformation is singular or breaks the zero diagonal");
  NetworkModel out = m;
  out.G = tm_sub(TransferMatrix::identity(m.L),
                 tm_mul(t.P, detail::loop_matrix(m)));
  out.R = tm_mul(t.P, m.R);
  out.noise.F = tm_mul(t.P, m.noise.F);
  out.noise.monic_flag = false;
  return out;
}

// The unique P carrying module matrix g1 into g2: P = (I-g2)(I-g1)^-1.
inline Transformation transformation_between(const TransferMatrix& g1,
                                             const TransferMatrix& g2) {
  if (!g1.is_hollow() || !g2.is_hollow())
    throw InvalidTransformation("module matrices must have zero diagonals");
  check_same_shape(g1, g2);
  int n = g1.rows();
  TransferMatrix p = tm_mul(tm_sub(TransferMatrix::identity(n), g2),
                            tm_inverse(tm_sub(TransferMatrix::identity(n), g1)));
  return Transformation{p};
}

}  // namespace linnet
