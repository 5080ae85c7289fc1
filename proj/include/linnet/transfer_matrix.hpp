#pragma once

#include <vector>

#include "linnet/ratfun.hpp"

namespace linnet {

// Dense rectangular matrix over the rational-function field. Dimensions may
// be zero (empty block operands show up throughout the block algebra).
class TransferMatrix {
 public:
  TransferMatrix() : rows_(0), cols_(0) {}
  TransferMatrix(int rows, int cols)
      : rows_(rows), cols_(cols),
        e_(static_cast<size_t>(rows) * static_cast<size_t>(cols)) {
    if (rows < 0 || cols < 0) throw DimensionMismatch("negative dimension");
  }

  static TransferMatrix identity(int n) {
    TransferMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = RationalFunction::one();
    return m;
  }
  static TransferMatrix zero(int rows, int cols) {
    return TransferMatrix(rows, cols);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  RationalFunction& at(int r, int c) {
    return e_[static_cast<size_t>(r) * cols_ + c];
  }
  const RationalFunction& at(int r, int c) const {
    return e_[static_cast<size_t>(r) * cols_ + c];
  }

  friend bool operator==(const TransferMatrix& a, const TransferMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
  }

  bool is_zero() const {
    for (const auto& v : e_)
      if (!v.is_zero()) return false;
    return true;
  }
  bool is_hollow() const {
    if (!is_square()) return false;
    for (int i = 0; i < rows_; ++i)
      if (!at(i, i).is_zero()) return false;
    return true;
  }

 private:
  int rows_, cols_;
  std::vector<RationalFunction> e_;
};

inline void check_same_shape(const TransferMatrix& a,
                             const TransferMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("matrix shapes differ");
}

inline TransferMatrix tm_add(const TransferMatrix& a,
                             const TransferMatrix& b) {
  check_same_shape(a, b);
  TransferMatrix r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j) + b.at(i, j);
  return r;
}

inline TransferMatrix tm_sub(const TransferMatrix& a,
                             const TransferMatrix& b) {
  check_same_shape(a, b);
  TransferMatrix r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j) - b.at(i, j);
  return r;
}

inline TransferMatrix tm_neg(const TransferMatrix& a) {
  TransferMatrix r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = -a.at(i, j);
  return r;
}

inline TransferMatrix tm_mul(const TransferMatrix& a,
                             const TransferMatrix& b) {
  if (a.cols() != b.rows())
    throw DimensionMismatch("inner dimensions differ in product");
  TransferMatrix r(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      if (a.at(i, k).is_zero()) continue;
      for (int j = 0; j < b.cols(); ++j) {
        if (b.at(k, j).is_zero()) continue;
        r.at(i, j) = r.at(i, j) + a.at(i, k) * b.at(k, j);
      }
    }
  return r;
}

inline TransferMatrix tm_scale(const RationalFunction& s,
                               const TransferMatrix& a) {
  TransferMatrix r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = s * a.at(i, j);
  return r;
}

inline TransferMatrix tm_identity(int n) { return TransferMatrix::identity(n); }

inline TransferMatrix tm_transpose(const TransferMatrix& a) {
  TransferMatrix r(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(j, i) = a.at(i, j);
  return r;
}

inline TransferMatrix tm_hstack(const TransferMatrix& a,
                                const TransferMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("hstack row mismatch");
  TransferMatrix r(a.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
    for (int j = 0; j < b.cols(); ++j) r.at(i, a.cols() + j) = b.at(i, j);
  }
  return r;
}

inline TransferMatrix tm_vstack(const TransferMatrix& a,
                                const TransferMatrix& b) {
  if (a.cols() != b.cols()) throw DimensionMismatch("vstack column mismatch");
  TransferMatrix r(a.rows() + b.rows(), a.cols());
  for (int j = 0; j < a.cols(); ++j) {
    for (int i = 0; i < a.rows(); ++i) r.at(i, j) = a.at(i, j);
    for (int i = 0; i < b.rows(); ++i) r.at(a.rows() + i, j) = b.at(i, j);
  }
  return r;
}

// Submatrix by explicit row/column index lists (repetition allowed).
inline TransferMatrix tm_select(const TransferMatrix& a,
                                const std::vector<int>& rows,
                                const std::vector<int>& cols) {
  for (int r : rows)
    if (r < 0 || r >= a.rows()) throw DimensionMismatch("row index range");
  for (int c : cols)
    if (c < 0 || c >= a.cols()) throw DimensionMismatch("column index range");
  TransferMatrix r(static_cast<int>(rows.size()),
                   static_cast<int>(cols.size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j)
      r.at(static_cast<int>(i), static_cast<int>(j)) = a.at(rows[i], cols[j]);
  return r;
}

inline void tm_set_block(TransferMatrix& dst, int r0, int c0,
                         const TransferMatrix& src) {
  if (r0 + src.rows() > dst.rows() || c0 + src.cols() > dst.cols())
    throw DimensionMismatch("block does not fit");
  for (int i = 0; i < src.rows(); ++i)
    for (int j = 0; j < src.cols(); ++j) dst.at(r0 + i, c0 + j) = src.at(i, j);
}

namespace detail {

// In-place Gauss-Jordan over the field; `aug` is transformed alongside.
// Pivots prefer low-degree entries to keep intermediate degrees small.
// Returns the determinant of the eliminated matrix.
inline RationalFunction gauss_jordan(TransferMatrix& m, TransferMatrix& aug) {
  const int n = m.rows();
  RationalFunction det = RationalFunction::one();
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    long best = -1;
    for (int r = col; r < n; ++r) {
      const RationalFunction& v = m.at(r, col);
      if (v.is_zero()) continue;
      long d = v.num().degree() + v.den().degree();
      if (pivot < 0 || d < best) {
        pivot = r;
        best = d;
      }
    }
    if (pivot < 0) throw SingularMatrix("matrix is singular");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(m.at(pivot, j), m.at(col, j));
      for (int j = 0; j < aug.cols(); ++j)
        std::swap(aug.at(pivot, j), aug.at(col, j));
      det = -det;
    }
    RationalFunction p = m.at(col, col);
    det = det * p;
    RationalFunction pinv = p.inverse();
    for (int j = 0; j < n; ++j) m.at(col, j) = pinv * m.at(col, j);
    for (int j = 0; j < aug.cols(); ++j)
      aug.at(col, j) = pinv * aug.at(col, j);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      RationalFunction f = m.at(r, col);
      if (f.is_zero()) continue;
      for (int j = 0; j < n; ++j)
        m.at(r, j) = m.at(r, j) - f * m.at(col, j);
      for (int j = 0; j < aug.cols(); ++j)
        aug.at(r, j) = aug.at(r, j) - f * aug.at(col, j);
    }
  }
  return det;
}

}  // namespace detail

// Exact inverse over the rational-function field.
inline TransferMatrix tm_inverse(const TransferMatrix& m) {
  if (!m.is_square()) throw DimensionMismatch("inverse of non-square matrix");
  TransferMatrix work = m;
  TransferMatrix aug = TransferMatrix::identity(m.rows());
  detail::gauss_jordan(work, aug);
  return aug;
}

inline RationalFunction tm_det(const TransferMatrix& m) {
  if (!m.is_square())
    throw DimensionMismatch("determinant of non-square matrix");
  if (m.rows() == 0) return RationalFunction::one();
  TransferMatrix work = m;
  TransferMatrix aug(m.rows(), 0);
  try {
    return detail::gauss_jordan(work, aug);
  } catch (const SingularMatrix&) {
    return RationalFunction::zero();
  }
}

inline bool tm_nonsingular(const TransferMatrix& m) {
  if (!m.is_square()) return false;
  TransferMatrix work = m;
  TransferMatrix aug(m.rows(), 0);
  try {
    detail::gauss_jordan(work, aug);
    return true;
  } catch (const SingularMatrix&) {
    return false;
  }
}

// Gram left-inverse (M^T M)^-1 M^T; X*M = I_cols exactly whenever M has full
// column rank over the field (M^T M singular <=> rank deficiency, since the
// coefficient field is formally real).
inline TransferMatrix tm_left_inverse(const TransferMatrix& m) {
  if (m.rows() < m.cols())
    throw RankDeficient("left inverse needs rows >= cols");
  TransferMatrix mt = tm_transpose(m);
  TransferMatrix gram = tm_mul(mt, m);
  try {
    return tm_mul(tm_inverse(gram), mt);
  } catch (const SingularMatrix&) {
    throw RankDeficient("matrix does not have full column rank");
  }
}

// Solve M X = B exactly (avoids forming M^-1 when only a product is needed).
inline TransferMatrix tm_solve(const TransferMatrix& m,
                               const TransferMatrix& b) {
  if (!m.is_square() || m.rows() != b.rows())
    throw DimensionMismatch("solve shape mismatch");
  TransferMatrix work = m;
  TransferMatrix aug = b;
  detail::gauss_jordan(work, aug);
  return aug;
}

}  // namespace linnet
