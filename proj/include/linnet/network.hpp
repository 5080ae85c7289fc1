#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "linnet/numeric.hpp"
#include "linnet/transfer_matrix.hpp"

namespace linnet {

// Noise description: filtered white noise v = F e with covariance
// cov(e) = Lambda. Original models carry a monic square filter; models
// produced by transformations carry an arbitrary product and leave the
// spectrum unfactorized, signalled by monic_flag = false.
struct NoiseRep {
  TransferMatrix F;       // L x p filter
  TransferMatrix Lambda;  // p x p constant symmetric covariance
  bool monic_flag = true;

  static NoiseRep white(int n) {
    return NoiseRep{TransferMatrix::identity(n), TransferMatrix::identity(n),
                    true};
  }
  int channels() const { return F.cols(); }
};

// Node selection w_kept = C w; kept holds distinct 1-based node indices in
// the order the reduced model lists them.
struct SelectionMatrix {
  std::vector<int> kept;

  TransferMatrix to_matrix(int L) const {
    TransferMatrix c(static_cast<int>(kept.size()), L);
    for (size_t r = 0; r < kept.size(); ++r) {
      int k = kept[r];
      if (k < 1 || k > L) throw DimensionMismatch("selection index range");
      c.at(static_cast<int>(r), k - 1) = RationalFunction::one();
    }
    return c;
  }
  std::vector<int> zero_based() const {
    std::vector<int> out;
    out.reserve(kept.size());
    for (int k : kept) out.push_back(k - 1);
    return out;
  }
};

// w = G w + R r + F e with cov(e) = Lambda.
struct NetworkModel {
  int L = 0;  // node count
  int K = 0;  // external input count
  TransferMatrix G;  // L x L, zero diagonal
  TransferMatrix R;  // L x K
  NoiseRep noise;
  std::vector<std::string> node_labels;    // size L or empty
  std::vector<std::string> signal_labels;  // size K or empty
};

struct ValidationReport {
  bool hollow = false;
  bool well_posed = false;
  bool response_proper = false;
  bool response_stable = false;
  bool noise_valid = false;
  bool lambda_positive = false;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

namespace detail {

inline TransferMatrix loop_matrix(const NetworkModel& m) {
  return tm_sub(TransferMatrix::identity(m.L), m.G);
}

// True iff every entry is a constant (numerator degree <= 0, denominator 1).
inline bool is_constant_matrix(const TransferMatrix& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const RationalFunction& v = m.at(i, j);
      if (v.num().degree() > 0 || !(v.den() == Polynomial::one()))
        return false;
    }
  return true;
}

inline bool matrix_proper(const TransferMatrix& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (!m.at(i, j).is_proper()) return false;
  return true;
}

inline bool matrix_stable(const TransferMatrix& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (!is_stable(m.at(i, j))) return false;
  return true;
}

// Value at q = infinity (delay variable x = 0); requires properness.
inline Rat value_at_infinity(const RationalFunction& f) {
  return f.num().coeff(0) / f.den().coeff(0);
}

}  // namespace detail

inline void check_model_dimensions(const NetworkModel& m) {
  if (m.G.rows() != m.L || m.G.cols() != m.L)
    throw DimensionMismatch("G must be L x L");
  if (m.R.rows() != m.L || m.R.cols() != m.K)
    throw DimensionMismatch("R must be L x K");
  if (m.noise.F.rows() != m.L)
    throw DimensionMismatch("noise filter must have L rows");
  if (m.noise.Lambda.rows() != m.noise.F.cols() ||
      m.noise.Lambda.cols() != m.noise.F.cols())
    throw DimensionMismatch("covariance must be square over noise channels");
}

// Checks each defining clause of a network model and reports all failures.
inline ValidationReport validate_model(const NetworkModel& m) {
  check_model_dimensions(m);
  ValidationReport rep;
  auto fail = [&rep](const std::string& msg) { rep.failures.push_back(msg); };

  rep.hollow = m.G.is_hollow();
  if (!rep.hollow) fail("module matrix has a nonzero diagonal entry");

  TransferMatrix loop = detail::loop_matrix(m);
  rep.well_posed = tm_nonsingular(loop);
  if (!rep.well_posed) fail("I - G is singular as a rational matrix");

  if (rep.well_posed) {
    TransferMatrix t_wr = tm_solve(loop, m.R);
    rep.response_proper = detail::matrix_proper(t_wr);
    rep.response_stable = detail::matrix_stable(t_wr);
    if (!rep.response_proper) fail("closed-loop response is not proper");
    if (!rep.response_stable) fail("closed-loop response is not stable");
  } else {
    fail("closed-loop response undefined");
  }

  rep.noise_valid = true;
  if (m.noise.monic_flag) {
    const TransferMatrix& f = m.noise.F;
    if (!f.is_square()) {
      rep.noise_valid = false;
      fail("monic noise filter must be square");
    } else if (!detail::matrix_proper(f)) {
      rep.noise_valid = false;
      fail("noise filter is not proper");
    } else {
      for (int i = 0; i < f.rows() && rep.noise_valid; ++i)
        for (int j = 0; j < f.cols() && rep.noise_valid; ++j) {
          Rat v = detail::value_at_infinity(f.at(i, j));
          if (v != (i == j ? Rat(1) : Rat(0))) {
            rep.noise_valid = false;
            fail("noise filter is not monic");
          }
        }
      if (rep.noise_valid && !detail::matrix_stable(f)) {
        rep.noise_valid = false;
        fail("noise filter is not stable");
      }
      if (rep.noise_valid) {
        try {
          if (!detail::matrix_stable(tm_inverse(f))) {
            rep.noise_valid = false;
            fail("noise filter is not stably invertible");
          }
        } catch (const SingularMatrix&) {
          rep.noise_valid = false;
          fail("noise filter is singular");
        }
      }
    }
  }

  const TransferMatrix& lam = m.noise.Lambda;
  rep.lambda_positive = detail::is_constant_matrix(lam);
  if (!rep.lambda_positive) {
    fail("covariance must be a constant matrix");
  } else {
    if (!(tm_transpose(lam) == lam)) {
      rep.lambda_positive = false;
      fail("covariance is not symmetric");
    } else {
      // Positive definiteness via leading principal minors, exactly.
      std::vector<int> idx;
      for (int k = 0; k < lam.rows() && rep.lambda_positive; ++k) {
        idx.push_back(k);
        RationalFunction minor = tm_det(tm_select(lam, idx, idx));
        if (minor.num().coeff(0) <= 0) {
          rep.lambda_positive = false;
          fail("covariance is not positive definite");
        }
      }
    }
  }

  return rep;
}

// Exact maps from external inputs and from noise channels to the nodes:
// T_wr = (I-G)^-1 R and T_we = (I-G)^-1 F.
inline std::pair<TransferMatrix, TransferMatrix> open_loop_response(
    const NetworkModel& m) {
  check_model_dimensions(m);
  TransferMatrix loop = detail::loop_matrix(m);
  TransferMatrix inv = tm_inverse(loop);
  return {tm_mul(inv, m.R), tm_mul(inv, m.noise.F)};
}

namespace detail {

// Numeric solve (I - G)(z) X = rhs(z); throws PoleAtPoint when the loop
// matrix is (numerically) singular at z.
inline Eigen::MatrixXcd response_at(const NetworkModel& m,
                                    const std::complex<double>& z,
                                    const TransferMatrix& rhs) {
  Eigen::MatrixXcd a = eval_at(loop_matrix(m), z);
  Eigen::MatrixXcd b = eval_at(rhs, z);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
  if (!lu.isInvertible())
    throw PoleAtPoint("loop matrix singular at evaluation point");
  return lu.solve(b);
}

inline Eigen::MatrixXd lambda_numeric(const NoiseRep& n) {
  Eigen::MatrixXd lam(n.Lambda.rows(), n.Lambda.cols());
  for (int i = 0; i < n.Lambda.rows(); ++i)
    for (int j = 0; j < n.Lambda.cols(); ++j)
      lam(i, j) = n.Lambda.at(i, j).num().coeff(0).get_d() /
                  n.Lambda.at(i, j).den().coeff(0).get_d();
  return lam;
}

inline Eigen::MatrixXcd spectrum_at(const NetworkModel& m,
                                    const std::complex<double>& z) {
  Eigen::MatrixXcd e = response_at(m, z, m.noise.F);
  return e * lambda_numeric(m.noise).cast<std::complex<double>>() *
         e.adjoint();
}

inline double max_abs(const Eigen::MatrixXcd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace detail

// Noise power spectrum at angular frequency omega.
inline Eigen::MatrixXcd noise_spectrum_at(const NetworkModel& m,
                                          double omega) {
  check_model_dimensions(m);
  return detail::spectrum_at(
      m, std::exp(std::complex<double>(0.0, 1.0) * omega));
}

namespace detail {

// Runs `probe` over the grid; on a pole hit, retries on a deterministically
// rotated grid so isolated unit-circle poles cannot abort a whole check.
template <typename Probe>
bool with_grid_retries(const FrequencyGrid& grid, Probe&& probe) {
  FrequencyGrid g = grid;
  for (int attempt = 0;; ++attempt) {
    try {
      return probe(g);
    } catch (const PoleAtPoint&) {
      if (attempt >= 3) throw;
      g = grid.rotated(0.0721843 * (attempt + 1));
    }
  }
}

}  // namespace detail

// External responses and noise spectra agree at every grid point.
inline bool check_equivalence(const NetworkModel& m1, const NetworkModel& m2,
                              const FrequencyGrid& grid =
                                  FrequencyGrid::standard(),
                              double tol = 1e-9) {
  check_model_dimensions(m1);
  check_model_dimensions(m2);
  if (m1.L != m2.L || m1.K != m2.K)
    throw DimensionMismatch("models must share node and input counts");
  return detail::with_grid_retries(grid, [&](const FrequencyGrid& g) {
    for (const auto& z : g.points) {
      Eigen::MatrixXcd t1 = detail::response_at(m1, z, m1.R);
      Eigen::MatrixXcd t2 = detail::response_at(m2, z, m2.R);
      if (detail::max_abs(t1 - t2) >= tol) return false;
      Eigen::MatrixXcd p1 = detail::spectrum_at(m1, z);
      Eigen::MatrixXcd p2 = detail::spectrum_at(m2, z);
      if (detail::max_abs(p1 - p2) >= tol) return false;
    }
    return true;
  });
}

// Reduced model m2 reproduces the kept rows of m1's response and the kept
// block of its noise spectrum at every grid point.
inline bool check_abstraction(const NetworkModel& m1, const NetworkModel& m2,
                              const SelectionMatrix& c,
                              const FrequencyGrid& grid =
                                  FrequencyGrid::standard(),
                              double tol = 1e-9) {
  check_model_dimensions(m1);
  check_model_dimensions(m2);
  if (static_cast<int>(c.kept.size()) != m2.L)
    throw DimensionMismatch("selection size must match the reduced model");
  if (m2.L > m1.L || m1.K != m2.K)
    throw DimensionMismatch("selection must map the larger model onto the "
                            "smaller one");
  std::vector<int> rows = c.zero_based();
  for (int r : rows)
    if (r < 0 || r >= m1.L) throw DimensionMismatch("selection index range");
  return detail::with_grid_retries(grid, [&](const FrequencyGrid& g) {
    for (const auto& z : g.points) {
      Eigen::MatrixXcd t1 = detail::response_at(m1, z, m1.R);
      Eigen::MatrixXcd t2 = detail::response_at(m2, z, m2.R);
      Eigen::MatrixXcd p1 = detail::spectrum_at(m1, z);
      Eigen::MatrixXcd p2 = detail::spectrum_at(m2, z);
      for (int r = 0; r < m2.L; ++r)
        for (int k = 0; k < m1.K; ++k)
          if (std::abs(t2(r, k) - t1(rows[r], k)) >= tol) return false;
      for (int r = 0; r < m2.L; ++r)
        for (int s = 0; s < m2.L; ++s)
          if (std::abs(p2(r, s) - p1(rows[r], rows[s])) >= tol) return false;
    }
    return true;
  });
}

// Exact rational-function comparison of external responses; the grid checks
// above certify the spectrum side, this pins T_wr symbolically.
inline bool equal_response_exact(const NetworkModel& m1,
                                 const NetworkModel& m2) {
  if (m1.L != m2.L || m1.K != m2.K)
    throw DimensionMismatch("models must share node and input counts");
  TransferMatrix t1 = tm_solve(detail::loop_matrix(m1), m1.R);
  TransferMatrix t2 = tm_solve(detail::loop_matrix(m2), m2.R);
  return t1 == t2;
}

}  // namespace linnet
