#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "linnet/transfer_matrix.hpp"

namespace linnet {

inline constexpr double kPoleTolerance = 1e-12;
inline constexpr double kRankRelTolerance = 1e-8;
inline constexpr double kStabilityMargin = 1e-9;

// Unit-circle evaluation points. The default layout omega = pi(2k+1)/(2n)
// avoids 0 and pi, where real-axis pole coincidences are likelier.
struct FrequencyGrid {
  std::vector<std::complex<double>> points;

  static FrequencyGrid standard(int n = 32) {
    FrequencyGrid g;
    g.points.reserve(n);
    for (int k = 0; k < n; ++k) {
      double w = std::numbers::pi * (2.0 * k + 1.0) / (2.0 * n);
      g.points.emplace_back(std::cos(w), std::sin(w));
    }
    return g;
  }

  FrequencyGrid rotated(double phase) const {
    FrequencyGrid g;
    g.points.reserve(points.size());
    std::complex<double> rot(std::cos(phase), std::sin(phase));
    for (const auto& p : points) g.points.push_back(p * rot);
    return g;
  }

  static FrequencyGrid random_points(int n, std::mt19937& rng) {
    FrequencyGrid g;
    std::uniform_real_distribution<double> dist(0.0, 2.0 * std::numbers::pi);
    for (int k = 0; k < n; ++k) {
      double w = dist(rng);
      g.points.emplace_back(std::cos(w), std::sin(w));
    }
    return g;
  }
};

// Entry evaluation with q^-1 |-> z^-1.
inline std::complex<double> eval_at(const RationalFunction& f,
                                    const std::complex<double>& z) {
  if (std::abs(z) < kPoleTolerance) throw PoleAtPoint("evaluation at z = 0");
  std::complex<double> x = 1.0 / z;
  std::complex<double> d = f.den().eval(x);
  if (std::abs(d) < kPoleTolerance)
    throw PoleAtPoint("denominator vanishes at evaluation point");
  return f.num().eval(x) / d;
}

inline Eigen::MatrixXcd eval_at(const TransferMatrix& m,
                                const std::complex<double>& z) {
  Eigen::MatrixXcd r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = eval_at(m.at(i, j), z);
  return r;
}

inline int numeric_rank(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > kRankRelTolerance * sv(0)) ++rank;
  return rank;
}

// Maximum numeric rank over the grid: the generic rank of the rational
// matrix with probability 1 under random points.
inline int rank_at(const TransferMatrix& m, const FrequencyGrid& grid) {
  int best = 0;
  for (const auto& z : grid.points)
    best = std::max(best, numeric_rank(eval_at(m, z)));
  return best;
}

inline bool is_proper(const RationalFunction& f) { return f.is_proper(); }

// Poles in q are the roots of q^m * den(1/q); stable <=> all strictly inside
// the unit circle with margin. Non-proper functions lose q-roots to infinity
// here on purpose: properness is a separate test.
inline bool is_stable(const RationalFunction& f) {
  const Polynomial& d = f.den();
  int m = d.degree();
  std::vector<double> rev;  // coefficient of q^j is den coeff m-j
  rev.reserve(m + 1);
  for (int j = 0; j <= m; ++j) rev.push_back(d.coeff(m - j).get_d());
  while (!rev.empty() && rev.back() == 0.0) rev.pop_back();
  int deg = static_cast<int>(rev.size()) - 1;
  if (deg <= 0) return true;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -rev[i] / rev[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  for (int i = 0; i < deg; ++i)
    if (std::abs(es.eigenvalues()(i)) >= 1.0 - kStabilityMargin) return false;
  return true;
}

}  // namespace linnet
