#pragma once

#include <complex>
#include <initializer_list>
#include <utility>
#include <vector>

#include "linnet/rational.hpp"

namespace linnet {

// Polynomial in the delay variable x := q^-1, coefficient k on x^k.
// Canonical form: highest stored coefficient nonzero, or empty for zero.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rat> coeffs) : c_(std::move(coeffs)) {
    trim();
  }
  Polynomial(std::initializer_list<Rat> coeffs)
      : c_(coeffs.begin(), coeffs.end()) {
    trim();
  }

  static Polynomial zero() { return Polynomial(); }
  static Polynomial constant(const Rat& v) { return Polynomial({v}); }
  static Polynomial one() { return constant(Rat(1)); }
  // c * x^k
  static Polynomial monomial(const Rat& coeff, int k) {
    std::vector<Rat> v(static_cast<size_t>(k) + 1, Rat(0));
    v.back() = coeff;
    return Polynomial(std::move(v));
  }

  const std::vector<Rat>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  // Degree of zero is -1 by convention.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Rat coeff(size_t k) const { return k < c_.size() ? c_[k] : Rat(0); }
  const Rat& leading() const { return c_.back(); }
  // Index of the lowest nonzero coefficient; -1 for zero.
  int low_index() const {
    for (size_t k = 0; k < c_.size(); ++k)
      if (c_[k] != 0) return static_cast<int>(k);
    return -1;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Rat> r(std::max(a.c_.size(), b.c_.size()), Rat(0));
    for (size_t k = 0; k < a.c_.size(); ++k) r[k] += a.c_[k];
    for (size_t k = 0; k < b.c_.size(); ++k) r[k] += b.c_[k];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<Rat> r(std::max(a.c_.size(), b.c_.size()), Rat(0));
    for (size_t k = 0; k < a.c_.size(); ++k) r[k] += a.c_[k];
    for (size_t k = 0; k < b.c_.size(); ++k) r[k] -= b.c_[k];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a) {
    std::vector<Rat> r(a.c_);
    for (auto& v : r) v = -v;
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    std::vector<Rat> r(a.c_.size() + b.c_.size() - 1, Rat(0));
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(const Rat& s, const Polynomial& a) {
    if (s == 0) return Polynomial();
    std::vector<Rat> r(a.c_);
    for (auto& v : r) v *= s;
    return Polynomial(std::move(r));
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.c_ == b.c_;
  }

  // Euclidean division a = q*b + r, deg r < deg b. b must be nonzero.
  static std::pair<Polynomial, Polynomial> divrem(const Polynomial& a,
                                                  const Polynomial& b) {
    if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
    std::vector<Rat> rem(a.c_);
    int db = b.degree();
    if (a.degree() < db) return {Polynomial(), a};
    std::vector<Rat> quo(a.c_.size() - b.c_.size() + 1, Rat(0));
    for (int k = static_cast<int>(rem.size()) - 1; k >= db; --k) {
      if (rem[k] == 0) continue;
      Rat f = rem[k] / b.leading();
      quo[k - db] = f;
      for (int j = 0; j <= db; ++j) rem[k - db + j] -= f * b.c_[j];
    }
    return {Polynomial(std::move(quo)), Polynomial(std::move(rem))};
  }

  // Monic gcd (leading coefficient 1); gcd(0,0) = 0.
  // Runs a primitive pseudo-remainder sequence over the integers so that
  // intermediate coefficients stay small; a plain Euclidean chain over the
  // rationals blows up exponentially on coprime inputs of moderate degree.
  static Polynomial gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero()) return monic_copy(b);
    if (b.is_zero()) return monic_copy(a);
    std::vector<mpz_class> u = primitive_integer(a.c_);
    std::vector<mpz_class> v = primitive_integer(b.c_);
    if (u.size() < v.size()) std::swap(u, v);
    while (v.size() > 1) {
      pseudo_remainder(u, v);
      if (u.empty()) break;
      strip_content(u);
      std::swap(u, v);
    }
    if (!u.empty() && v.size() == 1) return one();  // constant divisor
    std::vector<Rat> g(v.size());
    for (size_t k = 0; k < v.size(); ++k) {
      Rat r(v[k], v.back());
      r.canonicalize();
      g[k] = std::move(r);
    }
    return Polynomial(std::move(g));
  }

  std::complex<double> eval(const std::complex<double>& x) const {
    std::complex<double> acc(0.0, 0.0);
    for (size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k].get_d();
    return acc;
  }

 private:
  // Raw mpq_class(p, q) literals arrive unreduced and would break value
  // comparisons downstream, so every stored coefficient is canonicalized.
  void trim() {
    for (auto& v : c_) v.canonicalize();
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  static Polynomial monic_copy(const Polynomial& p) {
    if (p.is_zero() || p.leading() == 1) return p;
    return (Rat(1) / p.leading()) * p;
  }

  // Clear denominators and divide out the integer content.
  static std::vector<mpz_class> primitive_integer(const std::vector<Rat>& c) {
    mpz_class scale(1);
    for (const auto& r : c) scale = lcm(scale, r.get_den());
    std::vector<mpz_class> out(c.size());
    for (size_t k = 0; k < c.size(); ++k)
      out[k] = c[k].get_num() * (scale / c[k].get_den());
    strip_content(out);
    return out;
  }

  static void strip_content(std::vector<mpz_class>& u) {
    mpz_class g(0);
    for (const auto& x : u) g = ::gcd(g, x);
    if (u.empty() || g == 1) return;
    if (sgn(u.back()) < 0) g = -g;  // keep the leading coefficient positive
    for (auto& x : u)
      mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  }

  // u := pseudo-remainder of u by v (deg v >= 1), up to a harmless integer
  // factor that the next content strip removes.
  static void pseudo_remainder(std::vector<mpz_class>& u,
                               const std::vector<mpz_class>& v) {
    const size_t dv = v.size() - 1;
    while (u.size() > dv) {
      const mpz_class c = u.back();
      const size_t shift = u.size() - 1 - dv;
      for (auto& x : u) x *= v.back();
      for (size_t j = 0; j <= dv; ++j) u[shift + j] -= c * v[j];
      while (!u.empty() && u.back() == 0) u.pop_back();
    }
  }

  std::vector<Rat> c_;
};

}  // namespace linnet
