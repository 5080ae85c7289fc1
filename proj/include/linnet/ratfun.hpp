#pragma once

#include <string>
#include <utility>

#include "linnet/polynomial.hpp"

namespace linnet {

// Degree ceiling for canonical numerators/denominators. Repeated inversion
// grows degrees without bound; hitting the ceiling aborts loudly instead of
// silently degrading.
inline int& degree_limit() {
  static int limit = 64;
  return limit;
}

// Ratio of polynomials in x = q^-1. Canonical form:
//   - den nonzero, gcd(num, den) constant,
//   - den's lowest-index nonzero coefficient equals 1,
//   - zero is 0/1.
// Canonical form is unique, so operator== is structural.
class RationalFunction {
 public:
  RationalFunction() : num_(), den_(Polynomial::one()) {}
  RationalFunction(Polynomial num, Polynomial den)
      : num_(std::move(num)), den_(std::move(den)) {
    canonicalize();
  }
  // Constant c/1.
  explicit RationalFunction(const Rat& c)
      : num_(Polynomial::constant(c)), den_(Polynomial::one()) {
    canonicalize();
  }

  static RationalFunction zero() { return RationalFunction(); }
  static RationalFunction one() { return RationalFunction(Rat(1)); }
  static RationalFunction constant(const Rat& c) {
    return RationalFunction(c);
  }
  // c * x^k (a delayed gain), the building block of most fixtures.
  static RationalFunction delay_term(const Rat& c, int k = 1) {
    return RationalFunction(Polynomial::monomial(c, k), Polynomial::one());
  }

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_ == den_; }

  // proper <=> den(0) != 0: the function has no pole at q = infinity.
  bool is_proper() const { return den_.coeff(0) != 0; }

  // Sums and products strip shared factors before multiplying out
  // (Henrici's scheme); operands are canonical, so the result is already
  // fully reduced and skips the closing gcd.
  friend RationalFunction operator+(const RationalFunction& a,
                                    const RationalFunction& b) {
    return add_impl(a, b, false);
  }
  friend RationalFunction operator-(const RationalFunction& a,
                                    const RationalFunction& b) {
    return add_impl(a, b, true);
  }
  friend RationalFunction operator-(const RationalFunction& a) {
    RationalFunction r = a;
    r.num_ = -r.num_;
    return r;
  }
  friend RationalFunction operator*(const RationalFunction& a,
                                    const RationalFunction& b) {
    if (a.is_zero() || b.is_zero()) return zero();
    Polynomial an = a.num_, bd = b.den_;
    strip_common(an, bd);
    Polynomial bn = b.num_, ad = a.den_;
    strip_common(bn, ad);
    return RationalFunction(an * bn, ad * bd, reduced_tag{});
  }
  friend RationalFunction operator/(const RationalFunction& a,
                                    const RationalFunction& b) {
    return a * b.inverse();
  }
  RationalFunction inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of the zero function");
    return RationalFunction(den_, num_, reduced_tag{});
  }
  friend bool operator==(const RationalFunction& a,
                         const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RationalFunction& a,
                         const RationalFunction& b) {
    return !(a == b);
  }

  // "num / den" with coefficient lists low-to-high, for diagnostics.
  std::string str() const {
    auto poly = [](const Polynomial& p) {
      if (p.is_zero()) return std::string("0");
      std::string s = "[";
      for (size_t k = 0; k < p.coeffs().size(); ++k) {
        if (k) s += ", ";
        s += rat_to_string(p.coeffs()[k]);
      }
      return s + "]";
    };
    return poly(num_) + " / " + poly(den_);
  }

 private:
  struct reduced_tag {};
  // Caller guarantees gcd(num, den) is constant; only scale and bound-check.
  RationalFunction(Polynomial num, Polynomial den, reduced_tag)
      : num_(std::move(num)), den_(std::move(den)) {
    finalize();
  }

  void canonicalize() {
    if (!den_.is_zero() && !num_.is_zero() && num_.degree() > 0 &&
        den_.degree() > 0) {
      Polynomial g = Polynomial::gcd(num_, den_);
      if (g.degree() > 0) {
        num_ = Polynomial::divrem(num_, g).first;
        den_ = Polynomial::divrem(den_, g).first;
      }
    }
    finalize();
  }

  void finalize() {
    if (den_.is_zero()) throw DivisionByZero("zero denominator");
    if (num_.is_zero()) {
      den_ = Polynomial::one();
      return;
    }
    Rat scale = den_.coeff(static_cast<size_t>(den_.low_index()));
    if (scale != 1) {
      Rat inv = Rat(1) / scale;
      num_ = inv * num_;
      den_ = inv * den_;
    }
    if (num_.degree() > degree_limit() || den_.degree() > degree_limit())
      throw DegreeOverflow("rational function degree exceeds ceiling");
  }

  // Divide the shared factor out of both arguments.
  static void strip_common(Polynomial& a, Polynomial& b) {
    if (a.degree() <= 0 || b.degree() <= 0) return;
    Polynomial g = Polynomial::gcd(a, b);
    if (g.degree() > 0) {
      a = Polynomial::divrem(a, g).first;
      b = Polynomial::divrem(b, g).first;
    }
  }

  static RationalFunction add_impl(const RationalFunction& a,
                                   const RationalFunction& b, bool subtract) {
    if (a.is_zero()) return subtract ? -b : b;
    if (b.is_zero()) return a;
    Polynomial g = Polynomial::gcd(a.den_, b.den_);
    if (g.degree() <= 0) {
      // Coprime denominators: the sum is already reduced.
      Polynomial num = subtract ? a.num_ * b.den_ - b.num_ * a.den_
                                : a.num_ * b.den_ + b.num_ * a.den_;
      return RationalFunction(std::move(num), a.den_ * b.den_, reduced_tag{});
    }
    Polynomial ad = Polynomial::divrem(a.den_, g).first;
    Polynomial bd = Polynomial::divrem(b.den_, g).first;
    Polynomial num =
        subtract ? a.num_ * bd - b.num_ * ad : a.num_ * bd + b.num_ * ad;
    Polynomial den = ad * b.den_;
    // Any residual common factor of num and den divides g.
    Polynomial h = Polynomial::gcd(num, g);
    if (h.degree() > 0) {
      num = Polynomial::divrem(num, h).first;
      den = Polynomial::divrem(den, h).first;
    }
    return RationalFunction(std::move(num), std::move(den), reduced_tag{});
  }

  Polynomial num_;
  Polynomial den_;
};

inline RationalFunction rf_add(const RationalFunction& a,
                               const RationalFunction& b) {
  return a + b;
}
inline RationalFunction rf_mul(const RationalFunction& a,
                               const RationalFunction& b) {
  return a * b;
}
inline RationalFunction rf_inv(const RationalFunction& a) {
  return a.inverse();
}

}  // namespace linnet
