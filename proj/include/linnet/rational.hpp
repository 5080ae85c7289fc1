#pragma once

#include <gmpxx.h>

#include <string>

#include "linnet/errors.hpp"

namespace linnet {

// Exact rational scalar. mpq_class keeps values canonical (reduced,
// positive denominator) as long as canonicalize() runs after raw sets.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
  if (den == 0) throw DivisionByZero("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// Accepts "p", "-p", "p/q" with optional sign; base 10.
inline Rat rat_from_string(const std::string& s) {
  Rat r;
  if (s.empty() || mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0)
    throw ParseError("bad rational literal: '" + s + "'");
  if (r.get_den() == 0)
    throw ParseError("zero denominator in rational literal: '" + s + "'");
  r.canonicalize();
  return r;
}

inline std::string rat_to_string(const Rat& r) { return r.get_str(); }

}  // namespace linnet
