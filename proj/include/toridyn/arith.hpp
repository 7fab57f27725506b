#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace toridyn {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

// Thrown on malformed user input (bad job files, invalid fans, ...). CLI maps this to exit 2.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when the geometry is valid but outside what we implement. CLI exit 3.
struct unsupported_geometry : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a configured cap (branch count, flip guard) is exceeded. CLI exit 4.
struct resource_cap : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Internal consistency failure: a checked invariant that should be unreachable.
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

inline void check(bool ok, const char* msg) {
  if (!ok) throw internal_error(msg);
}

inline void check(bool ok, const std::string& msg) {
  if (!ok) throw internal_error(msg);
}

// Like check, but for conditions the caller's input can violate.
inline void require(bool ok, const std::string& msg) {
  if (!ok) throw input_error(msg);
}

inline int sign_of(const Int& x) { return mpz_sgn(x.get_mpz_t()); }
inline int sign_of(const Rat& x) { return mpq_sgn(x.get_mpq_t()); }

inline Int exact_div(const Int& a, const Int& b) {
  check(b != 0 && a % b == 0, "exact_div: not divisible");
  return a / b;
}

inline Int gcd_all(const IntVec& v) {
  Int g = 0;
  for (const Int& x : v) g = gcd(g, x);
  return g;
}

// Scale to a primitive integer vector (gcd 1), preserving direction. Zero stays zero.
inline IntVec primitive(const IntVec& v) {
  Int g = gcd_all(v);
  if (g == 0) return v;
  IntVec out;
  out.reserve(v.size());
  for (const Int& x : v) out.push_back(x / g);
  return out;
}

// Clear denominators of a rational vector into a primitive integer vector, same direction.
inline IntVec primitive(const RatVec& v) {
  Int den = 1;
  for (const Rat& x : v) den = lcm(den, x.get_den());
  IntVec w;
  w.reserve(v.size());
  for (const Rat& x : v) {
    Rat s = x * den;
    s.canonicalize();
    check(s.get_den() == 1, "primitive: denominator not cleared");
    w.push_back(s.get_num());
  }
  return primitive(w);
}

inline bool lex_less(const IntVec& a, const IntVec& b) {
  check(a.size() == b.size(), "lex_less: size mismatch");
  for (size_t i = 0; i < a.size(); ++i) {
    int c = cmp(a[i], b[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

inline bool is_zero(const IntVec& v) {
  for (const Int& x : v) if (x != 0) return false;
  return true;
}

inline IntVec neg(const IntVec& v) {
  IntVec out;
  out.reserve(v.size());
  for (const Int& x : v) out.push_back(-x);
  return out;
}

inline RatVec neg(const RatVec& v) {
  RatVec out;
  out.reserve(v.size());
  for (const Rat& x : v) out.push_back(-x);
  return out;
}

inline Rat dot(const RatVec& a, const RatVec& b) {
  check(a.size() == b.size(), "dot: size mismatch");
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Int dot(const IntVec& a, const IntVec& b) {
  check(a.size() == b.size(), "dot: size mismatch");
  Int s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline RatVec to_rat(const IntVec& v) {
  RatVec out;
  out.reserve(v.size());
  for (const Int& x : v) out.emplace_back(x);
  return out;
}

inline std::string to_string(const Int& x) { return x.get_str(); }

inline std::string to_string(const Rat& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

inline std::string to_string(const IntVec& v) {
  std::string out = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += to_string(v[i]);
  }
  return out + ")";
}

inline std::string to_string(const RatVec& v) {
  std::string out = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += to_string(v[i]);
  }
  return out + ")";
}

inline std::string to_string(const std::vector<int>& v) {
  std::string out = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out + ")";
}

inline Int parse_int(const std::string& s) {
  if (s.empty()) throw input_error("empty integer literal");
  size_t i = (s[0] == '-') ? 1 : 0;
  if (i == s.size()) throw input_error("bad integer literal: " + s);
  for (size_t j = i; j < s.size(); ++j)
    if (s[j] < '0' || s[j] > '9') throw input_error("bad integer literal: " + s);
  // canonical decimal only: no leading zeros, no "+", no "-0"
  if (s[i] == '0' && s.size() - i > 1) throw input_error("bad integer literal: " + s);
  if (i == 1 && s[1] == '0') throw input_error("bad integer literal: " + s);
  return Int(s);
}

// Simplest rational in the open interval (a, b), by Stern-Brocot descent.
// "Simplest" = smallest denominator, ties by smallest numerator magnitude.
inline Rat simplest_rational_between(const Rat& a, const Rat& b) {
  check(a < b, "simplest_rational_between: empty interval");
  // Shift so the interval is positive, recurse on the fractional structure.
  if (b <= 0) return -simplest_rational_between(-b, -a);
  if (a < 0) return Rat(0);
  // Now 0 <= a < b. Integer part: if some integer lies inside, take the smallest.
  Int fl = a.get_num() / a.get_den();  // floor for nonnegative a
  if (Rat(fl + 1) < b) return Rat(fl + 1);
  if (a == Rat(fl)) {
    // Interval (n, b) with b <= n+1: answer n + 1/k for smallest k with n+1/k < b.
    Rat frac = b - Rat(fl);
    // smallest k with 1/k < frac  =>  k = floor(1/frac) + 1
    Rat inv = 1 / frac;
    Int k = inv.get_num() / inv.get_den() + 1;
    return Rat(fl) + Rat(1) / Rat(k);
  }
  // Both endpoints in (fl, fl+1): recurse on reciprocals of the fractional parts.
  Rat ra = a - Rat(fl), rb = b - Rat(fl);
  return Rat(fl) + 1 / simplest_rational_between(1 / rb, 1 / ra);
}

}  // namespace toridyn
