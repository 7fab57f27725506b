#pragma once

#include <string>
#include <utility>
#include <vector>

#include "toridyn/factor.hpp"
#include "toridyn/realroots.hpp"

namespace toridyn {

// A real algebraic number: primitive irreducible minimal polynomial with
// positive leading coefficient, plus an isolating interval with rational
// non-root endpoints. Rational numbers carry the degenerate interval [q, q].
class AlgebraicNumber {
 public:
  static AlgebraicNumber rational(const Rat& q) {
    AlgebraicNumber a;
    Int den = q.get_den(), num = q.get_num();
    a.m_ = IntPoly{IntVec{-num, den}};
    a.lo_ = a.hi_ = q;
    return a;
  }

  // The unique root of irreducible m inside (lo, hi).
  static AlgebraicNumber root_of(const IntPoly& m, const Rat& lo, const Rat& hi) {
    check(m.degree() >= 1, "root_of: constant polynomial");
    if (m.degree() == 1) return rational(Rat(-m.c[0]) / Rat(m.c[1]));
    AlgebraicNumber a;
    a.m_ = primitive_part(m);
    check(eval(a.m_, lo) != 0 && eval(a.m_, hi) != 0, "root_of: root at endpoint");
    check(count_distinct_real_roots_open(a.m_, lo, hi) == 1, "root_of: interval not isolating");
    a.lo_ = lo;
    a.hi_ = hi;
    return a;
  }

  const IntPoly& minimal_polynomial() const { return m_; }
  int degree() const { return m_.degree(); }
  bool is_rational() const { return m_.degree() == 1; }

  Rat rational_value() const {
    check(is_rational(), "rational_value: irrational");
    return lo_;
  }

  Rat lower() const { return lo_; }
  Rat upper() const { return hi_; }

  void refine_to(const Rat& width) const {
    if (is_rational()) return;
    RootInterval iv = refine_interval(m_, {lo_, hi_}, width);
    lo_ = iv.lo;
    hi_ = iv.hi;
  }

  void refine_once() const {
    if (!is_rational()) refine_to((hi_ - lo_) / 2);
  }

  int sign() const {
    if (is_rational()) return sign_of(lo_);
    while (lo_ < 0 && hi_ > 0) refine_once();
    return lo_ >= 0 ? 1 : -1;
  }

  int compare(const AlgebraicNumber& o) const {
    if (is_rational() && o.is_rational()) {
      Rat a = lo_, b = o.lo_;
      return a < b ? -1 : (a > b ? 1 : 0);
    }
    if (is_rational()) return -o.compare_rational(lo_);
    if (o.is_rational()) return compare_rational(o.lo_);
    if (m_ == o.m_) return compare_same_minpoly(o);
    // distinct minimal polynomials, hence distinct values
    for (;;) {
      if (hi_ <= o.lo_) return -1;
      if (o.hi_ <= lo_) return 1;
      refine_once();
      o.refine_once();
    }
  }

  bool operator==(const AlgebraicNumber& o) const { return compare(o) == 0; }
  bool operator<(const AlgebraicNumber& o) const { return compare(o) < 0; }
  bool operator<=(const AlgebraicNumber& o) const { return compare(o) <= 0; }
  bool operator>(const AlgebraicNumber& o) const { return compare(o) > 0; }
  bool operator>=(const AlgebraicNumber& o) const { return compare(o) >= 0; }

  // sign of (this - q)
  int compare_rational(const Rat& q) const {
    if (is_rational()) {
      Rat a = lo_;
      return a < q ? -1 : (a > q ? 1 : 0);
    }
    check(eval(m_, q) != 0, "compare_rational: minimal polynomial vanished");
    while (lo_ < q && q < hi_) refine_once();
    return hi_ <= q ? -1 : 1;
  }

  AlgebraicNumber negated() const {
    if (is_rational()) return rational(-lo_);
    IntPoly mneg = primitive_part(negate_variable(m_));
    AlgebraicNumber a;
    a.m_ = mneg;
    a.lo_ = -hi_;
    a.hi_ = -lo_;
    return a;
  }

  AlgebraicNumber abs() const { return sign() >= 0 ? *this : negated(); }

  AlgebraicNumber pow(int k) const;

  // Decimal expansion with exactly `digits` fractional digits, rounded to
  // nearest (ties away from zero). Deterministic.
  std::string decimal(int digits) const {
    if (is_rational()) return decimal_of_rational(lo_, digits);
    for (;;) {
      std::string a = decimal_of_rational(lo_, digits);
      std::string b = decimal_of_rational(hi_, digits);
      if (a == b) return a;
      refine_once();
    }
  }

 private:
  AlgebraicNumber() = default;

  int compare_same_minpoly(const AlgebraicNumber& o) const {
    if (hi_ <= o.lo_) return -1;
    if (o.hi_ <= lo_) return 1;
    Rat m1 = std::max(lo_, o.lo_), m2 = std::min(hi_, o.hi_);
    if (count_distinct_real_roots_open(m_, m1, m2) >= 1) {
      // the overlap root lies in both isolating intervals, so it is both values
      return 0;
    }
    // roots sit on opposite sides of the overlap
    bool mine_left = lo_ < m1 && count_distinct_real_roots_open(m_, lo_, m1) == 1;
    return mine_left ? -1 : 1;
  }

  static std::string decimal_of_rational(const Rat& q, int digits) {
    Int num = q.get_num(), den = q.get_den();
    bool negative = num < 0;
    if (negative) num = -num;
    Int scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    Int scaled = num * scale;
    Int quo, rem;
    mpz_fdiv_qr(quo.get_mpz_t(), rem.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
    if (2 * rem >= den) quo += 1;
    Int ip = quo / scale, fp = quo % scale;
    std::string frac = fp.get_str();
    frac.insert(frac.begin(), digits - frac.size(), '0');
    std::string s = ip.get_str() + "." + frac;
    if (negative && (ip != 0 || fp != 0)) s = "-" + s;
    return s;
  }

  IntPoly m_;
  mutable Rat lo_, hi_;
};

namespace detail {

// u, v with u^2 <= x <= v^2 and v - u <= eps (x >= 0)
inline std::pair<Rat, Rat> rational_sqrt_bounds(const Rat& x, const Rat& eps) {
  check(x >= 0, "rational_sqrt_bounds: negative input");
  check(eps > 0, "rational_sqrt_bounds: eps must be positive");
  Rat lo = 0, hi = x < 1 ? Rat(1) : x;
  while (hi - lo > eps) {
    Rat mid = (lo + hi) / 2;
    if (mid * mid <= x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

// The unique value lying in every interval produced by `current`, known to be
// a root of exactly one candidate. `refine` tightens the interval.
template <typename Current, typename Refine>
AlgebraicNumber select_unique_root(const std::vector<IntPoly>& candidates, Current current,
                                   Refine refine) {
  for (;;) {
    auto [plo, phi] = current();
    if (plo < phi) {
      bool clean = true;
      int total = 0;
      const IntPoly* owner = nullptr;
      for (const IntPoly& f : candidates) {
        if (eval(f, plo) == 0 || eval(f, phi) == 0) {
          clean = false;
          break;
        }
        int c = count_distinct_real_roots_open(f, plo, phi);
        total += c;
        if (c >= 1 && owner == nullptr) owner = &f;
      }
      if (clean && total == 1) return AlgebraicNumber::root_of(*owner, plo, phi);
    }
    refine();
  }
}

}  // namespace detail

inline AlgebraicNumber AlgebraicNumber::pow(int k) const {
  check(k >= 0, "pow: negative exponent");
  if (k == 0) return rational(Rat(1));
  if (k == 1) return *this;
  if (is_rational()) {
    Rat r = 1;
    for (int i = 0; i < k; ++i) r *= lo_;
    return rational(r);
  }
  sign();  // make the interval sign-definite so powering is monotone
  IntPoly P = squarefree_part(root_power_poly(m_, k));
  std::vector<IntPoly> cands = factor_squarefree(P);
  auto current = [&]() {
    Rat a = 1, b = 1;
    for (int i = 0; i < k; ++i) {
      a *= lo_;
      b *= hi_;
    }
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  };
  auto refine = [&]() { refine_once(); };
  return detail::select_unique_root(cands, current, refine);
}

// Largest root modulus of p as an exact algebraic number. For the zero set
// {0} this is 0; p must be nonconstant.
inline AlgebraicNumber dominant_root(const IntPoly& p) {
  check(p.degree() >= 1, "dominant_root: constant polynomial");
  IntPoly g = squarefree_part(p);
  while (g.coeff(0) == 0) {
    IntVec c(g.c.begin() + 1, g.c.end());
    g = IntPoly(std::move(c));
  }
  if (g.degree() == 0) return AlgebraicNumber::rational(Rat(0));

  // H's real roots are the pairwise products of roots of g; its largest real
  // root is exactly the squared dominant modulus.
  IntPoly H = pair_product_poly(g);
  IntPoly sqfH = squarefree_part(H);
  std::vector<RootInterval> hroots = isolate_real_roots(sqfH);
  check(!hroots.empty(), "dominant_root: no pair products on the real line");
  RootInterval gamma_iv = hroots.back();
  // keep the interval positive so square roots behave
  while (gamma_iv.lo <= 0) {
    gamma_iv = refine_interval(sqfH, gamma_iv, (gamma_iv.hi - gamma_iv.lo) / 4);
  }

  // Fast path: the dominant modulus often comes from a real root (always for
  // maps preserving a cone). Verify the candidate against gamma exactly.
  std::vector<RootInterval> realroots = isolate_real_roots(g);
  if (!realroots.empty()) {
    std::vector<IntPoly> irr = factor_squarefree(g);
    auto as_algebraic = [&](const RootInterval& iv) {
      for (const IntPoly& f : irr) {
        if (eval(f, iv.lo) == 0 || eval(f, iv.hi) == 0) continue;
        if (count_distinct_real_roots_open(f, iv.lo, iv.hi) == 1)
          return AlgebraicNumber::root_of(f, iv.lo, iv.hi);
      }
      throw internal_error("dominant_root: isolated root owned by no factor");
    };
    AlgebraicNumber cand = as_algebraic(realroots.back()).abs();
    if (realroots.size() > 1) {
      AlgebraicNumber low = as_algebraic(realroots.front()).abs();
      if (low > cand) cand = low;
    }
    AlgebraicNumber beta = cand.pow(2);
    const IntPoly& mb = beta.minimal_polynomial();
    IntPoly D = poly_gcd(sqfH, mb);
    if (D.degree() >= 1 && count_distinct_real_roots_open(D, gamma_iv.lo, gamma_iv.hi) == 1) {
      // gamma is a root of beta's minimal polynomial; decide beta == gamma
      AlgebraicNumber gamma_alg = AlgebraicNumber::root_of(mb, gamma_iv.lo, gamma_iv.hi);
      if (beta.compare(gamma_alg) == 0) return cand;
    }
  }

  // General path: factor H, take the exact square root of gamma.
  std::vector<IntPoly> hirr = factor_squarefree(sqfH);
  const IntPoly* mg = nullptr;
  for (const IntPoly& f : hirr) {
    if (eval(f, gamma_iv.lo) == 0 || eval(f, gamma_iv.hi) == 0) continue;
    if (count_distinct_real_roots_open(f, gamma_iv.lo, gamma_iv.hi) == 1) {
      mg = &f;
      break;
    }
  }
  check(mg != nullptr, "dominant_root: gamma owned by no factor");
  AlgebraicNumber gamma = AlgebraicNumber::root_of(*mg, gamma_iv.lo, gamma_iv.hi);

  if (gamma.is_rational()) {
    Rat q = gamma.rational_value();
    Int num = q.get_num(), den = q.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) && mpz_perfect_square_p(den.get_mpz_t())) {
      Int rn, rd;
      mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
      mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
      return AlgebraicNumber::rational(Rat(rn, rd));
    }
    // x^2 - q cleared of denominators is irreducible (q is not a square), so
    // the rational bisection endpoints are never roots of it
    IntPoly m{IntVec{-num, Int(0), den}};
    auto [u, v] = detail::rational_sqrt_bounds(q, Rat(1, 4));
    return AlgebraicNumber::root_of(m, u, v);
  }

  IntPoly doubled = substitute_square(gamma.minimal_polynomial());
  std::vector<IntPoly> cands = factor_squarefree(squarefree_part(doubled));
  auto current = [&]() {
    Rat eps = (gamma.upper() - gamma.lower()) / 2;
    if (eps == 0 || eps > Rat(1, 4)) eps = Rat(1, 4);
    Rat u = detail::rational_sqrt_bounds(gamma.lower(), eps).first;
    Rat v = detail::rational_sqrt_bounds(gamma.upper(), eps).second;
    return std::make_pair(u, v);
  };
  auto refine = [&]() { gamma.refine_once(); };
  return detail::select_unique_root(cands, current, refine);
}

}  // namespace toridyn
