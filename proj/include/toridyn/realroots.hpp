#pragma once

#include "toridyn/polynomial.hpp"

namespace toridyn {

// Divide by the (positive) content only. Unlike primitive_part this never
// flips the sign, which matters for Sturm chains.
inline IntPoly positive_primitive(const IntPoly& p) {
  if (p.is_zero()) return p;
  Int g = content(p);
  IntVec v = p.c;
  for (Int& x : v) x = exact_div(x, g);
  return IntPoly(std::move(v));
}

// Sturm chain of a squarefree polynomial (coefficients kept primitive by
// positive scaling, which preserves all sign information).
struct SturmChain {
  std::vector<IntPoly> seq;

  explicit SturmChain(const IntPoly& squarefree) {
    check(!squarefree.is_zero(), "SturmChain: zero polynomial");
    seq.push_back(positive_primitive(squarefree));
    if (squarefree.degree() == 0) return;
    seq.push_back(positive_primitive(derivative(squarefree)));
    while (!seq.back().is_zero() && seq.back().degree() > 0) {
      RatPoly r = divmod(RatPoly(seq[seq.size() - 2]), RatPoly(seq.back())).second;
      if (r.is_zero()) break;  // only for non-squarefree input; callers pass squarefree
      IntPoly nr = positive_primitive(clear_denominators(r));
      seq.push_back(-Int(1) * nr);
    }
  }

  int variations_at(const Rat& x) const {
    int v = 0, last = 0;
    for (const IntPoly& p : seq) {
      int s = sign_of(eval(p, x));
      if (s == 0) continue;
      if (last != 0 && s != last) ++v;
      last = s;
    }
    return v;
  }

  int variations_at_minus_inf() const {
    int v = 0, last = 0;
    for (const IntPoly& p : seq) {
      if (p.is_zero()) continue;
      int s = sign_of(p.lead());
      if (p.degree() % 2 == 1) s = -s;
      if (last != 0 && s != last) ++v;
      last = s;
    }
    return v;
  }

  int variations_at_plus_inf() const {
    int v = 0, last = 0;
    for (const IntPoly& p : seq) {
      if (p.is_zero()) continue;
      int s = sign_of(p.lead());
      if (last != 0 && s != last) ++v;
      last = s;
    }
    return v;
  }

  // Number of distinct roots in (a, b]; requires a < b.
  int count_halfopen(const Rat& a, const Rat& b) const {
    return variations_at(a) - variations_at(b);
  }
};

// All roots of p lie strictly inside (-bound, bound).
inline Rat cauchy_bound(const IntPoly& p) {
  check(!p.is_zero(), "cauchy_bound: zero polynomial");
  Rat m = 0;
  for (int i = 0; i < p.degree(); ++i) {
    Rat r = abs(Rat(p.c[i]) / Rat(p.lead()));
    if (r > m) m = r;
  }
  return m + 1;
}

// Open interval with non-root rational endpoints containing exactly one
// distinct real root of the (squarefree) polynomial it was isolated for.
struct RootInterval {
  Rat lo, hi;
};

namespace detail {

// A point near (a+b)/2 that is not a root of q.
inline Rat nonroot_midpoint(const IntPoly& q, const Rat& a, const Rat& b) {
  Rat mid = (a + b) / 2;
  if (eval(q, mid) != 0) return mid;
  Rat step = (b - a) / 4;
  while (true) {
    Rat m2 = mid + step;
    if (m2 < b && eval(q, m2) != 0) return m2;
    step /= 2;
    check(step != 0, "nonroot_midpoint: degenerate interval");
  }
}

inline void isolate_rec(const SturmChain& chain, const IntPoly& q, const Rat& a, const Rat& b,
                        std::vector<RootInterval>& out) {
  int n = chain.count_halfopen(a, b);
  if (n == 0) return;
  if (n == 1) {
    out.push_back({a, b});
    return;
  }
  Rat mid = nonroot_midpoint(q, a, b);
  isolate_rec(chain, q, a, mid, out);
  isolate_rec(chain, q, mid, b, out);
}

}  // namespace detail

// Isolating intervals for all distinct real roots of p, in increasing order.
// Endpoints are rational non-roots; intervals are pairwise disjoint.
inline std::vector<RootInterval> isolate_real_roots(const IntPoly& p) {
  check(!p.is_zero(), "isolate_real_roots: zero polynomial");
  IntPoly q = squarefree_part(p);
  if (q.degree() <= 0) return {};
  SturmChain chain(q);
  Rat b = cauchy_bound(q);
  std::vector<RootInterval> out;
  detail::isolate_rec(chain, q, -b, b, out);
  return out;
}

// Count distinct real roots of p in the open interval (a, b).
// Requires squarefree_part(p)(a) != 0 and != 0 at b.
inline int count_distinct_real_roots_open(const IntPoly& p, const Rat& a, const Rat& b) {
  IntPoly q = squarefree_part(p);
  if (q.degree() <= 0) return 0;
  check(eval(q, a) != 0 && eval(q, b) != 0, "count_open: root at endpoint");
  if (!(a < b)) return 0;
  SturmChain chain(q);
  return chain.count_halfopen(a, b);
}

inline int count_distinct_real_roots(const IntPoly& p) {
  IntPoly q = squarefree_part(p);
  if (q.degree() <= 0) return 0;
  SturmChain chain(q);
  return chain.variations_at_minus_inf() - chain.variations_at_plus_inf();
}

// Halve an isolating interval of a squarefree q until its width is <= w.
// The interval keeps non-root endpoints and exactly one root inside.
inline RootInterval refine_interval(const IntPoly& q, RootInterval iv, const Rat& w) {
  int sa = sign_of(eval(q, iv.lo));
  check(sa != 0 && eval(q, iv.hi) != 0, "refine_interval: root at endpoint");
  while (iv.hi - iv.lo > w) {
    Rat mid = detail::nonroot_midpoint(q, iv.lo, iv.hi);
    if (sign_of(eval(q, mid)) == sa) {
      iv.lo = mid;
    } else {
      iv.hi = mid;
    }
  }
  return iv;
}

}  // namespace toridyn
