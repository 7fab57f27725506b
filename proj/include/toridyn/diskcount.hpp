#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "toridyn/polynomial.hpp"
#include "toridyn/realroots.hpp"

namespace toridyn {

namespace detail {

// Real and imaginary parts of sum_k a_k (1+iy)^(2k) (1+y^2)^(n-k), which is
// g((1+iy)^2/(1+y^2)) * (1+y^2)^n. The base point (1+iy)^2/(1+y^2) runs over
// the unit circle minus {-1} as y runs over R, counterclockwise.
inline std::pair<IntPoly, IntPoly> circle_curve_parts(const IntPoly& g) {
  int n = g.degree();
  IntPoly one_plus_y2{1, 0, 1};
  IntPoly re_step{1, 0, -1};  // (1+iy)^2 = (1-y^2) + i(2y)
  IntPoly im_step{0, 2};
  IntPoly C{1}, S{0};
  std::vector<IntPoly> pw(n + 1);
  pw[0] = IntPoly{1};
  for (int i = 1; i <= n; ++i) pw[i] = pw[i - 1] * one_plus_y2;
  IntPoly A{0}, B{0};
  for (int k = 0; k <= n; ++k) {
    if (g.coeff(k) != 0) {
      A = A + g.coeff(k) * (C * pw[n - k]);
      B = B + g.coeff(k) * (S * pw[n - k]);
    }
    if (k < n) {
      IntPoly C2 = C * re_step - S * im_step;
      IntPoly S2 = C * im_step + S * re_step;
      C = std::move(C2);
      S = std::move(S2);
    }
  }
  return {A, B};
}

inline int quadrant(int sa, int sb) {
  check(sa != 0 && sb != 0, "quadrant: sign vanished");
  if (sa > 0) return sb > 0 ? 0 : 3;
  return sb > 0 ? 1 : 2;
}

// Quarter turns from quadrant q1 to q2; adjacent quadrants only.
inline int quarter_step(int q1, int q2) {
  int d = (q2 - q1) & 3;
  if (d == 0) return 0;
  if (d == 1) return 1;
  check(d == 3, "quarter_step: antipodal quadrant jump");
  return -1;
}

}  // namespace detail

// Distinct roots of squarefree g in the open unit disk, computed as the
// winding number of g over the circle. Requires g nonzero on the circle.
inline int count_strictly_inside_squarefree(const IntPoly& g) {
  int n = g.degree();
  if (n <= 0) return 0;
  check(eval(g, Rat(1)) != 0 && eval(g, Rat(-1)) != 0, "winding: root at +-1");
  auto [A, B] = detail::circle_curve_parts(g);
  // A and B may share complex roots (g having roots u and 1/conj(u) forces
  // one) but never a real root while g is zero-free on the circle.
  IntPoly common = poly_gcd(A, B);
  check(common.degree() == 0 || count_distinct_real_roots(common) == 0,
        "winding: curve passes through the origin");

  struct Ev {
    RootInterval iv;
    int which;  // 0 = A, 1 = B
  };
  IntPoly qa = squarefree_part(A);
  IntPoly qb = squarefree_part(B);
  std::vector<Ev> evs;
  for (const RootInterval& iv : isolate_real_roots(A)) evs.push_back({iv, 0});
  for (const RootInterval& iv : isolate_real_roots(B)) evs.push_back({iv, 1});

  // Shrink until intervals from the two curves no longer overlap. The roots
  // are distinct across A and B, so this terminates.
  for (;;) {
    std::sort(evs.begin(), evs.end(),
              [](const Ev& x, const Ev& y) { return x.iv.lo < y.iv.lo; });
    bool again = false;
    for (size_t i = 0; i + 1 < evs.size(); ++i) {
      if (evs[i].iv.hi > evs[i + 1].iv.lo) {
        Rat w = (evs[i].iv.hi - evs[i].iv.lo) / 4;
        Rat w2 = (evs[i + 1].iv.hi - evs[i + 1].iv.lo) / 4;
        evs[i].iv = refine_interval(evs[i].which ? qb : qa, evs[i].iv, w);
        evs[i + 1].iv = refine_interval(evs[i + 1].which ? qb : qa, evs[i + 1].iv, w2);
        again = true;
      }
    }
    if (!again) break;
  }

  auto quad_at = [&](const Rat& y) {
    return detail::quadrant(sign_of(eval(A, y)), sign_of(eval(B, y)));
  };

  // End quadrants straight from leading behavior. deg A = 2n with leading
  // coefficient g(-1) != 0; B may degenerate but never to the zero polynomial
  // here (a nonconstant g is non-real somewhere on the circle).
  check(A.degree() == 2 * n, "winding: unexpected degree drop");
  check(!B.is_zero(), "winding: curve collapsed onto the real axis");
  int sa_inf = sign_of(A.lead());
  int sb_plus = sign_of(B.lead());
  int sb_minus = (B.degree() % 2 == 1) ? -sb_plus : sb_plus;
  int q_start = detail::quadrant(sa_inf, sb_minus);
  int q_end = detail::quadrant(sa_inf, sb_plus);

  int turns = 0;
  int q = q_start;
  for (const Ev& e : evs) {
    int q_lo = quad_at(e.iv.lo);
    check(q_lo == q, "winding: sign drift between events");
    int q_hi = quad_at(e.iv.hi);
    turns += detail::quarter_step(q_lo, q_hi);
    q = q_hi;
  }
  check(q == q_end, "winding: end quadrant mismatch");
  turns += detail::quarter_step(q_end, q_start);  // close up through z = -1
  check(turns % 4 == 0, "winding: total turning not a multiple of 4");
  int nu = turns / 4;
  check(0 <= nu && nu <= n, "winding: count out of range");
  return nu;
}

// Distinct non-real conjugate pairs of roots of g on the unit circle.
// Each pair z, conj(z) corresponds to one real root t = z + 1/z of the
// Joukowski resultant in the open interval (-2, 2); real circle roots
// (only +-1) must already be stripped from g.
inline int count_circle_pairs(const IntPoly& g) {
  if (g.degree() <= 0) return 0;
  check(eval(g, Rat(1)) != 0 && eval(g, Rat(-1)) != 0, "circle pairs: strip +-1 first");
  IntPoly J = joukowski_transform(g);
  if (J.is_zero()) throw internal_error("circle pairs: degenerate transform");
  return count_distinct_real_roots_open(J, Rat(-2), Rat(2));
}

// Distinct roots of squarefree g in the closed unit disk.
inline int count_closed_distinct_squarefree(const IntPoly& g_in) {
  IntPoly g = g_in;
  if (g.degree() <= 0) return 0;
  int count = 0;
  if (g.coeff(0) == 0) {
    count += 1;  // root 0
    IntVec shifted(g.c.begin() + 1, g.c.end());
    g = IntPoly(std::move(shifted));
  }
  if (eval(g, Rat(1)) == 0) {
    count += 1;
    g = exact_div(g, IntPoly{-1, 1});
  }
  if (eval(g, Rat(-1)) == 0) {
    count += 1;
    g = exact_div(g, IntPoly{1, 1});
  }
  if (g.degree() <= 0) return count;

  // Roots of D are exactly the roots z of g with 1/z also a root. That covers
  // every circle root (1/z is the conjugate) and otherwise groups roots into
  // reciprocal pairs with exactly one member inside the disk, so D's closed
  // count is (deg D + #circle roots) / 2. The cofactor is circle-free and
  // safe for the winding walk. The +-1 fixed points were stripped above.
  IntPoly D = poly_gcd(g, reverse_poly(g));
  if (D.degree() > 0) {
    int pairs = count_circle_pairs(D);
    check((D.degree() + 2 * pairs) % 2 == 0, "disk count: unpaired reciprocal root");
    count += (D.degree() + 2 * pairs) / 2;
    g = exact_div(g, D);
  }
  if (g.degree() > 0) count += count_strictly_inside_squarefree(g);
  return count;
}

// Roots of p in |z| <= 1, counted with multiplicity. Exact.
inline int count_roots_in_closed_unit_disk(const IntPoly& p) {
  check(!p.is_zero(), "count_roots_in_closed_unit_disk: zero polynomial");
  if (p.degree() == 0) return 0;
  int total = 0;
  for (const auto& [g, mult] : squarefree_decomposition(p)) {
    total += mult * count_closed_distinct_squarefree(g);
  }
  return total;
}

// All roots strictly outside the closed unit disk.
inline bool all_roots_outside_closed_unit_disk(const IntPoly& p) {
  return count_roots_in_closed_unit_disk(p) == 0;
}

}  // namespace toridyn
