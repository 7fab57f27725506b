#pragma once

#include <optional>
#include <vector>

#include "toridyn/arith.hpp"
#include "toridyn/matrix.hpp"

namespace toridyn {

// One linear constraint a.x >= b, or a.x > b when strict.
struct LinearConstraint {
  RatVec a;
  Rat b;
  bool strict = false;
};

struct FeasibilityResult {
  bool feasible = false;
  // Satisfying point when feasible.
  RatVec witness;
  // Otherwise: nonnegative multipliers over the input constraints whose
  // combination reads "0 >= positive" or "0 > 0".
  RatVec farkas;
};

namespace detail {

struct TrackedConstraint {
  RatVec a;
  Rat b;
  bool strict = false;
  RatVec mult;  // combination of original constraints producing this one
};

inline bool zero_row(const RatVec& a) {
  for (const Rat& x : a)
    if (x != 0) return false;
  return true;
}

// A zero-row constraint is decided outright: 0 >= b fails iff b > 0,
// 0 > b fails iff b >= 0.
inline bool zero_row_violated(const TrackedConstraint& c) {
  return c.strict ? c.b >= 0 : c.b > 0;
}

}  // namespace detail

// Exact Fourier-Motzkin elimination. Farkas multipliers are carried through
// every derived constraint, so infeasibility comes with a checkable
// certificate; witnesses are recovered by back-substitution.
inline FeasibilityResult feasibility(const std::vector<LinearConstraint>& sys, size_t nvars) {
  using detail::TrackedConstraint;
  const size_t m = sys.size();
  std::vector<TrackedConstraint> cur;
  cur.reserve(m);
  for (size_t i = 0; i < m; ++i) {
    check(sys[i].a.size() == nvars, "feasibility: constraint arity mismatch");
    RatVec mult(m, Rat(0));
    mult[i] = 1;
    cur.push_back({sys[i].a, sys[i].b, sys[i].strict, std::move(mult)});
  }

  auto settle_zero_rows = [&](std::vector<TrackedConstraint>& cs)
      -> std::optional<FeasibilityResult> {
    std::vector<TrackedConstraint> kept;
    for (auto& c : cs) {
      if (!detail::zero_row(c.a)) {
        kept.push_back(std::move(c));
        continue;
      }
      if (detail::zero_row_violated(c)) return FeasibilityResult{false, {}, std::move(c.mult)};
    }
    cs = std::move(kept);
    return std::nullopt;
  };

  if (auto bad = settle_zero_rows(cur)) return *bad;

  // levels[k] holds the system as it stood before eliminating variable k
  std::vector<std::vector<TrackedConstraint>> levels;
  levels.reserve(nvars);
  for (size_t k = 0; k < nvars; ++k) {
    levels.push_back(cur);
    std::vector<TrackedConstraint> next;
    std::vector<const TrackedConstraint*> pos, neg;
    for (const auto& c : levels[k]) {
      int s = sign_of(c.a[k]);
      if (s > 0) {
        pos.push_back(&c);
      } else if (s < 0) {
        neg.push_back(&c);
      } else {
        next.push_back(c);
      }
    }
    for (const auto* p : pos) {
      for (const auto* q : neg) {
        Rat alpha = -q->a[k];  // > 0, scales p
        Rat beta = p->a[k];    // > 0, scales q
        TrackedConstraint d;
        d.a.resize(nvars, Rat(0));
        for (size_t j = 0; j < nvars; ++j) d.a[j] = alpha * p->a[j] + beta * q->a[j];
        d.b = alpha * p->b + beta * q->b;
        d.strict = p->strict || q->strict;
        d.mult.resize(m, Rat(0));
        for (size_t j = 0; j < m; ++j) d.mult[j] = alpha * p->mult[j] + beta * q->mult[j];
        next.push_back(std::move(d));
      }
    }
    if (next.size() > 200000) throw resource_cap("feasibility: elimination blow-up");
    if (auto bad = settle_zero_rows(next)) return *bad;
    cur = std::move(next);
  }

  // Feasible; rebuild a witness from the saved levels, last variable first.
  RatVec x(nvars, Rat(0));
  for (size_t k = nvars; k-- > 0;) {
    std::optional<Rat> lo, hi;
    bool lo_strict = false, hi_strict = false;
    for (const auto& c : levels[k]) {
      int s = sign_of(c.a[k]);
      if (s == 0) continue;
      Rat rest = c.b;
      for (size_t j = k + 1; j < nvars; ++j) rest -= c.a[j] * x[j];
      Rat bound = rest / c.a[k];
      if (s > 0) {
        if (!lo || bound > *lo) {
          lo = bound;
          lo_strict = c.strict;
        } else if (bound == *lo) {
          lo_strict = lo_strict || c.strict;
        }
      } else {
        if (!hi || bound < *hi) {
          hi = bound;
          hi_strict = c.strict;
        } else if (bound == *hi) {
          hi_strict = hi_strict || c.strict;
        }
      }
    }
    if (!lo && !hi) {
      x[k] = 0;
    } else if (lo && !hi) {
      x[k] = lo_strict ? *lo + 1 : *lo;
    } else if (!lo && hi) {
      x[k] = hi_strict ? *hi - 1 : *hi;
    } else if (*lo == *hi) {
      check(!lo_strict && !hi_strict, "feasibility: witness interval collapsed");
      x[k] = *lo;
    } else {
      check(*lo < *hi, "feasibility: witness interval inverted");
      x[k] = simplest_rational_between(*lo, *hi);
    }
  }
  return {true, std::move(x), {}};
}

// Append the equality a.x = b as a pair of inequalities.
inline void add_equality(std::vector<LinearConstraint>& sys, const RatVec& a, const Rat& b) {
  sys.push_back({a, b, false});
  sys.push_back({neg(a), -b, false});
}

inline RatVec to_rat_vec(const IntVec& v) {
  RatVec out;
  out.reserve(v.size());
  for (const Int& x : v) out.emplace_back(x);
  return out;
}

// Does cone(rays) contain x? Exact; the rays may be dependent.
inline bool in_cone(const std::vector<IntVec>& rays, const RatVec& x) {
  size_t dim = x.size();
  size_t k = rays.size();
  std::vector<LinearConstraint> sys;
  for (size_t d = 0; d < dim; ++d) {
    RatVec row(k, Rat(0));
    for (size_t i = 0; i < k; ++i) {
      check(rays[i].size() == dim, "in_cone: ray dimension mismatch");
      row[i] = Rat(rays[i][d]);
    }
    add_equality(sys, row, x[d]);
  }
  for (size_t i = 0; i < k; ++i) {
    RatVec row(k, Rat(0));
    row[i] = 1;
    sys.push_back({std::move(row), Rat(0), false});
  }
  return feasibility(sys, k).feasible;
}

// Is there y with g.y > 0 for every generator? Solved in the scaled closed
// form g.y >= 1. On failure the Farkas multipliers restricted to the
// generator rows give nonnegative l, not all zero, with sum_i l_i g_i = 0
// (Gordan's alternative).
struct StrictPositivity {
  bool feasible = false;
  RatVec witness;      // y with g.y >= 1 for all g
  IntVec certificate;  // primitive nonnegative combination proving failure
};

inline StrictPositivity strict_positivity(const std::vector<IntVec>& gens, size_t dim) {
  std::vector<LinearConstraint> sys;
  for (const IntVec& g : gens) {
    check(g.size() == dim, "strict_positivity: generator dimension mismatch");
    sys.push_back({to_rat_vec(g), Rat(1), false});
  }
  FeasibilityResult r = feasibility(sys, dim);
  if (r.feasible) return {true, std::move(r.witness), {}};
  // sanity: the multipliers really cancel the generators
  RatVec comb(dim, Rat(0));
  bool nonzero = false;
  for (size_t i = 0; i < gens.size(); ++i) {
    check(r.farkas[i] >= 0, "strict_positivity: negative Farkas multiplier");
    if (r.farkas[i] != 0) nonzero = true;
    for (size_t d = 0; d < dim; ++d) comb[d] += r.farkas[i] * Rat(gens[i][d]);
  }
  check(nonzero, "strict_positivity: degenerate certificate");
  for (const Rat& c : comb) check(c == 0, "strict_positivity: certificate does not cancel");
  return {false, {}, primitive(r.farkas)};
}

}  // namespace toridyn
