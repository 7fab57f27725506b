#pragma once

#include <optional>
#include <string>

#include "toridyn/algebraic.hpp"
#include "toridyn/diskcount.hpp"
#include "toridyn/factor.hpp"
#include "toridyn/toric.hpp"

namespace toridyn {

// Spectral radius of the class action, exact. The point convention is 1.
inline AlgebraicNumber dynamical_degree(const PullbackAction& a) {
  if (a.matrix.rows == 0) return AlgebraicNumber::rational(Rat(1));
  return dominant_root(a.char_polynomial);
}

// All eigenvalues strictly outside the closed unit disk.
inline bool is_int_amplified(const PullbackAction& a) {
  if (a.matrix.rows == 0) return true;
  return count_roots_in_closed_unit_disk(a.char_polynomial) == 0;
}

struct PolarizedResult {
  Rat q;
  RatVec witness;  // ample class with f* witness = q witness
};

namespace detail {

// Rational roots of a primitive integer polynomial, via its linear factors.
inline std::vector<Rat> rational_roots(const IntPoly& p) {
  std::vector<Rat> out;
  for (const auto& [g, mult] : factor(p)) {
    (void)mult;
    if (g.degree() != 1) continue;
    Rat q(Int(-g.c[0]), g.c[1]);
    q.canonicalize();
    out.push_back(q);
  }
  return out;
}

}  // namespace detail

// Search for a rational q > 1 whose eigenspace meets the nef interior.
// Rational eigenvalues suffice: a polarization multiplies a rational class.
inline std::optional<PolarizedResult> is_polarized(const PullbackAction& a,
                                                   const ToricVariety& X) {
  if (X.class_rank == 0) return std::nullopt;
  auto qs = detail::rational_roots(a.char_polynomial);
  std::sort(qs.begin(), qs.end(), [](const Rat& x, const Rat& y) { return x > y; });
  size_t n = a.matrix.rows;
  for (const Rat& q : qs) {
    if (q <= 1) continue;
    std::vector<LinearConstraint> sys;
    for (size_t i = 0; i < n; ++i) {
      RatVec row(n);
      for (size_t j = 0; j < n; ++j) row[j] = a.matrix.at(i, j) - (i == j ? q : Rat(0));
      add_equality(sys, row, Rat(0));
    }
    for (const auto& c : X.mori_generators) sys.push_back({to_rat(c), Rat(1), false});
    auto r = feasibility(sys, n);
    if (r.feasible) return PolarizedResult{q, r.witness};
  }
  return std::nullopt;
}

struct AmplifiedResult {
  bool amplified = false;
  RatVec witness;      // class with (f* - 1) witness ample
  IntVec obstruction;  // else: nonzero effective curve class fixed by (f* - 1)^T
};

// Does some class x have (f* - 1)x strictly positive on the Mori cone?
// Infeasibility is certified by a curve class via the Gordan alternative.
inline AmplifiedResult is_amplified(const PullbackAction& a, const ToricVariety& X) {
  if (X.class_rank == 0) return {true, {}, {}};
  size_t n = a.matrix.rows;
  RatMat B = a.matrix - to_rat(IntMat::identity(n));  // (f* - 1)
  RatMat Bt = B.transpose();
  Int d = common_denominator(Bt);
  IntMat Bi = scaled_integer(Bt, d);
  std::vector<IntVec> gens;
  gens.reserve(X.mori_generators.size());
  for (const auto& c : X.mori_generators) gens.push_back(Bi * c);
  auto sp = strict_positivity(gens, n);
  if (sp.feasible) {
    for (const auto& c : X.mori_generators) check(dot(to_rat(c), B * sp.witness) > 0,
                                                  "is_amplified: witness is not ample");
    return {true, sp.witness, {}};
  }
  IntVec z(n, Int(0));
  for (size_t w = 0; w < gens.size(); ++w)
    for (size_t i = 0; i < n; ++i) z[i] += sp.certificate[w] * X.mori_generators[w][i];
  check(!is_zero(z), "is_amplified: trivial obstruction class");
  RatVec img = Bt * to_rat(z);
  for (const auto& v : img) check(v == 0, "is_amplified: obstruction not fixed");
  return {false, {}, z};
}

struct DynamicalReport {
  AlgebraicNumber lambda1;
  std::string lambda1_approx;
  bool int_amplified = false;
  std::optional<PolarizedResult> polarized;
  AmplifiedResult amplified;
  Rat det_pullback;
};

inline DynamicalReport analyze_endomorphism(const PullbackAction& a, const ToricVariety& X) {
  AlgebraicNumber l = dynamical_degree(a);
  return DynamicalReport{l,          l.decimal(10),       is_int_amplified(a),
                         is_polarized(a, X), is_amplified(a, X), a.det_value};
}

}  // namespace toridyn
