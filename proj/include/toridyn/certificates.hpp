#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toridyn/entropy.hpp"
#include "toridyn/mmp.hpp"

namespace toridyn {

namespace detail {

// Exact solver for B^T x = w where the rows of B are a basis of a saturated
// sublattice; membership failures return nullopt.
struct SublatticeSolver {
  SmithForm s;  // U * B^T * V = D
  size_t k;

  explicit SublatticeSolver(const IntMat& B) : s(smith_normal_form(B.transpose())), k(B.rows) {
    size_t r = 0;
    while (r < s.D.rows && r < s.D.cols && s.D.at(r, r) != 0) ++r;
    check(r == k, "SublatticeSolver: basis rows are dependent");
  }

  std::optional<IntVec> solve(const IntVec& w) const {
    IntVec uw = s.U * w;
    IntVec y(k);
    for (size_t i = 0; i < k; ++i) {
      if (uw[i] % s.D.at(i, i) != 0) return std::nullopt;  // not in the saturation
      y[i] = uw[i] / s.D.at(i, i);
    }
    for (size_t i = k; i < uw.size(); ++i)
      if (uw[i] != 0) return std::nullopt;  // outside the span
    return s.V * y;
  }
};

}  // namespace detail

// The fiber of a fibering contraction: the sublattice N0 spanned by the
// contracted wall's positive rays, the cones of the source fan lying inside
// it, and the equivariant iterate restricted to it.
struct FiberStructure {
  IntMat sublattice;  // rows: saturated basis of N0
  Fan fiber_fan;      // in sublattice coordinates
  ToricVariety fiber_variety;
  ToricMorphism restricted_map;
};

inline FiberStructure fiber_structure(const ContractionStep& step) {
  if (step.kind != ContractionKind::fibering)
    throw input_error("fiber_structure: step is not a fibering contraction");
  const Fan& fan = step.source.fan;
  size_t n = static_cast<size_t>(fan.rank);
  if (step.source_iterate.rows != n || step.source_iterate.cols != n)
    throw input_error("fiber_structure: step carries no equivariant iterate, run descend first");

  const IntMat& B = step.fiber_basis;
  size_t k = B.rows;
  check(k >= 1, "fiber_structure: empty fiber sublattice");
  detail::SublatticeSolver solver(B);

  // rays of the source fan lying in (N0)_R, with their basis coordinates
  std::vector<int> member(fan.rays.size(), -1);
  std::vector<IntVec> coords;
  for (size_t i = 0; i < fan.rays.size(); ++i) {
    if (auto c = solver.solve(fan.rays[i])) {
      member[i] = static_cast<int>(coords.size());
      coords.push_back(*c);
    }
  }

  // faces of maximal cones contained in (N0)_R; keep the inclusion-maximal ones
  std::vector<std::vector<int>> faces;
  for (const auto& cone : fan.cones) {
    std::vector<int> face;
    for (int idx : cone)
      if (member[idx] >= 0) face.push_back(member[idx]);
    std::sort(face.begin(), face.end());
    faces.push_back(std::move(face));
  }
  std::vector<std::vector<int>> maximal;
  for (const auto& f : faces) {
    bool dominated = false;
    for (const auto& g : faces)
      if (f != g && std::includes(g.begin(), g.end(), f.begin(), f.end())) dominated = true;
    if (!dominated && std::find(maximal.begin(), maximal.end(), f) == maximal.end())
      maximal.push_back(f);
  }

  FiberStructure out;
  out.sublattice = B;
  out.fiber_fan = make_fan(static_cast<int>(k), coords, maximal);
  out.fiber_variety = build_variety(out.fiber_fan);

  // restriction R of the iterate: F * b_i = sum_j R(j,i) b_j
  IntMat R(k, k);
  for (size_t i = 0; i < k; ++i) {
    auto x = solver.solve(step.source_iterate * B.row(i));
    check(x.has_value(), "fiber_structure: iterate does not preserve the fiber sublattice");
    for (size_t j = 0; j < k; ++j) R.at(j, i) = (*x)[j];
  }
  out.restricted_map = validate_morphism(R, out.fiber_fan, out.fiber_fan);
  check(out.restricted_map.surjective, "fiber_structure: restriction is not surjective");
  return out;
}

enum class Pic1Kind { polarized, identity, other };

inline std::string to_string(Pic1Kind k) {
  switch (k) {
    case Pic1Kind::polarized: return "polarized";
    case Pic1Kind::identity: return "identity";
    default: return "other";
  }
}

struct Pic1Class {
  Pic1Kind kind = Pic1Kind::other;
  Rat q;  // class-group multiplier
  std::string note;
};

// Surjective equivariant endomorphisms of a Picard-number-one toric fiber are
// induced by dilations, so the class multiplier separates the cases; anything
// else is reported defensively and suggests invalid input.
inline Pic1Class classify_pic1_endo(const FiberStructure& fiber) {
  if (fiber.fiber_variety.class_rank != 1)
    throw input_error("classify_pic1_endo: fiber does not have Picard number one");
  PullbackAction act = pullback(fiber.restricted_map);
  Rat q = act.matrix.at(0, 0);
  if (q > 1) return {Pic1Kind::polarized, q, ""};
  size_t k = fiber.restricted_map.lattice_map.rows;
  if (q == 1 && fiber.restricted_map.lattice_map == IntMat::identity(k))
    return {Pic1Kind::identity, q, ""};
  return {Pic1Kind::other, q,
          "restriction is neither a dilation with multiplier above one nor the identity"};
}

enum class DensityVerdict { dense, unknown };

inline std::string to_string(DensityVerdict v) {
  return v == DensityVerdict::dense ? "dense" : "unknown";
}

struct FiberEvidence {
  size_t step = 0;
  Pic1Class cls;
};

struct DensityCertificate {
  DensityVerdict verdict = DensityVerdict::unknown;
  std::vector<FiberEvidence> per_fibering_evidence;
};

// Walk the trace: birational steps preserve density of pre-periodic points,
// each fibering step needs its fiber endomorphism to be a dilation or the
// identity. Dense is only claimed for tractable traces with full evidence.
inline DensityCertificate density_certificate(const MMPTrace& trace) {
  DensityCertificate cert;
  bool all_good = true;
  for (size_t i = 0; i < trace.steps.size(); ++i) {
    const ContractionStep& s = trace.steps[i];
    if (s.kind != ContractionKind::fibering) continue;
    Pic1Class ev = classify_pic1_endo(fiber_structure(s));
    if (ev.kind == Pic1Kind::other) all_good = false;
    cert.per_fibering_evidence.push_back({i, ev});
  }
  if (trace.tractable && all_good) cert.verdict = DensityVerdict::dense;
  return cert;
}

struct DifficultyBound {
  std::optional<int> value;  // absent means unknown
  std::vector<std::string> provenance;
};

// Upper bound on the dynamical difficulty, propagated backward along a trace:
// birational steps copy the bound, a fibering step adds the dimension drop
// unless a relative-difficulty annotation replaces it.
inline DifficultyBound propagate_difficulty(const MMPTrace& trace, const DifficultyBound& base,
                                            const std::map<size_t, int>& relative = {}) {
  for (const auto& [idx, r] : relative) {
    if (idx >= trace.steps.size() || trace.steps[idx].kind != ContractionKind::fibering)
      throw input_error("propagate_difficulty: annotation index " + std::to_string(idx) +
                        " is not a fibering step");
    if (r < 0)
      throw input_error("propagate_difficulty: negative relative difficulty annotation");
  }
  if (!base.value) return {};
  if (*base.value < 0) throw input_error("propagate_difficulty: negative base bound");

  DifficultyBound out;
  out.value = *base.value;
  out.provenance.push_back("base-annotation");
  for (size_t i = trace.steps.size(); i-- > 0;) {
    const ContractionStep& s = trace.steps[i];
    if (s.kind != ContractionKind::fibering) {
      out.provenance.push_back("birational-invariance");
      continue;
    }
    auto it = relative.find(i);
    if (it != relative.end()) {
      *out.value += it->second;
      out.provenance.push_back("base-annotation");
    } else {
      *out.value += s.source.fan.rank - s.result.fan.rank;
      out.provenance.push_back("fibering-bound");
    }
  }
  check(*out.value >= 0, "propagate_difficulty: bound went negative");
  return out;
}

// Conservative witness that the endomorphism preserves a rational fibration:
// some fibering step descends to a finite-order map on a positive-dimensional
// base. False never asserts absence.
inline bool fibration_obstruction(const MMPTrace& trace) {
  for (const ContractionStep& s : trace.steps) {
    if (s.kind != ContractionKind::fibering) continue;
    if (s.result.fan.rank == 0 || !s.descended_map) continue;
    if (finite_order(pullback(*s.descended_map).matrix)) return true;
  }
  return false;
}

}  // namespace toridyn
