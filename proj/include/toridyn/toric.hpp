#pragma once

#include <algorithm>
#include <vector>

#include "toridyn/fan.hpp"
#include "toridyn/matrix.hpp"
#include "toridyn/polynomial.hpp"
#include "toridyn/snf.hpp"

namespace toridyn {

// Complete simplicial projective toric variety. Class-lattice data lives on
// the free part of Cl(X); torsion is recorded but plays no dynamical role.
struct ToricVariety {
  Fan fan;
  int class_rank = 0;
  std::vector<Int> torsion;  // invariant factors > 1 of the ray matrix
  IntMat ray_to_class;       // pi: Z^{#rays} -> Z^class_rank, surjective
  IntMat class_section;      // integer section, pi * section = identity
  std::vector<Wall> wall_list;
  std::vector<IntVec> wall_curves;      // curve class per wall, same order
  std::vector<IntVec> mori_generators;  // primitive, deduped, lex sorted
  std::vector<IntVec> nef_rays;
  IntVec canonical;  // class of K_X = -sum of ray divisors
};

inline ToricVariety build_variety(const Fan& fan) {
  std::pair<size_t, size_t> bad;
  if (!is_fan(fan, &bad))
    throw input_error("build_variety: cones " + to_string(fan.cones[bad.first]) + " and " +
                      to_string(fan.cones[bad.second]) + " overlap, not a fan");
  if (!is_simplicial(fan)) throw input_error("build_variety: fan is not simplicial");
  if (!is_complete(fan)) throw input_error("build_variety: fan is not complete");

  ToricVariety X;
  X.fan = fan;
  size_t nrays = fan.rays.size();
  int n = fan.rank;
  if (n == 0) return X;  // the point: Cl = 0, no walls, trivially projective

  // Cl(X) from the divisor sequence: quotient of Z^{#rays} by the lattice of
  // principal divisors, i.e. the column span of the ray matrix.
  IntMat R(nrays, n);
  for (size_t i = 0; i < nrays; ++i)
    for (int j = 0; j < n; ++j) R.at(i, j) = fan.rays[i][j];
  auto lq = quotient_by_rowspan(R.transpose(), nrays);
  X.class_rank = static_cast<int>(nrays) - n;
  check(static_cast<int>(lq.pi.rows) == X.class_rank, "build_variety: class rank mismatch");
  X.ray_to_class = lq.pi;
  X.class_section = lq.section;
  SmithForm sf = smith_normal_form(R);
  for (size_t i = 0; i < sf.D.rows && i < sf.D.cols; ++i)
    if (sf.D.at(i, i) > 1) X.torsion.push_back(sf.D.at(i, i));

  X.wall_list = walls(fan);
  IntMat st = X.class_section.transpose();
  for (const auto& w : X.wall_list) {
    IntVec c = st * w.relation;
    check(!is_zero(c), "build_variety: wall curve has zero class");
    X.wall_curves.push_back(std::move(c));
  }
  for (const auto& c : X.wall_curves) X.mori_generators.push_back(primitive(c));
  std::sort(X.mori_generators.begin(), X.mori_generators.end(), lex_less);
  X.mori_generators.erase(std::unique(X.mori_generators.begin(), X.mori_generators.end()),
                          X.mori_generators.end());

  // Projectivity = the nef cone has interior, i.e. some class is strictly
  // positive on every wall curve. Must be settled before dualization: the
  // double-description run below assumes its output cone is full-dimensional.
  auto sp = strict_positivity(X.mori_generators, X.class_rank);
  if (!sp.feasible)
    throw input_error("build_variety: fan is not projective (trivial effective curve class " +
                      to_string(sp.certificate) + ")");
  X.nef_rays = dual_cone_rays(X.mori_generators, X.class_rank);

  IntVec ones(nrays, Int(-1));
  X.canonical = X.ray_to_class * ones;
  return X;
}

inline IntVec canonical_class(const ToricVariety& X) { return X.canonical; }

namespace detail {

inline int wall_index(const ToricVariety& X, const Wall& w) {
  for (size_t i = 0; i < X.wall_list.size(); ++i) {
    const Wall& o = X.wall_list[i];
    if (o.wall_rays == w.wall_rays && o.cone_a == w.cone_a && o.cone_b == w.cone_b &&
        o.opp_a == w.opp_a && o.opp_b == w.opp_b && o.relation == w.relation)
      return static_cast<int>(i);
  }
  return -1;
}

}  // namespace detail

// D . C_w for a divisor class: pair a divisor representative of the class
// with the wall relation. Well defined because the relation annihilates the
// saturated span of principal divisors.
inline Rat intersect_wall_curve(const ToricVariety& X, const Wall& w, const IntVec& cls) {
  int i = detail::wall_index(X, w);
  if (i < 0) throw input_error("intersect_wall_curve: wall does not belong to this variety");
  check(cls.size() == static_cast<size_t>(X.class_rank), "intersect_wall_curve: class dimension");
  return Rat(dot(cls, X.wall_curves[i]));
}

struct ToricMorphism {
  ToricVariety source, target;
  IntMat lattice_map;  // acts on lattice points as v -> M v
  bool surjective = false;
};

inline ToricMorphism validate_morphism(const IntMat& lattice_map, const Fan& source_fan,
                                       const Fan& target_fan) {
  if (static_cast<int>(lattice_map.cols) != source_fan.rank ||
      static_cast<int>(lattice_map.rows) != target_fan.rank)
    throw input_error("validate_morphism: lattice map shape does not match the fans");
  ToricMorphism m;
  m.source = build_variety(source_fan);
  m.target = build_variety(target_fan);
  m.lattice_map = lattice_map;

  for (const auto& cone : source_fan.cones) {
    bool placed = target_fan.rank == 0;
    std::vector<RatVec> images;
    for (int idx : cone) images.push_back(to_rat(lattice_map * source_fan.rays[idx]));
    for (const auto& tc : target_fan.cones) {
      auto tr = cone_rays(target_fan, tc);
      bool all = true;
      for (const auto& im : images)
        if (!simplicial_cone_contains(tr, im)) {
          all = false;
          break;
        }
      if (all) {
        placed = true;
        break;
      }
    }
    if (!placed)
      throw input_error("validate_morphism: image of cone " + to_string(cone) +
                        " lies in no cone of the target fan");
  }
  m.surjective = rank(lattice_map) == static_cast<size_t>(target_fan.rank);
  return m;
}

struct PullbackAction {
  RatMat matrix;    // f* on the free part of Cl, exact
  IntMat scaled;    // scale * matrix, integer
  Int scale = 1;    // positive common denominator
  IntPoly char_polynomial;  // primitive integer polynomial with the same roots
  Rat det_value;
};

// f* on the class lattice, via support-function pullback: the row of ray rho'
// holds the coordinates of F(v_rho') in the rays of a containing cone.
inline PullbackAction pullback(const ToricMorphism& m) {
  if (!(m.source.fan == m.target.fan))
    throw input_error("pullback: not an endomorphism (source and target fans differ)");
  if (!m.surjective) throw input_error("pullback: morphism is not surjective");
  const Fan& fan = m.source.fan;
  size_t nrays = fan.rays.size();
  int n = fan.rank;

  PullbackAction out;
  RatMat P(nrays, nrays);
  for (size_t rp = 0; rp < nrays; ++rp) {
    RatVec image = to_rat(m.lattice_map * fan.rays[rp]);
    bool placed = false;
    for (const auto& cone : fan.cones) {
      auto cr = cone_rays(fan, cone);
      auto coords = simplicial_coordinates(cr, image);
      if (!coords) continue;
      bool nonneg = true;
      for (const Rat& c : *coords)
        if (c < 0) {
          nonneg = false;
          break;
        }
      if (!nonneg) continue;
      for (size_t k = 0; k < cone.size(); ++k) P.at(rp, cone[k]) = (*coords)[k];
      placed = true;
      break;
    }
    check(placed, "pullback: ray image escapes the fan support");
  }

  // exact consistency: P encodes the lattice map on rays, and the induced
  // class action commutes with the ray-to-class projection
  if (n > 0) {
    RatMat Rr(nrays, n), Ft(n, n);
    for (size_t i = 0; i < nrays; ++i)
      for (int j = 0; j < n; ++j) Rr.at(i, j) = Rat(fan.rays[i][j]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) Ft.at(i, j) = Rat(m.lattice_map.at(j, i));
    check(P * Rr == Rr * Ft, "pullback: ray matrix consistency failed");
  }
  RatMat pi = to_rat(m.source.ray_to_class);
  RatMat sec = to_rat(m.source.class_section);
  RatMat Q = pi * P * sec;
  check(pi * P == Q * pi, "pullback: class action does not commute with projection");

  out.matrix = Q;
  out.scale = common_denominator(Q);
  out.scaled = scaled_integer(Q, out.scale);
  IntVec cc = char_poly_coeffs(out.scaled);
  // char poly of Q from char poly of scale*Q: substitute scale*x, then strip content
  IntVec pc(cc.size());
  Int pw = 1;
  for (size_t i = 0; i < cc.size(); ++i) {
    pc[i] = cc[i] * pw;
    pw *= out.scale;
  }
  out.char_polynomial = IntPoly{primitive(pc)};
  out.det_value = det(Q);
  check(m.source.class_rank == 0 || out.det_value != 0,
        "pullback: singular class action for a surjective endomorphism");
  return out;
}

}  // namespace toridyn
