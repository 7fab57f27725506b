#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "toridyn/dynamics.hpp"
#include "toridyn/snf.hpp"
#include "toridyn/toric.hpp"

namespace toridyn {

enum class ContractionKind { divisorial, fibering, flipping };

inline std::string to_string(ContractionKind k) {
  switch (k) {
    case ContractionKind::divisorial: return "divisorial";
    case ContractionKind::fibering: return "fibering";
    default: return "flipping";
  }
}

struct ExtremalRay {
  IntVec ray;  // primitive curve class
  bool k_negative = false;
  ContractionKind kind = ContractionKind::fibering;
  int wall = -1;  // representative wall index into X.wall_list
};

// Extremal rays of the Mori cone with their contraction type. The type is
// read off the sign pattern of the wall relation: no negative facet
// coefficient means the circuit closes up into fibers, one negative ray is a
// contracted divisor, two or more negatives make a small (flipping) locus.
inline std::vector<ExtremalRay> extremal_rays(const ToricVariety& X) {
  std::vector<ExtremalRay> out;
  const auto& gens = X.mori_generators;
  for (size_t i = 0; i < gens.size(); ++i) {
    std::vector<IntVec> others;
    for (size_t j = 0; j < gens.size(); ++j)
      if (j != i) others.push_back(gens[j]);
    if (!others.empty() && in_cone(others, to_rat(gens[i]))) continue;
    ExtremalRay e;
    e.ray = gens[i];
    e.k_negative = dot(X.canonical, gens[i]) < 0;
    std::optional<ContractionKind> kind;
    for (size_t w = 0; w < X.wall_list.size(); ++w) {
      if (primitive(X.wall_curves[w]) != gens[i]) continue;
      int neg = 0;
      for (const Int& c : X.wall_list[w].relation)
        if (c < 0) ++neg;
      ContractionKind k = neg == 0   ? ContractionKind::fibering
                          : neg == 1 ? ContractionKind::divisorial
                                     : ContractionKind::flipping;
      if (!kind) {
        kind = k;
        e.wall = static_cast<int>(w);
      } else {
        check(*kind == k, "extremal_rays: walls of one class disagree on the contraction type");
      }
    }
    check(kind.has_value(), "extremal_rays: extremal class carried by no wall");
    e.kind = *kind;
    out.push_back(e);
  }
  return out;
}

struct ContractionStep {
  ContractionKind kind = ContractionKind::fibering;
  IntVec ray;  // contracted primitive curve class
  ToricVariety source, result;
  IntMat lattice_map;       // N -> N'; identity for divisorial and flipping steps
  IntMat section;           // fibering: integer section of lattice_map
  IntMat fiber_basis;       // fibering: rows span the saturated fiber sublattice
  IntVec circuit_relation;  // relation of the representative wall
  int iterate_exponent = 1;                    // set by descend
  IntMat source_iterate;                       // set by descend: f^n on the source lattice
  std::optional<ToricMorphism> descended_map;  // set by descend
};

namespace detail {

inline const ExtremalRay& find_extremal(const std::vector<ExtremalRay>& ext, const IntVec& ray) {
  for (const auto& e : ext)
    if (e.ray == ray) return e;
  throw input_error("contract: " + to_string(ray) + " is not an extremal curve class");
}

inline void require_simplicial_result(const Fan& fan, const char* op) {
  for (const auto& cone : fan.cones)
    if (static_cast<int>(cone.size()) > fan.rank)
      throw unsupported_geometry(std::string(op) + ": result cone " + to_string(cone) +
                                 " is not simplicial");
}

}  // namespace detail

// Divisorial or fibering contraction of a K-negative extremal ray. Flipping
// rays go through toric_flip instead.
inline ContractionStep contract(const ToricVariety& X, const IntVec& ray) {
  const auto ext = extremal_rays(X);
  const ExtremalRay& e = detail::find_extremal(ext, ray);
  if (!e.k_negative) throw input_error("contract: ray is not canonically negative");
  if (e.kind == ContractionKind::flipping)
    throw input_error("contract: ray is flipping, use toric_flip");

  const Fan& fan = X.fan;
  const IntVec& rel = X.wall_list[e.wall].relation;
  ContractionStep step;
  step.kind = e.kind;
  step.ray = ray;
  step.source = X;
  step.circuit_relation = rel;

  if (e.kind == ContractionKind::divisorial) {
    int d = -1;
    for (size_t i = 0; i < rel.size(); ++i)
      if (rel[i] < 0) d = static_cast<int>(i);
    check(d >= 0, "contract: divisorial relation has no negative ray");

    std::vector<IntVec> new_rays;
    std::vector<int> remap(fan.rays.size(), -1);
    for (size_t i = 0; i < fan.rays.size(); ++i) {
      if (static_cast<int>(i) == d) continue;
      remap[i] = static_cast<int>(new_rays.size());
      new_rays.push_back(fan.rays[i]);
    }
    std::set<std::vector<int>> cones;
    for (const auto& cone : fan.cones) {
      if (std::find(cone.begin(), cone.end(), d) != cone.end()) continue;
      std::vector<int> c;
      for (int idx : cone) c.push_back(remap[idx]);
      std::sort(c.begin(), c.end());
      cones.insert(c);
    }
    // each wall carrying the class merges its two cones across the lost ray
    for (size_t w = 0; w < X.wall_list.size(); ++w) {
      if (primitive(X.wall_curves[w]) != ray) continue;
      const Wall& wall = X.wall_list[w];
      std::set<int> merged;
      for (int idx : fan.cones[wall.cone_a]) merged.insert(idx);
      for (int idx : fan.cones[wall.cone_b]) merged.insert(idx);
      check(merged.count(d) == 1, "contract: merged star cone misses the contracted ray");
      merged.erase(d);
      std::vector<int> c;
      for (int idx : merged) c.push_back(remap[idx]);
      cones.insert(c);
    }
    Fan out = make_fan(fan.rank, new_rays, {cones.begin(), cones.end()});
    detail::require_simplicial_result(out, "contract");
    step.result = build_variety(out);
    step.lattice_map = IntMat::identity(fan.rank);
  } else {
    // fiber directions are the positive part of the circuit
    std::vector<IntVec> fiber;
    for (size_t i = 0; i < rel.size(); ++i)
      if (rel[i] > 0) fiber.push_back(fan.rays[i]);
    IntMat fm(fiber.size(), fan.rank);
    for (size_t i = 0; i < fiber.size(); ++i)
      for (int j = 0; j < fan.rank; ++j) fm.at(i, j) = fiber[i][j];
    step.fiber_basis = saturate_rowspan(fm);
    LatticeQuotient lq = quotient_by_rowspan(step.fiber_basis, fan.rank);
    step.lattice_map = lq.pi;
    step.section = lq.section;
    int new_rank = fan.rank - static_cast<int>(step.fiber_basis.rows);

    Fan out;
    if (new_rank == 0) {
      out = make_fan(0, {}, {{}});
    } else {
      std::vector<IntVec> images;
      std::vector<int> remap(fan.rays.size(), -1);
      for (size_t i = 0; i < fan.rays.size(); ++i) {
        IntVec im = lq.pi * fan.rays[i];
        if (is_zero(im)) continue;
        remap[i] = static_cast<int>(images.size());
        images.push_back(im);
      }
      std::set<std::vector<int>> candidates;
      for (const auto& cone : fan.cones) {
        std::set<int> c;
        for (int idx : cone)
          if (remap[idx] >= 0) c.insert(remap[idx]);
        if (!c.empty()) candidates.insert({c.begin(), c.end()});
      }
      std::vector<std::vector<int>> cones;
      for (const auto& c : candidates) {
        bool maximal = true;
        for (const auto& other : candidates)
          if (&other != &c && other.size() > c.size() &&
              std::includes(other.begin(), other.end(), c.begin(), c.end())) {
            maximal = false;
            break;
          }
        if (maximal) cones.push_back(c);
      }
      out = make_fan(new_rank, images, cones);
      detail::require_simplicial_result(out, "contract");
    }
    step.result = build_variety(out);
  }
  check(step.result.class_rank == X.class_rank - 1,
        "contract: class rank did not drop by exactly one");
  return step;
}

// Wall-crossing re-triangulation across a flipping circuit: the cones built
// on the positive part of the relation are exchanged for those on the
// negative part, over every link the star carries.
inline ContractionStep toric_flip(const ToricVariety& X, const IntVec& ray) {
  if (X.fan.rank < 3) throw input_error("toric_flip: impossible below dimension 3");
  const auto ext = extremal_rays(X);
  const ExtremalRay& e = detail::find_extremal(ext, ray);
  if (e.kind != ContractionKind::flipping)
    throw input_error("toric_flip: ray class " + to_string(ray) + " is not flipping");

  const Fan& fan = X.fan;
  const IntVec& rel = X.wall_list[e.wall].relation;
  std::vector<int> circuit, pos, neg;
  for (size_t i = 0; i < rel.size(); ++i) {
    if (rel[i] == 0) continue;
    circuit.push_back(static_cast<int>(i));
    (rel[i] > 0 ? pos : neg).push_back(static_cast<int>(i));
  }

  std::set<std::vector<int>> old_cones, links;
  for (int j : pos) {
    std::vector<int> base;
    for (int idx : circuit)
      if (idx != j) base.push_back(idx);
    for (const auto& cone : fan.cones) {
      if (!std::includes(cone.begin(), cone.end(), base.begin(), base.end())) continue;
      std::vector<int> link;
      std::set_difference(cone.begin(), cone.end(), circuit.begin(), circuit.end(),
                          std::back_inserter(link));
      check(link.size() + base.size() == cone.size(),
            "toric_flip: star cone meets the omitted circuit ray");
      old_cones.insert(cone);
      links.insert(link);
    }
  }
  check(old_cones.size() == pos.size() * links.size(),
        "toric_flip: star is not the full product of positive rays and links");

  std::set<std::vector<int>> cones;
  for (const auto& cone : fan.cones)
    if (!old_cones.count(cone)) cones.insert(cone);
  for (int k : neg) {
    for (const auto& link : links) {
      std::vector<int> c = link;
      for (int idx : circuit)
        if (idx != k) c.push_back(idx);
      std::sort(c.begin(), c.end());
      cones.insert(c);
    }
  }

  ContractionStep step;
  step.kind = ContractionKind::flipping;
  step.ray = ray;
  step.source = X;
  step.circuit_relation = rel;
  Fan out = make_fan(fan.rank, fan.rays, {cones.begin(), cones.end()});
  detail::require_simplicial_result(out, "toric_flip");
  step.result = build_variety(out);
  step.lattice_map = IntMat::identity(fan.rank);
  check(step.result.fan.rays == fan.rays, "toric_flip: ray set changed");
  check(step.result.class_rank == X.class_rank, "toric_flip: class rank changed");
  return step;
}

namespace detail {

// Support-function pullback rows across a fan map: coordinates of the image
// of each source ray inside a containing cone of the target fan.
inline RatMat ray_coordinate_matrix(const Fan& source, const Fan& target, const IntMat& map) {
  RatMat P(source.rays.size(), target.rays.size());
  if (target.rank == 0) return P;
  for (size_t rp = 0; rp < source.rays.size(); ++rp) {
    RatVec image = to_rat(map * source.rays[rp]);
    bool placed = false;
    for (const auto& cone : target.cones) {
      auto coords = simplicial_coordinates(cone_rays(target, cone), image);
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
    check(placed, "ray_coordinate_matrix: ray image escapes the target fan");
  }
  return P;
}

// Class-level pullback of a fan map, target classes to source classes.
inline RatMat class_pullback(const ToricVariety& source, const ToricVariety& target,
                             const IntMat& map) {
  RatMat P = ray_coordinate_matrix(source.fan, target.fan, map);
  RatMat pi_s = to_rat(source.ray_to_class);
  RatMat Q = pi_s * P * to_rat(target.class_section);
  check(pi_s * P == Q * to_rat(target.ray_to_class), "class_pullback: projection mismatch");
  return Q;
}

}  // namespace detail

// Lift the endomorphism across a contraction skeleton: find the smallest
// iterate fixing the contracted class, then push the lattice map down.
inline ContractionStep descend(const ToricMorphism& f, const ContractionStep& skeleton) {
  if (!f.surjective) throw input_error("descend: endomorphism must be surjective");
  if (!(f.source.fan == skeleton.source.fan) || !(f.target.fan == skeleton.source.fan))
    throw input_error("descend: map is not an endomorphism of the step's source");

  PullbackAction act = pullback(f);
  RatMat curve_action = act.matrix.transpose();
  const auto ext = extremal_rays(skeleton.source);

  auto image_class = [&](const IntVec& c) {
    RatVec im = curve_action * to_rat(c);
    IntVec p = primitive(im);
    bool extremal = false;
    for (const auto& e : ext)
      if (e.ray == p) extremal = true;
    if (!extremal)
      throw input_error("descend: pullback does not permute the extremal rays (image of " +
                        to_string(c) + ")");
    return p;
  };

  int n = 1;
  IntVec c = image_class(skeleton.ray);
  while (!(c == skeleton.ray)) {
    c = image_class(c);
    ++n;
    check(n <= static_cast<int>(ext.size()), "descend: ray orbit exceeds the extremal set");
  }

  ContractionStep step = skeleton;
  step.iterate_exponent = n;
  IntMat Fn = mat_pow(f.lattice_map, n);
  step.source_iterate = Fn;
  IntMat G;
  if (step.kind == ContractionKind::fibering) {
    G = step.lattice_map * Fn * step.section;
    if (!(G * step.lattice_map == step.lattice_map * Fn))
      throw input_error("descend: iterate does not preserve the fiber sublattice");
  } else {
    G = Fn;
  }
  step.descended_map = validate_morphism(G, step.result.fan, step.result.fan);
  check(step.descended_map->surjective, "descend: descended map lost surjectivity");

  // equivariance through the contraction's class lattice map
  RatMat Qn = mat_pow(act.matrix, n);
  RatMat Qg = pullback(*step.descended_map).matrix;
  if (step.kind == ContractionKind::flipping) {
    check(step.result.ray_to_class == skeleton.source.ray_to_class,
          "descend: flip changed the class presentation");
    check(Qn == Qg, "descend: flip equivariance failed");
  } else {
    RatMat Qc = detail::class_pullback(skeleton.source, step.result, step.lattice_map);
    check(Qn * Qc == Qc * Qg, "descend: contraction equivariance failed");
  }
  return step;
}

enum class MMPStrategy { exhaustive, first_ray };

struct MMPTrace {
  std::vector<ContractionStep> steps;
  ToricVariety endpoint;
  std::optional<ToricMorphism> endpoint_map;  // the endomorphism carried to the endpoint
  bool tractable = false;
  bool standard = false;
  std::string endpoint_note;
  std::vector<std::pair<int, AlgebraicNumber>> per_step_degrees;  // (dim, lambda1) per stage
};

struct MMPRun {
  std::vector<MMPTrace> traces;
  bool branch_cap_hit = false;
};

struct MMPOptions {
  MMPStrategy strategy = MMPStrategy::exhaustive;
  size_t branch_cap = 256;
  int flip_cap = 64;
};

namespace detail {

inline std::string mmp_memo_key(const Fan& fan, const IntMat& map, int flips_left) {
  std::string key = fan_key(fan) + "#";
  for (const Int& x : map.a) key += x.get_str() + ",";
  key += "#" + std::to_string(flips_left);
  return key;
}

inline Int flip_potential(const IntVec& rel) {
  Int s = 0;
  for (const Int& c : rel) s += abs(c);
  return s;
}

}  // namespace detail

// Equivariant MMP driver. Branches over the K-negative extremal rays,
// descending the endomorphism across each contraction, until no such ray
// remains. Flips are attempted in order of decreasing circuit potential.
inline MMPRun run_mmp(const ToricVariety& X, const ToricMorphism& f, MMPOptions opt = {}) {
  if (!(f.source.fan == X.fan) || !(f.target.fan == X.fan))
    throw input_error("run_mmp: map is not an endomorphism of X");
  if (!f.surjective) throw input_error("run_mmp: endomorphism must be surjective");

  MMPRun run;
  std::map<std::string, std::vector<MMPTrace>> memo;
  size_t produced = 0;

  std::function<std::vector<MMPTrace>(const ToricVariety&, const ToricMorphism&, int, bool&)> go =
      [&](const ToricVariety& V, const ToricMorphism& g, int flips_left,
          bool& complete) -> std::vector<MMPTrace> {
    std::string key = detail::mmp_memo_key(V.fan, g.lattice_map, flips_left);
    if (auto it = memo.find(key); it != memo.end()) {
      produced += it->second.size();
      return it->second;
    }

    std::vector<ExtremalRay> candidates;
    for (const auto& e : extremal_rays(V))
      if (e.k_negative) candidates.push_back(e);

    if (candidates.empty()) {
      MMPTrace leaf;
      leaf.endpoint = V;
      leaf.endpoint_map = g;
      leaf.tractable = V.fan.rank == 0;
      leaf.endpoint_note = leaf.tractable ? "point" : "minimal, not certified Q-abelian";
      ++produced;
      memo[key] = {leaf};
      return {leaf};
    }

    auto potential = [&](const ExtremalRay& e) {
      return detail::flip_potential(V.wall_list[e.wall].relation);
    };
    std::sort(candidates.begin(), candidates.end(), [&](const auto& a, const auto& b) {
      if (a.kind == ContractionKind::flipping && b.kind == ContractionKind::flipping) {
        Int pa = potential(a), pb = potential(b);
        if (pa != pb) return pa > pb;
      }
      return a.ray < b.ray;
    });
    if (opt.strategy == MMPStrategy::first_ray) {
      auto first = *std::min_element(candidates.begin(), candidates.end(),
                                     [](const auto& a, const auto& b) { return a.ray < b.ray; });
      candidates = {first};
    }

    PullbackAction act = pullback(g);
    AlgebraicNumber stage_degree = dynamical_degree(act);
    int stage_dim = V.fan.rank;

    std::vector<MMPTrace> out;
    bool all_complete = true;
    for (const auto& e : candidates) {
      if (produced >= opt.branch_cap) {
        run.branch_cap_hit = true;
        all_complete = false;
        break;
      }
      if (e.kind == ContractionKind::flipping && flips_left == 0)
        throw resource_cap("run_mmp: flip bound exceeded, sequence may not terminate");
      ContractionStep skeleton =
          e.kind == ContractionKind::flipping ? toric_flip(V, e.ray) : contract(V, e.ray);
      ContractionStep step = descend(g, skeleton);
      int next_flips = flips_left - (e.kind == ContractionKind::flipping ? 1 : 0);
      bool sub_complete = true;
      auto subs = go(step.result, *step.descended_map, next_flips, sub_complete);
      all_complete = all_complete && sub_complete;
      for (const auto& sub : subs) {
        MMPTrace t;
        t.steps.push_back(step);
        t.steps.insert(t.steps.end(), sub.steps.begin(), sub.steps.end());
        t.endpoint = sub.endpoint;
        t.endpoint_map = sub.endpoint_map;
        t.tractable = sub.tractable;
        t.endpoint_note = sub.endpoint_note;
        t.per_step_degrees.emplace_back(stage_dim, stage_degree);
        t.per_step_degrees.insert(t.per_step_degrees.end(), sub.per_step_degrees.begin(),
                                  sub.per_step_degrees.end());
        out.push_back(std::move(t));
      }
    }
    complete = all_complete;
    if (all_complete) memo[key] = out;
    return out;
  };

  bool complete = true;
  run.traces = go(X, f, opt.flip_cap, complete);
  for (auto& t : run.traces) {
    size_t fib = 0;
    for (const auto& s : t.steps)
      if (s.kind == ContractionKind::fibering) ++fib;
    t.standard =
        fib == 0 || (fib == 1 && !t.steps.empty() && t.steps.back().kind == ContractionKind::fibering);
  }
  return run;
}

struct PrimordialDegrees {
  bool finite = false;  // false reports the "infinite" sentinel: no tractable trace
  std::optional<AlgebraicNumber> under, over;
  std::optional<size_t> under_trace, over_trace;  // witness indices into the trace list
};

// Degree of the stage feeding the final collapse to the point, extremized
// over the tractable traces.
inline PrimordialDegrees primordial_degrees(const std::vector<MMPTrace>& traces) {
  PrimordialDegrees out;
  for (size_t i = 0; i < traces.size(); ++i) {
    const auto& t = traces[i];
    if (!t.tractable) continue;
    // a trace starting at the point has the trivial map as its own ancestor
    AlgebraicNumber l = t.steps.empty() ? AlgebraicNumber::rational(Rat(1))
                                        : t.per_step_degrees.back().second;
    if (!out.finite) {
      out.under = l;
      out.over = l;
      out.under_trace = i;
      out.over_trace = i;
      out.finite = true;
      continue;
    }
    if (l < *out.under) {
      out.under = l;
      out.under_trace = i;
    }
    if (*out.over < l) {
      out.over = l;
      out.over_trace = i;
    }
  }
  return out;
}

inline PrimordialDegrees primordial_degrees(const ToricVariety& X, const ToricMorphism& f) {
  return primordial_degrees(run_mmp(X, f).traces);
}

}  // namespace toridyn
