#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

#include "toridyn/cone.hpp"
#include "toridyn/feasibility.hpp"
#include "toridyn/matrix.hpp"
#include "toridyn/snf.hpp"

namespace toridyn {

// A fan in canonical form: primitive rays sorted lexicographically, maximal
// cones as sorted ray-index lists, the cone list itself sorted. The rank-0
// fan with one empty cone is the point.
struct Fan {
  int rank = 0;
  std::vector<IntVec> rays;
  std::vector<std::vector<int>> cones;
  bool operator==(const Fan&) const = default;
};

inline Fan make_fan(int rank, std::vector<IntVec> rays, std::vector<std::vector<int>> cones) {
  require(rank >= 0, "fan: negative rank");
  if (rank == 0) {
    require(rays.empty(), "fan: rank-0 fan cannot have rays");
    require(cones == std::vector<std::vector<int>>{{}}, "fan: the point fan has one empty cone");
    return {0, {}, {{}}};
  }
  require(!cones.empty(), "fan: no cones");

  // primitivize and dedup rays, remembering where each input ray went
  std::vector<IntVec> prim;
  prim.reserve(rays.size());
  for (auto& r : rays) {
    require(static_cast<int>(r.size()) == rank, "fan: ray dimension mismatch");
    IntVec p = primitive(r);
    require(!is_zero(p), "fan: zero ray");
    prim.push_back(std::move(p));
  }
  std::vector<IntVec> sorted = prim;
  std::sort(sorted.begin(), sorted.end(), lex_less);
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  auto new_index = [&](const IntVec& v) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), v, lex_less);
    return static_cast<int>(it - sorted.begin());
  };

  std::vector<std::vector<int>> remapped;
  for (const auto& cone : cones) {
    std::vector<int> c;
    for (int idx : cone) {
      require(idx >= 0 && idx < static_cast<int>(prim.size()), "fan: cone ray index out of range");
      c.push_back(new_index(prim[idx]));
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    require(!c.empty(), "fan: empty cone in a positive-rank fan");
    remapped.push_back(std::move(c));
  }
  std::sort(remapped.begin(), remapped.end());
  remapped.erase(std::unique(remapped.begin(), remapped.end()), remapped.end());

  // maximality: no listed cone inside another
  for (size_t i = 0; i < remapped.size(); ++i)
    for (size_t j = 0; j < remapped.size(); ++j) {
      if (i == j) continue;
      if (std::includes(remapped[j].begin(), remapped[j].end(), remapped[i].begin(),
                        remapped[i].end()))
        throw input_error("fan: cone contained in another maximal cone");
    }

  // every ray must be used
  std::vector<bool> used(sorted.size(), false);
  for (const auto& c : remapped)
    for (int idx : c) used[idx] = true;
  for (size_t i = 0; i < used.size(); ++i)
    require(used[i], "fan: ray " + to_string(sorted[i]) + " lies in no cone");

  // per-cone generator irredundancy (each listed generator is extreme)
  for (const auto& c : remapped) {
    std::vector<IntVec> cr;
    for (int idx : c) cr.push_back(sorted[idx]);
    make_cone(rank, cr);
  }

  return {rank, std::move(sorted), std::move(remapped)};
}

inline std::vector<IntVec> cone_rays(const Fan& fan, const std::vector<int>& cone) {
  std::vector<IntVec> out;
  out.reserve(cone.size());
  for (int idx : cone) out.push_back(fan.rays[idx]);
  return out;
}

inline bool is_simplicial(const Fan& fan) {
  if (fan.rank == 0) return true;
  for (const auto& c : fan.cones) {
    if (c.size() != static_cast<size_t>(fan.rank)) return false;
    RationalCone rc{fan.rank, cone_rays(fan, c)};
    if (!cone_is_simplicial(rc)) return false;
  }
  return true;
}

// Pairwise common-face check. Each cone must be simplicial so that membership
// coordinates are unique; the supported pipeline is Q-factorial anyway. On
// failure the offending cone pair is reported through `offending` if given.
inline bool is_fan(const Fan& fan, std::pair<size_t, size_t>* offending = nullptr) {
  if (fan.rank == 0) return true;
  for (const auto& c : fan.cones) {
    RationalCone rc{fan.rank, cone_rays(fan, c)};
    if (!cone_is_simplicial(rc))
      throw unsupported_geometry("is_fan: non-simplicial cone " + to_string(c) +
                                 " is outside the Q-factorial pipeline");
  }
  for (size_t i = 0; i < fan.cones.size(); ++i) {
    for (size_t j = i + 1; j < fan.cones.size(); ++j) {
      const auto& sigma = fan.cones[i];
      const auto& tau = fan.cones[j];
      std::vector<int> common;
      std::set_intersection(sigma.begin(), sigma.end(), tau.begin(), tau.end(),
                            std::back_inserter(common));
      // sigma cap tau must equal cone(common): no point of the intersection
      // may use a sigma-ray outside the common set
      for (size_t s = 0; s < sigma.size(); ++s) {
        if (std::binary_search(common.begin(), common.end(), sigma[s])) continue;
        size_t ns = sigma.size(), nt = tau.size();
        std::vector<LinearConstraint> sys;
        for (int d = 0; d < fan.rank; ++d) {
          RatVec row(ns + nt, Rat(0));
          for (size_t k = 0; k < ns; ++k) row[k] = Rat(fan.rays[sigma[k]][d]);
          for (size_t k = 0; k < nt; ++k) row[ns + k] = -Rat(fan.rays[tau[k]][d]);
          add_equality(sys, row, Rat(0));
        }
        for (size_t k = 0; k < ns + nt; ++k) {
          RatVec row(ns + nt, Rat(0));
          row[k] = 1;
          sys.push_back({std::move(row), Rat(0), false});
        }
        RatVec extra(ns + nt, Rat(0));
        extra[s] = 1;
        sys.push_back({std::move(extra), Rat(1), false});
        if (feasibility(sys, ns + nt).feasible) {
          if (offending) *offending = {i, j};
          return false;
        }
      }
    }
  }
  return true;
}

namespace detail {

struct FacetUse {
  int cone_index;
  int opposite_ray;
};

// facet (as sorted ray-index list) -> the maximal cones it bounds
inline std::map<std::vector<int>, std::vector<FacetUse>> facet_table(const Fan& fan) {
  std::map<std::vector<int>, std::vector<FacetUse>> table;
  for (size_t ci = 0; ci < fan.cones.size(); ++ci) {
    const auto& c = fan.cones[ci];
    for (size_t drop = 0; drop < c.size(); ++drop) {
      std::vector<int> facet;
      for (size_t k = 0; k < c.size(); ++k)
        if (k != drop) facet.push_back(c[k]);
      table[facet].push_back({static_cast<int>(ci), c[drop]});
    }
  }
  return table;
}

}  // namespace detail

// Complete = support is the whole space. For a valid pure simplicial fan this
// is exactly "no free facet": every codimension-1 face bounds two cones.
inline bool is_complete(const Fan& fan) {
  if (fan.rank == 0) return true;
  for (const auto& c : fan.cones) {
    if (c.size() != static_cast<size_t>(fan.rank)) return false;
    RationalCone rc{fan.rank, cone_rays(fan, c)};
    if (!cone_is_simplicial(rc)) return false;
  }
  for (const auto& [facet, uses] : detail::facet_table(fan))
    if (uses.size() != 2) return false;
  return true;
}

// A wall of a complete simplicial fan: a codimension-1 cone shared by two
// maximal cones, together with the primitive relation among the circuit rays
// (the wall rays plus the two opposite rays), normalized so the opposite-ray
// coefficients are positive. The relation vector is indexed by the full ray
// list and vanishes off the circuit.
struct Wall {
  std::vector<int> wall_rays;
  int cone_a = -1, cone_b = -1;
  int opp_a = -1, opp_b = -1;
  IntVec relation;
};

inline std::vector<Wall> walls(const Fan& fan) {
  if (!is_fan(fan)) throw unsupported_geometry("walls: not a fan");
  if (!is_simplicial(fan)) throw unsupported_geometry("walls: fan is not simplicial");
  if (!is_complete(fan)) throw unsupported_geometry("walls: fan is not complete");
  std::vector<Wall> out;
  if (fan.rank == 0) return out;
  for (const auto& [facet, uses] : detail::facet_table(fan)) {
    check(uses.size() == 2, "walls: facet not shared by two cones");
    Wall w;
    w.wall_rays = facet;
    w.cone_a = uses[0].cone_index;
    w.cone_b = uses[1].cone_index;
    w.opp_a = uses[0].opposite_ray;
    w.opp_b = uses[1].opposite_ray;
    if (w.opp_a > w.opp_b) {
      std::swap(w.opp_a, w.opp_b);
      std::swap(w.cone_a, w.cone_b);
    }

    std::vector<int> circuit = facet;
    circuit.push_back(w.opp_a);
    circuit.push_back(w.opp_b);
    IntMat A(fan.rank, circuit.size());
    for (size_t j = 0; j < circuit.size(); ++j)
      for (int i = 0; i < fan.rank; ++i) A.at(i, j) = fan.rays[circuit[j]][i];
    IntMat ker = kernel_basis(A);
    check(ker.rows == 1, "walls: circuit relation is not one-dimensional");
    IntVec coeffs = ker.row(0);
    coeffs = primitive(coeffs);
    size_t pa = circuit.size() - 2, pb = circuit.size() - 1;
    check(coeffs[pa] != 0 && coeffs[pb] != 0, "walls: opposite ray missing from relation");
    if (coeffs[pa] < 0) coeffs = neg(coeffs);
    check(coeffs[pb] > 0, "walls: opposite-ray coefficients disagree in sign");

    w.relation.assign(fan.rays.size(), Int(0));
    for (size_t j = 0; j < circuit.size(); ++j) w.relation[circuit[j]] = coeffs[j];
    // exact sanity: the relation really kills the rays
    for (int d = 0; d < fan.rank; ++d) {
      Int s = 0;
      for (size_t r = 0; r < fan.rays.size(); ++r) s += w.relation[r] * fan.rays[r][d];
      check(s == 0, "walls: relation does not vanish on the rays");
    }
    out.push_back(std::move(w));
  }
  return out;
}

// Stable one-line serialization, used for memoization keys and diagnostics.
inline std::string fan_key(const Fan& fan) {
  std::ostringstream os;
  os << fan.rank << "|";
  for (const auto& r : fan.rays) os << to_string(r) << ";";
  os << "|";
  for (const auto& c : fan.cones) os << to_string(c) << ";";
  return os.str();
}

}  // namespace toridyn
