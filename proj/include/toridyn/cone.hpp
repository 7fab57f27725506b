#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "toridyn/arith.hpp"
#include "toridyn/feasibility.hpp"
#include "toridyn/matrix.hpp"
#include "toridyn/snf.hpp"

namespace toridyn {

// Rational polyhedral cone given by an irredundant list of primitive ray
// generators, kept lex-sorted for value equality.
struct RationalCone {
  int ambient = 0;
  std::vector<IntVec> rays;
  bool operator==(const RationalCone&) const = default;
};

namespace detail {

inline std::vector<IntVec> canonical_rays(int ambient, std::vector<IntVec> rays) {
  for (auto& r : rays) {
    require(static_cast<int>(r.size()) == ambient, "cone: ray dimension mismatch");
    r = primitive(r);
    require(!is_zero(r), "cone: zero ray");
  }
  std::sort(rays.begin(), rays.end(), lex_less);
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  return rays;
}

inline RatMat ray_column_matrix(const std::vector<IntVec>& rays, int ambient) {
  RatMat A(ambient, rays.size());
  for (size_t j = 0; j < rays.size(); ++j)
    for (int i = 0; i < ambient; ++i) A.at(i, j) = Rat(rays[j][i]);
  return A;
}

}  // namespace detail

inline RationalCone make_cone(int ambient, std::vector<IntVec> rays) {
  require(ambient >= 0, "cone: negative ambient rank");
  rays = detail::canonical_rays(ambient, std::move(rays));
  for (size_t i = 0; i < rays.size(); ++i) {
    std::vector<IntVec> others;
    for (size_t j = 0; j < rays.size(); ++j)
      if (j != i) others.push_back(rays[j]);
    if (in_cone(others, to_rat_vec(rays[i])))
      throw input_error("cone: generator " + to_string(rays[i]) +
                        " is redundant (nonnegative combination of the others)");
  }
  return {ambient, std::move(rays)};
}

inline bool cone_is_simplicial(const RationalCone& c) {
  if (c.rays.empty()) return true;
  IntMat A(c.rays.size(), c.ambient);
  for (size_t i = 0; i < c.rays.size(); ++i)
    for (int j = 0; j < c.ambient; ++j) A.at(i, j) = c.rays[i][j];
  return rank(A) == c.rays.size();
}

// Coordinates of x in a cone with linearly independent rays, or nothing when
// x is outside the span. Membership holds iff all coordinates are >= 0.
inline std::optional<RatVec> simplicial_coordinates(const std::vector<IntVec>& rays,
                                                    const RatVec& x) {
  if (rays.empty()) {
    for (const Rat& v : x)
      if (v != 0) return std::nullopt;
    return RatVec{};
  }
  RatMat A = detail::ray_column_matrix(rays, static_cast<int>(x.size()));
  return try_solve(A, x);
}

inline bool simplicial_cone_contains(const std::vector<IntVec>& rays, const RatVec& x) {
  auto c = simplicial_coordinates(rays, x);
  if (!c) return false;
  for (const Rat& v : *c)
    if (v < 0) return false;
  return true;
}

// Extreme rays of the dual cone {y : <g, y> >= 0 for all g}, by double
// description. Requires the generators to span the ambient space and the cone
// they generate to be pointed, so the dual is full-dimensional and pointed;
// callers establish pointedness (projectivity) before dualizing.
inline std::vector<IntVec> dual_cone_rays(std::vector<IntVec> gens, int ambient) {
  gens = detail::canonical_rays(ambient, std::move(gens));
  check(!gens.empty(), "dual_cone_rays: no generators");
  {
    IntMat G(gens.size(), ambient);
    for (size_t i = 0; i < gens.size(); ++i)
      for (int j = 0; j < ambient; ++j) G.at(i, j) = gens[i][j];
    check(rank(G) == static_cast<size_t>(ambient), "dual_cone_rays: generators must span");
  }

  // greedy independent subset for the simplicial start
  std::vector<size_t> base;
  {
    IntMat acc(0, ambient);
    for (size_t i = 0; i < gens.size() && base.size() < static_cast<size_t>(ambient); ++i) {
      IntMat trial(acc.rows + 1, ambient);
      for (size_t r = 0; r < acc.rows; ++r)
        for (int j = 0; j < ambient; ++j) trial.at(r, j) = acc.at(r, j);
      for (int j = 0; j < ambient; ++j) trial.at(acc.rows, j) = gens[i][j];
      if (rank(trial) == trial.rows) {
        acc = trial;
        base.push_back(i);
      }
    }
  }
  check(base.size() == static_cast<size_t>(ambient), "dual_cone_rays: base selection failed");

  RatMat A0(ambient, ambient);
  for (int i = 0; i < ambient; ++i)
    for (int j = 0; j < ambient; ++j) A0.at(i, j) = Rat(gens[base[i]][j]);
  RatMat inv = inverse(A0);

  std::vector<IntVec> rays;
  for (int j = 0; j < ambient; ++j) {
    RatVec col(ambient);
    for (int i = 0; i < ambient; ++i) col[i] = inv.at(i, j);
    rays.push_back(primitive(col));
  }

  std::vector<IntVec> processed;
  for (size_t i : base) processed.push_back(gens[i]);

  for (size_t i = 0; i < gens.size(); ++i) {
    if (std::find(base.begin(), base.end(), i) != base.end()) continue;
    const IntVec& a = gens[i];
    std::vector<IntVec> keep, posr, negr;
    for (const IntVec& r : rays) {
      int s = sign_of(dot(a, r));
      if (s >= 0) keep.push_back(r);
      if (s > 0) posr.push_back(r);
      if (s < 0) negr.push_back(r);
    }
    if (!negr.empty()) {
      // adjacency: constraints processed so far that are tight at both rays
      // must span a codimension-2 subspace
      auto adjacent = [&](const IntVec& p, const IntVec& q) {
        std::vector<IntVec> tight;
        for (const IntVec& c : processed)
          if (dot(c, p) == 0 && dot(c, q) == 0) tight.push_back(c);
        if (tight.size() < static_cast<size_t>(ambient) - 2) return false;
        IntMat T(tight.size(), ambient);
        for (size_t r = 0; r < tight.size(); ++r)
          for (int j = 0; j < ambient; ++j) T.at(r, j) = tight[r][j];
        return rank(T) == static_cast<size_t>(ambient) - 2;
      };
      for (const IntVec& p : posr) {
        for (const IntVec& q : negr) {
          if (ambient > 1 && !adjacent(p, q)) continue;
          Int cp = dot(a, p), cq = dot(a, q);
          IntVec w(ambient);
          for (int j = 0; j < ambient; ++j) w[j] = cp * q[j] - cq * p[j];
          keep.push_back(primitive(w));
        }
      }
      std::sort(keep.begin(), keep.end(), lex_less);
      keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
      rays = std::move(keep);
    }
    processed.push_back(a);
  }

  std::sort(rays.begin(), rays.end(), lex_less);
  return rays;
}

}  // namespace toridyn
