#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "toridyn/toric.hpp"

using namespace toridyn;

namespace {

Fan p2_fan() {
  return make_fan(2, {IntVec{1, 0}, IntVec{0, 1}, IntVec{-1, -1}}, {{0, 1}, {1, 2}, {0, 2}});
}

Fan p1p1_fan() {
  return make_fan(2, {IntVec{1, 0}, IntVec{0, 1}, IntVec{-1, 0}, IntVec{0, -1}},
                  {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

Fan f1_fan() {
  return make_fan(2, {IntVec{1, 0}, IntVec{0, 1}, IntVec{1, 1}, IntVec{-1, -1}},
                  {{0, 2}, {1, 2}, {1, 3}, {0, 3}});
}

Fan p1_fan() { return make_fan(1, {IntVec{1}, IntVec{-1}}, {{0}, {1}}); }

Fan point_fan() { return make_fan(0, {}, {{}}); }

IntMat diag2(long a, long b) {
  IntMat m(2, 2);
  m.at(0, 0) = a;
  m.at(1, 1) = b;
  return m;
}

std::vector<IntVec> cube_rays() {
  std::vector<IntVec> rays;
  for (int b = 0; b < 8; ++b)
    rays.push_back(IntVec{Int(b & 1 ? 1 : -1), Int(b & 2 ? 1 : -1), Int(b & 4 ? 1 : -1)});
  return rays;
}

}  // namespace

TEST_CASE("cone construction validates generators") {
  auto c = make_cone(2, {IntVec{2, 0}, IntVec{0, 3}});
  CHECK(c.rays == std::vector<IntVec>{IntVec{0, 1}, IntVec{1, 0}});
  CHECK(cone_is_simplicial(c));

  // middle generator is a nonnegative combination of the outer two
  CHECK_THROWS_AS(make_cone(2, {IntVec{1, 0}, IntVec{1, 2}, IntVec{0, 1}}), input_error);
  CHECK_THROWS_AS(make_cone(2, {IntVec{0, 0}}), input_error);

  auto sq = make_cone(3, {IntVec{1, 0, 1}, IntVec{0, 1, 1}, IntVec{-1, 0, 1}, IntVec{0, -1, 1}});
  CHECK(sq.rays.size() == 4);
  CHECK_FALSE(cone_is_simplicial(sq));
}

TEST_CASE("cone membership") {
  std::vector<IntVec> quad = {IntVec{1, 0}, IntVec{1, 2}};
  CHECK(in_cone(quad, to_rat_vec(IntVec{2, 1})));
  CHECK(in_cone(quad, to_rat_vec(IntVec{1, 2})));
  CHECK_FALSE(in_cone(quad, to_rat_vec(IntVec{0, 1})));
  CHECK_FALSE(in_cone(quad, to_rat_vec(IntVec{-1, 0})));
  CHECK(simplicial_cone_contains(quad, to_rat_vec(IntVec{3, 2})));
  CHECK_FALSE(simplicial_cone_contains(quad, to_rat_vec(IntVec{0, 1})));
}

TEST_CASE("dual cone via double description") {
  CHECK(dual_cone_rays({IntVec{1, 0}, IntVec{0, 1}}, 2) ==
        std::vector<IntVec>{IntVec{0, 1}, IntVec{1, 0}});
  CHECK(dual_cone_rays({IntVec{1, 0}, IntVec{1, 2}}, 2) ==
        std::vector<IntVec>{IntVec{0, 1}, IntVec{2, -1}});
  // non-simplicial input: cone over a square
  auto d = dual_cone_rays({IntVec{1, 0, 1}, IntVec{0, 1, 1}, IntVec{-1, 0, 1}, IntVec{0, -1, 1}},
                          3);
  CHECK(d == std::vector<IntVec>{IntVec{-1, -1, 1}, IntVec{-1, 1, 1}, IntVec{1, -1, 1},
                                 IntVec{1, 1, 1}});
  CHECK(dual_cone_rays({IntVec{1}}, 1) == std::vector<IntVec>{IntVec{1}});
}

TEST_CASE("dual cone double dualization is the identity") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> d(-4, 4);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<IntVec> gens;
    for (int i = 0; i < 5; ++i) gens.push_back(IntVec{Int(d(rng)), Int(d(rng)), Int(d(rng))});
    // keep only spanning, pointed samples: add the positivity check used by
    // the library itself (a strictly positive functional exists)
    IntMat m(5, 3);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 3; ++j) m.at(i, j) = gens[i][j];
    bool zero = false;
    for (auto& g : gens)
      if (is_zero(g)) zero = true;
    if (zero || rank(m) < 3 || !strict_positivity(gens, 3).feasible) continue;
    auto dual = dual_cone_rays(gens, 3);
    auto back = dual_cone_rays(dual, 3);
    // the double dual equals the cone generated by gens: same ray set after
    // dropping duplicate directions and redundant generators
    std::vector<IntVec> uniq;
    for (const auto& g : gens) uniq.push_back(primitive(g));
    std::sort(uniq.begin(), uniq.end(), lex_less);
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    std::vector<IntVec> reduced;
    for (size_t i = 0; i < uniq.size(); ++i) {
      std::vector<IntVec> others;
      for (size_t j = 0; j < uniq.size(); ++j)
        if (j != i) others.push_back(uniq[j]);
      if (!in_cone(others, to_rat_vec(uniq[i]))) reduced.push_back(uniq[i]);
    }
    CHECK(back == reduced);
  }
}

TEST_CASE("linear feasibility with certificates") {
  // x >= 1, -x >= 0 is infeasible; the Farkas combination must be checkable
  std::vector<LinearConstraint> sys;
  sys.push_back({{Rat(1)}, Rat(1), false});
  sys.push_back({{Rat(-1)}, Rat(0), false});
  auto r = feasibility(sys, 1);
  CHECK_FALSE(r.feasible);
  REQUIRE(r.farkas.size() == 2);
  Rat comb = r.farkas[0] * Rat(1) + r.farkas[1] * Rat(-1);
  Rat rhs = r.farkas[0] * Rat(1) + r.farkas[1] * Rat(0);
  CHECK(comb == 0);
  CHECK(rhs > 0);

  // strict system with a witness
  std::vector<LinearConstraint> s2;
  s2.push_back({{Rat(1), Rat(1)}, Rat(1), true});
  s2.push_back({{Rat(-1), Rat(2)}, Rat(0), false});
  auto r2 = feasibility(s2, 2);
  REQUIRE(r2.feasible);
  CHECK(r2.witness[0] + r2.witness[1] > 1);
  CHECK(-r2.witness[0] + 2 * r2.witness[1] >= 0);
}

TEST_CASE("strict positivity and the alternative") {
  auto ok = strict_positivity({IntVec{1, 0}, IntVec{0, 1}, IntVec{1, 1}}, 2);
  REQUIRE(ok.feasible);
  for (const auto& g : {IntVec{1, 0}, IntVec{0, 1}, IntVec{1, 1}})
    CHECK(dot(to_rat(g), ok.witness) > 0);

  auto bad = strict_positivity({IntVec{1, 0}, IntVec{-1, 0}, IntVec{0, 1}}, 2);
  REQUIRE_FALSE(bad.feasible);
  CHECK(bad.certificate == IntVec{1, 1, 0});
}

TEST_CASE("fan construction rejects malformed input") {
  CHECK_THROWS_AS(make_fan(2, {IntVec{1, 0}, IntVec{0, 1}}, {{0}}), input_error);  // unused ray
  CHECK_THROWS_AS(make_fan(2, {IntVec{1, 0}, IntVec{0, 1}}, {{0, 1}, {0}}), input_error);
  CHECK_THROWS_AS(make_fan(2, {IntVec{1, 0}, IntVec{1, 2}, IntVec{0, 1}}, {{0, 1, 2}}),
                  input_error);  // redundant generator inside one cone
  CHECK_THROWS_AS(make_fan(2, {IntVec{0, 0}, IntVec{1, 0}}, {{0, 1}}), input_error);
  CHECK_THROWS_AS(make_fan(0, {}, {}), input_error);

  // rays are primitivized and deduplicated, cone indices remapped
  Fan f = make_fan(2, {IntVec{2, 0}, IntVec{0, 3}, IntVec{0, 1}, IntVec{-2, -2}},
                   {{0, 1}, {2, 3}, {0, 3}});
  CHECK(f.rays == std::vector<IntVec>{IntVec{-1, -1}, IntVec{0, 1}, IntVec{1, 0}});
  CHECK(f.cones == std::vector<std::vector<int>>{{0, 1}, {0, 2}, {1, 2}});
}

TEST_CASE("fan predicates on the standard corpus") {
  CHECK(is_fan(p2_fan()));
  CHECK(is_simplicial(p2_fan()));
  CHECK(is_complete(p2_fan()));
  CHECK(is_fan(p1p1_fan()));
  CHECK(is_complete(p1p1_fan()));
  CHECK(is_fan(f1_fan()));
  CHECK(is_complete(f1_fan()));
  CHECK(is_fan(p1_fan()));
  CHECK(is_complete(p1_fan()));
  CHECK(is_fan(point_fan()));
  CHECK(is_complete(point_fan()));

  // a single quadrant is a fan but not complete
  Fan quad = make_fan(2, {IntVec{1, 0}, IntVec{0, 1}}, {{0, 1}});
  CHECK(is_fan(quad));
  CHECK_FALSE(is_complete(quad));

  // overlapping cones are not a fan
  Fan bad{2, {IntVec{0, 1}, IntVec{1, 0}, IntVec{1, 2}}, {{1, 2}, {0, 1}}};
  CHECK_FALSE(is_fan(bad));
}

TEST_CASE("wall relations of the projective plane") {
  auto W = walls(p2_fan());
  REQUIRE(W.size() == 3);
  for (const auto& w : W) {
    CHECK(w.relation == IntVec{1, 1, 1});
    CHECK(w.wall_rays.size() == 1);
  }
}

TEST_CASE("wall relations of the product of lines") {
  auto W = walls(p1p1_fan());
  REQUIRE(W.size() == 4);
  for (const auto& w : W) {
    Int pos = 0, total = 0;
    for (const auto& c : w.relation) {
      if (c > 0) pos += c;
      total += (c != 0) ? Int(1) : Int(0);
    }
    CHECK(pos == 2);    // two opposite rays, coefficient one each
    CHECK(total == 2);  // wall ray coefficients vanish
  }
  auto W1 = walls(p1_fan());
  REQUIRE(W1.size() == 1);
  CHECK(W1[0].relation == IntVec{1, 1});
  CHECK(walls(point_fan()).empty());
}

TEST_CASE("projective plane class data") {
  auto X = build_variety(p2_fan());
  CHECK(X.class_rank == 1);
  CHECK(X.torsion.empty());
  CHECK(X.mori_generators == std::vector<IntVec>{IntVec{1}});
  CHECK(X.nef_rays == std::vector<IntVec>{IntVec{1}});
  CHECK(canonical_class(X) == IntVec{-3});
  for (const auto& w : X.wall_list) {
    CHECK(intersect_wall_curve(X, w, X.canonical) == Rat(-3));
    CHECK(intersect_wall_curve(X, w, IntVec{1}) == Rat(1));
  }
}

TEST_CASE("product of lines class data") {
  auto X = build_variety(p1p1_fan());
  CHECK(X.class_rank == 2);
  CHECK(X.torsion.empty());
  CHECK(X.mori_generators == std::vector<IntVec>{IntVec{0, 1}, IntVec{1, 0}});
  CHECK(X.nef_rays == std::vector<IntVec>{IntVec{0, 1}, IntVec{1, 0}});
  CHECK(canonical_class(X) == IntVec{-2, -2});
  for (const auto& w : X.wall_list) CHECK(intersect_wall_curve(X, w, X.canonical) == Rat(-2));
  // a ruling class meets one ruling in a point and the other not at all
  int ones = 0, zeros = 0;
  for (const auto& w : X.wall_list) {
    Rat v = intersect_wall_curve(X, w, IntVec{1, 0});
    if (v == 1) ++ones;
    if (v == 0) ++zeros;
  }
  CHECK(ones == 2);
  CHECK(zeros == 2);
}

TEST_CASE("Hirzebruch surface class data") {
  auto X = build_variety(f1_fan());
  CHECK(X.class_rank == 2);
  // torus-invariant curves: the -1 section, two fibers, the +1 section
  std::vector<Rat> kc;
  for (const auto& w : X.wall_list) kc.push_back(intersect_wall_curve(X, w, X.canonical));
  std::sort(kc.begin(), kc.end());
  CHECK(kc == std::vector<Rat>{Rat(-3), Rat(-2), Rat(-2), Rat(-1)});
  // the Mori cone is spanned by two of the three distinct wall classes
  CHECK(X.mori_generators.size() == 3);
}

TEST_CASE("line and point class data") {
  auto X = build_variety(p1_fan());
  CHECK(X.class_rank == 1);
  CHECK(canonical_class(X) == IntVec{-2});
  CHECK(X.mori_generators == std::vector<IntVec>{IntVec{1}});
  CHECK(X.nef_rays == std::vector<IntVec>{IntVec{1}});

  auto pt = build_variety(point_fan());
  CHECK(pt.class_rank == 0);
  CHECK(pt.wall_list.empty());
  CHECK(pt.nef_rays.empty());
  CHECK(pt.canonical.empty());
}

TEST_CASE("class group torsion is recorded") {
  // fan over the square's vertices: rays generate an index-2 sublattice
  Fan f = make_fan(2, {IntVec{1, 1}, IntVec{1, -1}, IntVec{-1, 1}, IntVec{-1, -1}},
                   {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  auto X = build_variety(f);
  CHECK(X.class_rank == 2);
  CHECK(X.torsion == std::vector<Int>{Int(2)});
  CHECK(canonical_class(X) == IntVec{-2, -2});
  for (const auto& w : X.wall_list) CHECK(intersect_wall_curve(X, w, X.canonical) == Rat(-2));
}

TEST_CASE("build rejects incomplete and overlapping fans") {
  Fan quad = make_fan(2, {IntVec{1, 0}, IntVec{0, 1}}, {{0, 1}});
  CHECK_THROWS_AS(build_variety(quad), input_error);
  Fan bad{2, {IntVec{0, 1}, IntVec{1, 0}, IntVec{1, 2}}, {{1, 2}, {0, 1}}};
  CHECK_THROWS_AS(build_variety(bad), input_error);
}

TEST_CASE("twisted cube triangulation is not projective") {
  // cube-vertex fan whose face diagonals are chosen cyclically; four wall
  // curve classes sum to zero, so no class is positive on the Mori cone
  Fan f = make_fan(3, cube_rays(),
                   {{0, 1, 3},
                    {0, 1, 4},
                    {0, 2, 3},
                    {0, 2, 4},
                    {1, 3, 5},
                    {1, 4, 5},
                    {2, 3, 7},
                    {2, 4, 6},
                    {2, 6, 7},
                    {3, 5, 7},
                    {4, 5, 6},
                    {5, 6, 7}});
  CHECK(is_fan(f));
  CHECK(is_complete(f));
  CHECK_THROWS_WITH(build_variety(f), Catch::Matchers::ContainsSubstring("not projective"));

  // coherent diagonals give a projective variety on the same rays
  int faces[6][4] = {{1, 3, 7, 5}, {0, 2, 6, 4}, {2, 3, 7, 6},
                     {0, 1, 5, 4}, {4, 5, 7, 6}, {0, 1, 3, 2}};
  std::vector<std::vector<int>> cones;
  for (auto& q : faces) {
    cones.push_back({q[0], q[1], q[3]});
    cones.push_back({q[1], q[2], q[3]});
  }
  auto X = build_variety(make_fan(3, cube_rays(), cones));
  CHECK(X.class_rank == 5);
  CHECK(X.nef_rays.size() == 6);
}

TEST_CASE("nef and Mori cones are exactly dual") {
  for (const Fan& f : {p2_fan(), p1p1_fan(), f1_fan()}) {
    auto X = build_variety(f);
    for (const auto& n : X.nef_rays)
      for (const auto& c : X.mori_generators) CHECK(dot(n, c) >= 0);
    // dualizing the nef cone returns the Mori generators that are extreme
    auto back = dual_cone_rays(X.nef_rays, X.class_rank);
    for (const auto& b : back) {
      bool found = false;
      for (const auto& c : X.mori_generators)
        if (b == c) found = true;
      CHECK(found);
    }
  }
}

TEST_CASE("morphism validation") {
  auto m = validate_morphism(diag2(2, 2), p2_fan(), p2_fan());
  CHECK(m.surjective);
  auto id = validate_morphism(IntMat::identity(2), p2_fan(), p2_fan());
  CHECK(id.surjective);

  // collapse onto the first factor: a genuine morphism, but not surjective
  IntMat collapse(2, 2);
  collapse.at(0, 0) = 1;
  auto mz = validate_morphism(collapse, p1p1_fan(), p1p1_fan());
  CHECK_FALSE(mz.surjective);
  CHECK_THROWS_AS(pullback(mz), input_error);

  // quarter rotation is incompatible with the plane fan
  IntMat rot(2, 2);
  rot.at(0, 1) = -1;
  rot.at(1, 0) = 1;
  CHECK_THROWS_AS(validate_morphism(rot, p2_fan(), p2_fan()), input_error);

  // projection to a factor, and the collapse to a point
  IntMat pr(1, 2);
  pr.at(0, 0) = 1;
  CHECK(validate_morphism(pr, p1p1_fan(), p1_fan()).surjective);
  IntMat z(0, 2);
  CHECK(validate_morphism(z, p1p1_fan(), point_fan()).surjective);

  CHECK_THROWS_AS(validate_morphism(diag2(1, 1), p1_fan(), p1_fan()), input_error);
}

TEST_CASE("pullback of dilations and diagonal maps") {
  auto pb = pullback(validate_morphism(diag2(2, 2), p2_fan(), p2_fan()));
  CHECK(pb.matrix == to_rat(IntMat(1, 1, {Int(2)})));
  CHECK(pb.char_polynomial == IntPoly{-2, 1});
  CHECK(pb.det_value == 2);
  CHECK(pb.scale == 1);

  auto pq = pullback(validate_morphism(diag2(2, 3), p1p1_fan(), p1p1_fan()));
  CHECK(pq.det_value == 6);
  CHECK(pq.char_polynomial == IntPoly{6, -5, 1});  // (x-2)(x-3)

  auto pid = pullback(validate_morphism(IntMat::identity(2), f1_fan(), f1_fan()));
  CHECK(is_identity(pid.matrix));
  CHECK(pid.det_value == 1);

  auto ppt = pullback(validate_morphism(IntMat(0, 0), point_fan(), point_fan()));
  CHECK(ppt.char_polynomial == IntPoly{1});
  CHECK(ppt.det_value == 1);
}

TEST_CASE("pullback functoriality on random dilation pairs") {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> d(1, 5);
  for (int trial = 0; trial < 10; ++trial) {
    for (const Fan& f : {p1p1_fan(), f1_fan()}) {
      IntMat A = diag2(d(rng), d(rng));
      if (f.rays.size() == 4 && f.rays[0] == IntVec{-1, -1}) {
        // Hirzebruch fan only tolerates dilations
        long k = d(rng);
        A = diag2(k, k);
      }
      long k2 = d(rng);
      IntMat B = diag2(k2, k2);
      auto pa = pullback(validate_morphism(A, f, f)).matrix;
      auto pb = pullback(validate_morphism(B, f, f)).matrix;
      auto pc = pullback(validate_morphism(A * B, f, f)).matrix;
      CHECK(pc == pb * pa);
    }
  }
}

TEST_CASE("pullback power law") {
  for (const Fan& f : {p2_fan(), p1p1_fan()}) {
    IntMat A = f.rays.size() == 3 ? diag2(2, 2) : diag2(2, 3);
    auto base = pullback(validate_morphism(A, f, f)).matrix;
    IntMat P = IntMat::identity(2);
    for (int n = 1; n <= 5; ++n) {
      P = P * A;
      auto pn = pullback(validate_morphism(P, f, f)).matrix;
      CHECK(pn == mat_pow(base, static_cast<unsigned long>(n)));
    }
  }
}

TEST_CASE("dilation pullback determinant") {
  // v -> kv pulls back to k * identity on the class lattice, det = k^rank
  auto X = build_variety(f1_fan());
  auto pb = pullback(validate_morphism(diag2(3, 3), f1_fan(), f1_fan()));
  RatMat expect = to_rat(IntMat::identity(X.class_rank));
  for (auto& e : expect.a) e *= 3;
  CHECK(pb.matrix == expect);
  CHECK(pb.det_value == 9);
}
