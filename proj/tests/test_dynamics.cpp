#include <catch2/catch_amalgamated.hpp>

#include "toridyn/dynamics.hpp"

using namespace toridyn;

namespace {

Fan p2_fan() {
  return make_fan(2, {IntVec{1, 0}, IntVec{0, 1}, IntVec{-1, -1}}, {{0, 1}, {1, 2}, {0, 2}});
}

Fan p1p1_fan() {
  return make_fan(2, {IntVec{1, 0}, IntVec{0, 1}, IntVec{-1, 0}, IntVec{0, -1}},
                  {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

Fan p1_fan() { return make_fan(1, {IntVec{1}, IntVec{-1}}, {{0}, {1}}); }

Fan point_fan() { return make_fan(0, {}, {{}}); }

IntMat diag2(long a, long b) {
  IntMat m(2, 2);
  m.at(0, 0) = a;
  m.at(1, 1) = b;
  return m;
}

PullbackAction endo(const Fan& f, const IntMat& map) {
  return pullback(validate_morphism(map, f, f));
}

// Class action taken as given, for characteristic polynomials that no
// endomorphism in the test corpus realizes.
PullbackAction synthetic(const IntMat& q) {
  PullbackAction a;
  a.matrix = to_rat(q);
  a.scaled = q;
  a.scale = 1;
  a.char_polynomial = IntPoly(char_poly_coeffs(q));
  a.det_value = det(a.matrix);
  return a;
}

// Every pairing of the witness image under (f* - 1) with a Mori generator
// must be strictly positive.
void check_amplified_witness(const PullbackAction& a, const ToricVariety& X, const RatVec& w) {
  RatMat B = a.matrix - to_rat(IntMat::identity(a.matrix.rows));
  RatVec img = B * w;
  for (const auto& c : X.mori_generators) CHECK(dot(to_rat(c), img) > 0);
}

}  // namespace

TEST_CASE("dynamical degrees of multiplication and diagonal maps") {
  auto d2 = dynamical_degree(endo(p2_fan(), diag2(2, 2)));
  REQUIRE(d2.is_rational());
  CHECK(d2.rational_value() == 2);

  auto d23 = dynamical_degree(endo(p1p1_fan(), diag2(2, 3)));
  REQUIRE(d23.is_rational());
  CHECK(d23.rational_value() == 3);

  auto did = dynamical_degree(endo(p2_fan(), diag2(1, 1)));
  CHECK(did.rational_value() == 1);

  auto dpt = dynamical_degree(endo(point_fan(), IntMat(0, 0)));
  CHECK(dpt.rational_value() == 1);

  // factor swap: eigenvalues +1 and -1, spectral radius 1
  auto dsw = dynamical_degree(endo(p1p1_fan(), IntMat(2, 2, {0, 1, 1, 0})));
  CHECK(dsw.rational_value() == 1);
  // doubled swap: eigenvalues +2 and -2
  auto dsw2 = dynamical_degree(endo(p1p1_fan(), IntMat(2, 2, {0, 2, 2, 0})));
  CHECK(dsw2.rational_value() == 2);
}

TEST_CASE("irrational dynamical degree from a quadratic class action") {
  // char poly x^2 - 3x + 1, dominant root (3 + sqrt 5)/2
  auto a = synthetic(IntMat(2, 2, {2, 1, 1, 1}));
  CHECK(a.char_polynomial == IntPoly({1, -3, 1}));
  auto l = dynamical_degree(a);
  REQUIRE_FALSE(l.is_rational());
  CHECK(l.minimal_polynomial() == IntPoly({1, -3, 1}));
  CHECK(l.decimal(10) == "2.6180339887");
  // the conjugate root (3 - sqrt 5)/2 sits inside the unit disk
  CHECK_FALSE(is_int_amplified(a));

  // char poly x^2 - 5x + 5: both roots (5 +- sqrt 5)/2 lie outside
  auto b = synthetic(IntMat(2, 2, {0, -5, 1, 5}));
  CHECK(b.char_polynomial == IntPoly({5, -5, 1}));
  auto lb = dynamical_degree(b);
  CHECK(lb.decimal(10) == "3.6180339887");
  CHECK(is_int_amplified(b));
}

TEST_CASE("int-amplified detection on the corpus") {
  CHECK(is_int_amplified(endo(p2_fan(), diag2(2, 2))));
  CHECK(is_int_amplified(endo(p1p1_fan(), diag2(2, 3))));
  CHECK(is_int_amplified(endo(p1p1_fan(), IntMat(2, 2, {0, 2, 2, 0}))));
  CHECK(is_int_amplified(endo(point_fan(), IntMat(0, 0))));

  // eigenvalue 1 on the second factor
  CHECK_FALSE(is_int_amplified(endo(p1p1_fan(), diag2(2, 1))));
  CHECK_FALSE(is_int_amplified(endo(p2_fan(), diag2(1, 1))));
  CHECK_FALSE(is_int_amplified(endo(p1p1_fan(), IntMat(2, 2, {0, 1, 1, 0}))));
}

TEST_CASE("polarization search finds eigenvalue and ample witness") {
  auto Xpp = build_variety(p1p1_fan());
  auto X2 = build_variety(p2_fan());

  auto p = is_polarized(endo(p1p1_fan(), diag2(2, 2)), Xpp);
  REQUIRE(p.has_value());
  CHECK(p->q == 2);
  CHECK(p->witness == RatVec{1, 1});

  auto p3 = is_polarized(endo(p2_fan(), diag2(3, 3)), X2);
  REQUIRE(p3.has_value());
  CHECK(p3->q == 3);
  CHECK(p3->witness == RatVec{1});

  // doubled swap is polarized by the symmetric class
  auto psw = is_polarized(endo(p1p1_fan(), IntMat(2, 2, {0, 2, 2, 0})), Xpp);
  REQUIRE(psw.has_value());
  CHECK(psw->q == 2);
  CHECK(psw->witness == RatVec{1, 1});

  // eigenspaces of diag(2,3) are the two rulings, neither ample
  CHECK_FALSE(is_polarized(endo(p1p1_fan(), diag2(2, 3)), Xpp).has_value());
  CHECK_FALSE(is_polarized(endo(p1p1_fan(), diag2(2, 1)), Xpp).has_value());
  CHECK_FALSE(is_polarized(endo(p2_fan(), diag2(1, 1)), X2).has_value());
  CHECK_FALSE(is_polarized(endo(point_fan(), IntMat(0, 0)), build_variety(point_fan())).has_value());
}

TEST_CASE("polarized witnesses satisfy the eigenvector equation") {
  auto Xpp = build_variety(p1p1_fan());
  for (long k = 2; k <= 5; ++k) {
    auto a = endo(p1p1_fan(), diag2(k, k));
    auto p = is_polarized(a, Xpp);
    REQUIRE(p.has_value());
    CHECK(p->q == k);
    RatVec img = a.matrix * p->witness;
    for (size_t i = 0; i < img.size(); ++i) CHECK(img[i] == p->q * p->witness[i]);
    for (const auto& c : Xpp.mori_generators) CHECK(dot(to_rat(c), p->witness) > 0);
  }
}

TEST_CASE("amplified detection with witness or obstruction") {
  auto Xpp = build_variety(p1p1_fan());
  auto X2 = build_variety(p2_fan());

  auto a22 = endo(p1p1_fan(), diag2(2, 2));
  auto r22 = is_amplified(a22, Xpp);
  CHECK(r22.amplified);
  check_amplified_witness(a22, Xpp, r22.witness);

  auto a23 = endo(p1p1_fan(), diag2(2, 3));
  auto r23 = is_amplified(a23, Xpp);
  CHECK(r23.amplified);
  check_amplified_witness(a23, Xpp, r23.witness);

  auto a3 = endo(p2_fan(), diag2(3, 3));
  auto r3 = is_amplified(a3, X2);
  CHECK(r3.amplified);
  check_amplified_witness(a3, X2, r3.witness);

  // fixing a ruling blocks amplification; the obstruction is the fiber class
  auto a21 = endo(p1p1_fan(), diag2(2, 1));
  auto r21 = is_amplified(a21, Xpp);
  CHECK_FALSE(r21.amplified);
  CHECK(r21.obstruction == IntVec{1, 0});

  auto rid = is_amplified(endo(p2_fan(), diag2(1, 1)), X2);
  CHECK_FALSE(rid.amplified);
  CHECK(rid.obstruction == IntVec{1});

  auto rsw = is_amplified(endo(p1p1_fan(), IntMat(2, 2, {0, 1, 1, 0})), Xpp);
  CHECK_FALSE(rsw.amplified);
  CHECK(rsw.obstruction == IntVec{1, 1});

  auto rpt = is_amplified(endo(point_fan(), IntMat(0, 0)), build_variety(point_fan()));
  CHECK(rpt.amplified);
  CHECK(rpt.witness.empty());
}

TEST_CASE("obstruction classes are effective and fixed by the transpose action") {
  auto Xpp = build_variety(p1p1_fan());
  for (auto map : {diag2(2, 1), diag2(1, 3), IntMat(2, 2, {0, 1, 1, 0})}) {
    auto a = endo(p1p1_fan(), map);
    auto r = is_amplified(a, Xpp);
    REQUIRE_FALSE(r.amplified);
    REQUIRE_FALSE(is_zero(r.obstruction));
    RatMat Bt = (a.matrix - to_rat(IntMat::identity(2))).transpose();
    RatVec img = Bt * to_rat(r.obstruction);
    for (const auto& v : img) CHECK(v == 0);
    CHECK(in_cone(Xpp.mori_generators, to_rat(r.obstruction)));
  }
}

TEST_CASE("full report on a diagonal endomorphism") {
  auto Xpp = build_variety(p1p1_fan());
  auto rep = analyze_endomorphism(endo(p1p1_fan(), diag2(2, 3)), Xpp);
  CHECK(rep.lambda1.rational_value() == 3);
  CHECK(rep.lambda1_approx == "3.0000000000");
  CHECK(rep.int_amplified);
  CHECK_FALSE(rep.polarized.has_value());
  CHECK(rep.amplified.amplified);
  CHECK(rep.det_pullback == 6);

  auto pt = analyze_endomorphism(endo(point_fan(), IntMat(0, 0)), build_variety(point_fan()));
  CHECK(pt.lambda1_approx == "1.0000000000");
  CHECK(pt.int_amplified);
  CHECK_FALSE(pt.polarized.has_value());
  CHECK(pt.amplified.amplified);
  CHECK(pt.det_pullback == 1);

  auto sw = analyze_endomorphism(endo(p1p1_fan(), IntMat(2, 2, {0, 1, 1, 0})), Xpp);
  CHECK(sw.det_pullback == -1);
}

TEST_CASE("dynamical degree is multiplicative under iteration") {
  std::vector<std::pair<Fan, IntMat>> corpus = {
      {p2_fan(), diag2(2, 2)},
      {p1p1_fan(), diag2(2, 3)},
      {p1p1_fan(), IntMat(2, 2, {0, 2, 2, 0})},
  };
  for (const auto& [fan, map] : corpus) {
    auto l1 = dynamical_degree(endo(fan, map));
    IntMat power = map;
    for (int n = 2; n <= 5; ++n) {
      power = power * map;
      CHECK(dynamical_degree(endo(fan, power)) == l1.pow(n));
    }
  }
  // same law for the irrational quadratic action
  IntMat m(2, 2, {2, 1, 1, 1});
  auto l1 = dynamical_degree(synthetic(m));
  IntMat power = m;
  for (int n = 2; n <= 5; ++n) {
    power = power * m;
    CHECK(dynamical_degree(synthetic(power)) == l1.pow(n));
  }
}

TEST_CASE("iterates of int-amplified endomorphisms stay int-amplified") {
  std::vector<std::pair<Fan, IntMat>> corpus = {
      {p1p1_fan(), diag2(2, 3)},
      {p1p1_fan(), IntMat(2, 2, {0, 2, 2, 0})},
      {p2_fan(), diag2(2, 2)},
  };
  for (const auto& [fan, map] : corpus) {
    REQUIRE(is_int_amplified(endo(fan, map)));
    IntMat power = map;
    for (int n = 2; n <= 4; ++n) {
      power = power * map;
      CHECK(is_int_amplified(endo(fan, power)));
    }
  }
}

TEST_CASE("commuting int-amplified endomorphisms compose closed") {
  std::vector<std::pair<IntMat, IntMat>> pairs = {
      {diag2(2, 2), diag2(3, 3)},
      {diag2(2, 3), diag2(3, 2)},
      {diag2(4, 2), diag2(2, 4)},
  };
  for (const auto& [f, g] : pairs) {
    CHECK(f * g == g * f);
    REQUIRE(is_int_amplified(endo(p1p1_fan(), f)));
    REQUIRE(is_int_amplified(endo(p1p1_fan(), g)));
    CHECK(is_int_amplified(endo(p1p1_fan(), f * g)));
  }
}

TEST_CASE("polarized implies int-amplified and amplified across the corpus") {
  auto Xpp = build_variety(p1p1_fan());
  auto X2 = build_variety(p2_fan());
  std::vector<std::tuple<Fan, IntMat, const ToricVariety*>> corpus = {
      {p2_fan(), diag2(1, 1), &X2},
      {p2_fan(), diag2(2, 2), &X2},
      {p2_fan(), diag2(3, 3), &X2},
      {p1p1_fan(), diag2(2, 2), &Xpp},
      {p1p1_fan(), diag2(2, 3), &Xpp},
      {p1p1_fan(), diag2(2, 1), &Xpp},
      {p1p1_fan(), IntMat(2, 2, {0, 1, 1, 0}), &Xpp},
      {p1p1_fan(), IntMat(2, 2, {0, 2, 2, 0}), &Xpp},
  };
  for (const auto& [fan, map, X] : corpus) {
    auto a = endo(fan, map);
    auto rep = analyze_endomorphism(a, *X);
    if (rep.polarized) {
      CHECK(rep.int_amplified);
      CHECK(rep.amplified.amplified);
    }
    // on positive-dimensional varieties amplification forces degree growth
    if (rep.amplified.amplified) CHECK(rep.lambda1.compare_rational(1) > 0);
  }
}

TEST_CASE("dynamical degree descends along the product projection") {
  IntMat proj(1, 2, {1, 0});
  for (auto [a, b] : std::vector<std::pair<long, long>>{{5, 2}, {2, 5}, {3, 3}}) {
    auto m = validate_morphism(proj, p1p1_fan(), p1_fan());
    REQUIRE(m.surjective);
    // the square with the first-factor projection commutes: proj . diag = [a] . proj
    IntMat induced(1, 1, {Int(a)});
    CHECK(proj * diag2(a, b) == induced * proj);
    auto top = dynamical_degree(endo(p1p1_fan(), diag2(a, b)));
    auto down = dynamical_degree(endo(p1_fan(), induced));
    CHECK(down <= top);
    if (a >= b) CHECK(down == top);
  }
}
