#include <catch2/catch_amalgamated.hpp>

#include "toridyn/arith.hpp"
#include "toridyn/matrix.hpp"
#include "toridyn/snf.hpp"

using namespace toridyn;

TEST_CASE("integer parsing is strict") {
  CHECK(parse_int("123") == 123);
  CHECK(parse_int("-45") == -45);
  CHECK(parse_int("0") == 0);
  CHECK_THROWS_AS(parse_int(""), input_error);
  CHECK_THROWS_AS(parse_int("-"), input_error);
  CHECK_THROWS_AS(parse_int("1.5"), input_error);
  CHECK_THROWS_AS(parse_int("03"), input_error);
  CHECK_THROWS_AS(parse_int("+7"), input_error);
}

TEST_CASE("simplest rational in an interval") {
  CHECK(simplest_rational_between(Rat(1, 3), Rat(1, 2)) == Rat(2, 5));
  CHECK(simplest_rational_between(Rat(2), Rat(3)) == Rat(5, 2));
  CHECK(simplest_rational_between(Rat(-1, 2), Rat(1, 3)) == Rat(0));
  CHECK(simplest_rational_between(Rat(-3), Rat(-2)) == Rat(-5, 2));
  CHECK(simplest_rational_between(Rat(0), Rat(10)) == Rat(1));
  // the value always lies strictly inside
  Rat a(355, 113), b(377, 120);
  Rat s = simplest_rational_between(a, b);
  CHECK(a < s);
  CHECK(s < b);
}

TEST_CASE("primitive vector reduction") {
  CHECK(primitive(IntVec{2, 4, -6}) == IntVec{1, 2, -3});
  CHECK(primitive(IntVec{0, 0, 5}) == IntVec{0, 0, 1});
  CHECK(primitive(RatVec{Rat(1, 2), Rat(1, 3)}) == IntVec{3, 2});
}

TEST_CASE("bareiss determinant and inverse") {
  IntMat m(2, 2, {Int(2), Int(1), Int(1), Int(1)});
  CHECK(det_bareiss(m) == 1);
  RatMat inv = inverse(m);
  CHECK(inv.at(0, 0) == 1);
  CHECK(inv.at(0, 1) == -1);
  CHECK(inv.at(1, 0) == -1);
  CHECK(inv.at(1, 1) == 2);

  IntMat s(3, 3, {Int(1), Int(2), Int(3), Int(2), Int(4), Int(6), Int(0), Int(1), Int(1)});
  CHECK(det_bareiss(s) == 0);
  CHECK(rank(s) == 2);
  CHECK_THROWS_AS(inverse(s), input_error);

  IntMat big(4, 4, {Int(3), Int(-1), Int(2), Int(0), Int(1), Int(4), Int(-2), Int(5), Int(0),
                    Int(2), Int(1), Int(-3), Int(2), Int(0), Int(0), Int(1)});
  Int d = det_bareiss(big);
  RatMat binv = inverse(big);
  CHECK(is_identity(to_rat(big) * binv));
  // det of inverse is 1/det
  CHECK(det(binv) * Rat(d) == 1);
}

TEST_CASE("linear solve") {
  RatMat A(2, 2, {Rat(1), Rat(2), Rat(3), Rat(5)});
  RatVec x = solve(A, RatVec{Rat(5), Rat(13)});
  CHECK(x == RatVec{Rat(1), Rat(2)});
}

TEST_CASE("smith normal form of a 2x2 example") {
  IntMat A(2, 2, {Int(2), Int(4), Int(6), Int(8)});
  SmithForm s = smith_normal_form(A);
  CHECK(s.D.at(0, 0) == 2);
  CHECK(s.D.at(1, 1) == 4);
  CHECK(s.D.at(0, 1) == 0);
  CHECK(s.D.at(1, 0) == 0);
  CHECK(s.U * A * s.V == s.D);
  Int du = det_bareiss(s.U), dv = det_bareiss(s.V);
  CHECK((du == 1 || du == -1));
  CHECK((dv == 1 || dv == -1));
}

TEST_CASE("smith normal form shapes and divisibility") {
  IntMat A(3, 2, {Int(6), Int(10), Int(15), Int(-4), Int(0), Int(9)});
  SmithForm s = smith_normal_form(A);
  CHECK(s.U * A * s.V == s.D);
  Int prev = 0;
  for (size_t i = 0; i < 2; ++i) {
    Int d = s.D.at(i, i);
    CHECK(d >= 0);
    if (prev > 0 && d > 0) CHECK(d % prev == 0);
    prev = d;
  }
  IntMat z(2, 3);
  SmithForm sz = smith_normal_form(z);
  CHECK(sz.D == z);
}

TEST_CASE("kernel of the projective plane ray pairing") {
  // rays (1,0), (0,1), (-1,-1); pairing matrix rows indexed by lattice basis
  IntMat Bt(2, 3, {Int(1), Int(0), Int(-1), Int(0), Int(1), Int(-1)});
  IntMat k = kernel_basis(Bt);
  REQUIRE(k.rows == 1);
  IntVec rel = k.row(0);
  if (rel[0] < 0) rel = neg(rel);
  CHECK(rel == IntVec{1, 1, 1});
}

TEST_CASE("lattice quotient for the class group of the projective plane") {
  IntMat B(2, 3, {Int(1), Int(0), Int(-1), Int(0), Int(1), Int(-1)});
  LatticeQuotient q = quotient_by_rowspan(B, 3);
  REQUIRE(q.pi.rows == 1);
  REQUIRE(q.pi.cols == 3);
  for (size_t r = 0; r < 2; ++r) {
    Int acc = 0;
    for (size_t j = 0; j < 3; ++j) acc += q.pi.at(0, j) * B.at(r, j);
    CHECK(acc == 0);
  }
  CHECK(is_identity(q.pi * q.section));
  IntVec pi0 = q.pi.row(0);
  if (pi0[0] < 0) pi0 = neg(pi0);
  CHECK(pi0 == IntVec{1, 1, 1});
}

TEST_CASE("saturation of a rowspan") {
  IntMat B(1, 2, {Int(2), Int(4)});
  IntMat s = saturate_rowspan(B);
  REQUIRE(s.rows == 1);
  IntVec v = s.row(0);
  if (v[0] < 0) v = neg(v);
  CHECK(v == IntVec{1, 2});
}

TEST_CASE("right inverse of a surjection") {
  IntMat pi(1, 3, {Int(1), Int(1), Int(1)});
  IntMat sec = right_inverse(pi);
  CHECK(is_identity(pi * sec));
}

TEST_CASE("matrix power") {
  IntMat f(2, 2, {Int(1), Int(1), Int(1), Int(0)});
  IntMat f10 = mat_pow(f, 10);
  CHECK(f10.at(0, 0) == 89);  // fibonacci
  CHECK(f10.at(0, 1) == 55);
}
