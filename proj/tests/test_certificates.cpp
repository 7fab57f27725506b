#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "toridyn/certificates.hpp"

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

Fan f2_fan() {
  return make_fan(2, {IntVec{1, 0}, IntVec{0, 1}, IntVec{-1, 2}, IntVec{0, -1}},
                  {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

Fan flip_fan() {
  return make_fan(3,
                  {IntVec{1, 0, 0}, IntVec{0, 1, 0}, IntVec{0, 0, 1}, IntVec{2, 1, -1},
                   IntVec{-3, -2, 0}},
                  {{0, 2, 3}, {1, 2, 3}, {0, 2, 4}, {1, 2, 4}, {0, 3, 4}, {1, 3, 4}});
}

IntMat diag2(long a, long b) {
  IntMat m(2, 2);
  m.at(0, 0) = a;
  m.at(1, 1) = b;
  return m;
}

MMPRun run_on(const Fan& fan, const IntMat& map) {
  return run_mmp(build_variety(fan), validate_morphism(map, fan, fan));
}

// bare trace skeleton for the propagation bookkeeping: only kinds and
// dimensions matter there
ContractionStep fake_step(ContractionKind kind, int dim_source, int dim_result) {
  ContractionStep s;
  s.kind = kind;
  s.source.fan.rank = dim_source;
  s.result.fan.rank = dim_result;
  return s;
}

}  // namespace

TEST_CASE("fiber structure of the quadric rulings") {
  auto run = run_on(p1p1_fan(), diag2(2, 3));
  REQUIRE(run.traces.size() == 2);

  // the ruling whose fiber sublattice is Z.e2 carries the degree-3 factor
  auto fs1 = fiber_structure(run.traces[1].steps[0]);
  CHECK(fs1.sublattice == IntMat(1, 2, {0, -1}));
  CHECK(fs1.fiber_fan.rank == 1);
  CHECK(fs1.fiber_fan.rays.size() == 2);
  CHECK(fs1.fiber_variety.class_rank == 1);
  CHECK(fs1.restricted_map.lattice_map == IntMat(1, 1, {3}));

  auto fs0 = fiber_structure(run.traces[0].steps[0]);
  CHECK(fs0.sublattice == IntMat(1, 2, {-1, 0}));
  CHECK(fs0.restricted_map.lattice_map == IntMat(1, 1, {2}));

  // fiber rays really lie in the recorded sublattice span
  for (const auto* fs : {&fs0, &fs1})
    for (const auto& c : fs->fiber_fan.rays) CHECK(c.size() == 1);
}

TEST_CASE("the structure morphism keeps the whole plane as fiber") {
  auto run = run_on(p2_fan(), diag2(2, 2));
  auto fs = fiber_structure(run.traces[0].steps[0]);
  CHECK(fs.fiber_fan == p2_fan());
  CHECK(fs.fiber_variety.class_rank == 1);
  CHECK(fs.restricted_map.lattice_map == diag2(2, 2));
}

TEST_CASE("the F1 ruling has a line fiber") {
  auto run = run_on(f1_fan(), diag2(2, 2));
  const auto& ruling = run.traces[0].steps[0];
  REQUIRE(ruling.kind == ContractionKind::fibering);
  auto fs = fiber_structure(ruling);
  CHECK(fs.fiber_fan.rank == 1);
  CHECK(fs.fiber_fan.rays.size() == 2);
  CHECK(fs.fiber_variety.class_rank == 1);
}

TEST_CASE("fiber structure rejects unusable steps") {
  auto X = build_variety(f1_fan());
  auto divisorial = contract(X, IntVec{1, -1});
  CHECK_THROWS_AS(fiber_structure(divisorial), input_error);
  // a bare skeleton carries no equivariant iterate
  auto skeleton = contract(X, IntVec{0, 1});
  CHECK_THROWS_WITH(fiber_structure(skeleton),
                    Catch::Matchers::ContainsSubstring("descend"));
}

TEST_CASE("fiber classification separates dilation, identity, other") {
  auto dil = run_on(p1p1_fan(), diag2(2, 3));
  auto ev = classify_pic1_endo(fiber_structure(dil.traces[1].steps[0]));
  CHECK(ev.kind == Pic1Kind::polarized);
  CHECK(ev.q == 3);

  auto idr = run_on(p1p1_fan(), IntMat::identity(2));
  auto evid = classify_pic1_endo(fiber_structure(idr.traces[0].steps[0]));
  CHECK(evid.kind == Pic1Kind::identity);
  CHECK(evid.q == 1);

  // v -> -v on the fiber line is equivariant but neither dilation nor identity
  auto inv = run_on(p1p1_fan(), diag2(2, -1));
  auto evo = classify_pic1_endo(fiber_structure(inv.traces[0].steps[1]));
  CHECK(evo.kind == Pic1Kind::other);
  CHECK(evo.q == 1);
  CHECK_FALSE(evo.note.empty());

  FiberStructure bad;
  bad.fiber_variety = build_variety(p1p1_fan());
  CHECK_THROWS_AS(classify_pic1_endo(bad), input_error);
}

TEST_CASE("density certificates across the corpus") {
  struct Case {
    Fan fan;
    IntMat map;
  };
  std::vector<Case> dense_cases = {
      {p2_fan(), diag2(2, 2)},
      {p2_fan(), diag2(3, 3)},
      {p1p1_fan(), diag2(2, 3)},
      {p1p1_fan(), IntMat(2, 2, {0, 1, 1, 0})},
      {p1p1_fan(), diag2(1, 2)},
      {f1_fan(), diag2(2, 2)},
      {f2_fan(), IntMat::identity(2)},
      {flip_fan(), IntMat::identity(3)},
  };
  for (const auto& c : dense_cases) {
    auto run = run_on(c.fan, c.map);
    for (const auto& t : run.traces) {
      auto cert = density_certificate(t);
      CHECK(cert.verdict == DensityVerdict::dense);
      for (const auto& ev : cert.per_fibering_evidence) {
        CHECK(ev.cls.kind != Pic1Kind::other);
        CHECK(t.steps[ev.step].kind == ContractionKind::fibering);
      }
    }
  }
}

TEST_CASE("dilation evidence on the quadric is split by factor") {
  auto run = run_on(p1p1_fan(), diag2(2, 3));
  auto c0 = density_certificate(run.traces[0]);
  REQUIRE(c0.per_fibering_evidence.size() == 2);
  CHECK(c0.per_fibering_evidence[0].cls.q == 2);
  CHECK(c0.per_fibering_evidence[1].cls.q == 3);
  auto c1 = density_certificate(run.traces[1]);
  CHECK(c1.per_fibering_evidence[0].cls.q == 3);
  CHECK(c1.per_fibering_evidence[1].cls.q == 2);
}

TEST_CASE("order-two automorphism certifies through identity evidence") {
  auto run = run_on(p1p1_fan(), IntMat(2, 2, {0, 1, 1, 0}));
  for (const auto& t : run.traces) {
    CHECK(t.steps[0].iterate_exponent == 2);
    auto cert = density_certificate(t);
    CHECK(cert.verdict == DensityVerdict::dense);
    for (const auto& ev : cert.per_fibering_evidence)
      CHECK(ev.cls.kind == Pic1Kind::identity);
  }
}

TEST_CASE("an inversion on the fiber blocks the dense verdict") {
  auto run = run_on(p1p1_fan(), diag2(2, -1));
  for (const auto& t : run.traces) {
    auto cert = density_certificate(t);
    CHECK(cert.verdict == DensityVerdict::unknown);
  }
  // evidence is still reported for the good steps
  auto cert = density_certificate(run.traces[0]);
  REQUIRE(cert.per_fibering_evidence.size() == 2);
  CHECK(cert.per_fibering_evidence[0].cls.kind == Pic1Kind::polarized);
  CHECK(cert.per_fibering_evidence[1].cls.kind == Pic1Kind::other);
}

TEST_CASE("non-tractable traces never get a dense verdict") {
  MMPTrace minimal;
  minimal.endpoint = build_variety(p2_fan());
  minimal.tractable = false;
  CHECK(density_certificate(minimal).verdict == DensityVerdict::unknown);
}

TEST_CASE("difficulty propagation worked examples") {
  auto run = run_on(f1_fan(), diag2(2, 2));
  const auto& div = run.traces[1];
  REQUIRE(div.steps[0].kind == ContractionKind::divisorial);
  REQUIRE(div.steps[1].kind == ContractionKind::fibering);

  auto b = propagate_difficulty(div, DifficultyBound{0, {}});
  REQUIRE(b.value.has_value());
  CHECK(*b.value == 2);
  CHECK(b.provenance ==
        std::vector<std::string>{"base-annotation", "fibering-bound", "birational-invariance"});

  // relative-difficulty-0 annotation removes the dimension penalty
  auto collapsed = propagate_difficulty(div, DifficultyBound{0, {}}, {{1, 0}});
  CHECK(*collapsed.value == 0);

  // all-birational prefix copies a base bound through unchanged
  MMPTrace birational;
  birational.steps = {fake_step(ContractionKind::divisorial, 3, 3),
                      fake_step(ContractionKind::flipping, 3, 3)};
  auto eq = propagate_difficulty(birational, DifficultyBound{1, {}});
  CHECK(*eq.value == 1);
  CHECK(eq.provenance == std::vector<std::string>{"base-annotation", "birational-invariance",
                                                  "birational-invariance"});
}

TEST_CASE("difficulty propagation input validation") {
  auto run = run_on(f1_fan(), diag2(2, 2));
  const auto& div = run.traces[1];
  CHECK_FALSE(propagate_difficulty(div, DifficultyBound{std::nullopt, {}}).value.has_value());
  CHECK_THROWS_AS(propagate_difficulty(div, DifficultyBound{0, {}}, {{0, 0}}), input_error);
  CHECK_THROWS_AS(propagate_difficulty(div, DifficultyBound{0, {}}, {{1, -1}}), input_error);
  CHECK_THROWS_AS(propagate_difficulty(div, DifficultyBound{-1, {}}), input_error);
}

TEST_CASE("difficulty bounds are invariant under inserting birational steps") {
  std::mt19937 rng(20260816);
  for (int round = 0; round < 50; ++round) {
    int dim = 2 + static_cast<int>(rng() % 4);
    MMPTrace trace;
    std::map<size_t, int> ann;
    while (dim > 0) {
      int pick = static_cast<int>(rng() % 3);
      if (pick == 0 || dim < 2) {
        int drop = 1 + static_cast<int>(rng() % dim);
        if (rng() % 4 == 0) ann[trace.steps.size()] = 0;
        trace.steps.push_back(fake_step(ContractionKind::fibering, dim, dim - drop));
        dim -= drop;
      } else {
        trace.steps.push_back(fake_step(
            pick == 1 ? ContractionKind::divisorial : ContractionKind::flipping, dim, dim));
      }
    }
    int base = static_cast<int>(rng() % 3);
    auto before = propagate_difficulty(trace, DifficultyBound{base, {}}, ann);
    REQUIRE(before.value.has_value());
    CHECK(*before.value >= 0);

    // splice a birational step at a random position, shifting annotations past it
    size_t pos = rng() % (trace.steps.size() + 1);
    int at_dim = pos < trace.steps.size() ? trace.steps[pos].source.fan.rank : 0;
    MMPTrace spliced = trace;
    spliced.steps.insert(spliced.steps.begin() + pos,
                         fake_step(ContractionKind::divisorial, at_dim, at_dim));
    std::map<size_t, int> shifted;
    for (const auto& [idx, r] : ann) shifted[idx >= pos ? idx + 1 : idx] = r;
    auto after = propagate_difficulty(spliced, DifficultyBound{base, {}}, shifted);
    CHECK(*after.value == *before.value);
  }
}

TEST_CASE("fibration obstruction witnesses") {
  // id x doubling: the projection to the fixed factor descends the identity
  auto idx2 = run_on(p1p1_fan(), diag2(1, 2));
  bool found = false;
  for (const auto& t : idx2.traces)
    if (fibration_obstruction(t)) found = true;
  CHECK(found);

  // doubling on the plane only reaches the point base
  auto plane = run_on(p2_fan(), diag2(2, 2));
  for (const auto& t : plane.traces) CHECK_FALSE(fibration_obstruction(t));

  // both quadric projections of diag(2,3) descend nontrivial dilations
  auto dil = run_on(p1p1_fan(), diag2(2, 3));
  for (const auto& t : dil.traces) CHECK_FALSE(fibration_obstruction(t));
}
