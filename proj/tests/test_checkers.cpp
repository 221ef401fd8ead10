#include <catch2/catch_amalgamated.hpp>

#include "vikit/checkers.hpp"
#include "vikit/instance_io.hpp"

using namespace vikit;

namespace {

const ConvexSet kBox2 = ConvexSet::box({-1.0, -1.0}, {1.0, 1.0});
const ConvexSet kSeg = ConvexSet::box({-1.0}, {1.0});

double witness_value(const PropertyReport& rep, const std::string& key) {
  REQUIRE(rep.witness.has_value());
  for (const auto& [k, v] : rep.witness->values)
    if (k == key) return v;
  FAIL("witness value " << key << " missing");
  return 0.0;
}

Point witness_point(const PropertyReport& rep, const std::string& key) {
  REQUIRE(rep.witness.has_value());
  for (const auto& [k, p] : rep.witness->points)
    if (k == key) return p;
  FAIL("witness point " << key << " missing");
  return {};
}

long long counter_value(const PropertyReport& rep, const std::string& key) {
  for (const auto& [k, v] : rep.counters)
    if (k == key) return v;
  return 0;
}

}  // namespace

TEST_CASE("image segment check fails on the planar map with the frozen distance") {
  QlOptions opts;
  opts.forced = {{{0.0, 0.0}, {1.0, 1.0}, 0.5}};
  opts.forced_only = true;
  const PropertyReport rep = check_ql(catalog_lookup("ex432_A").field, kBox2, opts);
  CHECK_FALSE(rep.passed);
  CHECK(rep.trials == 1);
  CHECK(witness_value(rep, "distance") == std::sqrt(2.0) / 16.0);
  // the witness re-checks: recomputing the distance from its points agrees
  const VectorField A = catalog_lookup("ex432_A").field;
  const double redo = segment_distance(evaluate(A, witness_point(rep, "z")),
                                       evaluate(A, witness_point(rep, "x")),
                                       evaluate(A, witness_point(rep, "y")));
  CHECK(redo == witness_value(rep, "distance"));
}

TEST_CASE("affine maps pass the image segment check") {
  QlOptions opts;
  opts.trials = 200;
  opts.seed = 5;
  const PropertyReport rep = check_ql(make_affine_random(2, 8), kBox2, opts);
  CHECK(rep.passed);
  CHECK(rep.trials == 200);
  CHECK_FALSE(rep.witness.has_value());
}

TEST_CASE("random trials catch the up-down map") {
  QlOptions opts;
  opts.trials = 300;
  opts.seed = 1;
  const VectorField A = catalog_lookup("ex434_A").field;
  const PropertyReport rep = check_ql(A, kSeg, opts);
  CHECK_FALSE(rep.passed);
  REQUIRE(rep.witness.has_value());
  const double redo = segment_distance(evaluate(A, witness_point(rep, "z")),
                                       evaluate(A, witness_point(rep, "x")),
                                       evaluate(A, witness_point(rep, "y")));
  CHECK(redo == witness_value(rep, "distance"));
  CHECK(redo > 1e-9);
}

TEST_CASE("strict variant rejects endpoint hits") {
  QlOptions opts;
  opts.forced = {{{-1.0}, {1.0}, 0.25}};
  opts.forced_only = true;
  const PropertyReport rep = check_strict_ql(catalog_lookup("ex4331_A").field, kSeg, opts);
  CHECK_FALSE(rep.passed);
  CHECK(witness_value(rep, "value") == 0.0);
  CHECK_THAT(rep.witness->note, Catch::Matchers::ContainsSubstring("endpoint"));
}

TEST_CASE("strict variant passes on an injective affine map") {
  QlOptions opts;
  opts.trials = 100;
  opts.seed = 2;
  const PropertyReport rep = check_strict_ql(VectorField::identity(1), kSeg, opts);
  CHECK(rep.passed);
  CHECK(counter_value(rep, "degenerate") == 0);
}

TEST_CASE("strict variant flags constant maps as degenerate") {
  QlOptions opts;
  opts.trials = 50;
  opts.seed = 3;
  const PropertyReport rep = check_strict_ql(VectorField::zero(1), kSeg, opts);
  CHECK_FALSE(rep.passed);
  CHECK(rep.trials == 1);  // stops at the first failing trial
  CHECK(counter_value(rep, "degenerate") == 1);
  CHECK_THAT(rep.witness->note, Catch::Matchers::ContainsSubstring("degenerate"));
}

TEST_CASE("relative monotonicity holds for the identity pairing") {
  PairOptions opts;
  opts.trials = 500;
  opts.seed = 7;
  const PropertyReport rep =
      check_monotone_relative(VectorField::identity(2), VectorField::identity(2), kBox2, opts);
  CHECK(rep.passed);
  CHECK(rep.trials == 500);
}

TEST_CASE("relative monotonicity fails for a reversed field with a checked witness") {
  PairOptions opts;
  opts.trials = 50;
  opts.seed = 7;
  const VectorField A = VectorField::componentwise({"-x"}, 1);
  const PropertyReport rep = check_monotone_relative(A, VectorField::identity(1), kSeg, opts);
  CHECK_FALSE(rep.passed);
  const Point x = witness_point(rep, "x"), y = witness_point(rep, "y");
  const double redo = dot(sub(evaluate(A, x), evaluate(A, y)),
                          sub(x, y));
  CHECK(redo == witness_value(rep, "value"));
  CHECK(redo < 0.0);
}

TEST_CASE("psd pullbacks are monotone relative to their base field") {
  const VectorField a = catalog_lookup("ex434_a").field;
  const VectorField A = make_psd_pullback(a, 5);
  PairOptions opts;
  opts.trials = 500;
  opts.seed = 9;
  CHECK(check_monotone_relative(A, a, kSeg, opts).passed);
}

TEST_CASE("monotone pairs are pseudomonotone on the same draw") {
  const VectorField a = catalog_lookup("ex432_a").field;
  const VectorField A = make_psd_pullback(a, 12);
  PairOptions opts;
  opts.trials = 300;
  opts.seed = 42;
  const PropertyReport mono = check_monotone_relative(A, a, kBox2, opts);
  const PropertyReport pseudo = check_a_pseudomonotone(A, a, kBox2, opts);
  CHECK(mono.passed);
  CHECK(pseudo.passed);
  CHECK(mono.trials == pseudo.trials);
}

TEST_CASE("pseudomonotonicity counts vacuous pairs") {
  // A constant -1 against increasing pairs: the antecedent is always
  // negative, so every pair is vacuous and the check passes empty.
  const VectorField A = VectorField::componentwise({"-1"}, 1);
  PairOptions opts;
  opts.forced = {{{1.0}, {1.5}}, {{1.2}, {1.9}}, {{1.1}, {1.8}}};
  opts.forced_only = true;
  const PropertyReport rep =
      check_a_pseudomonotone(A, VectorField::identity(1), ConvexSet::box({1.0}, {2.0}), opts);
  CHECK(rep.passed);
  CHECK(rep.trials == 3);
  CHECK(counter_value(rep, "vacuous") == 3);
}

TEST_CASE("hull image check passes affine maps and fails the planar map") {
  HullImageOptions opts;
  opts.trials = 1000;
  opts.seed = 3;
  opts.n_points = 4;
  CHECK(check_hull_image(make_affine_random(2, 21), kBox2, opts).passed);

  HullImageOptions forced;
  forced.forced = {{{{0.0, 0.0}, {1.0, 1.0}}, {0.5, 0.5}}};
  forced.forced_only = true;
  const PropertyReport rep = check_hull_image(catalog_lookup("ex432_A").field, kBox2, forced);
  CHECK_FALSE(rep.passed);
  CHECK_THAT(witness_value(rep, "distance"),
             Catch::Matchers::WithinAbs(std::sqrt(2.0) / 16.0, 1e-9));
}

TEST_CASE("hull image check is trivial for single points") {
  HullImageOptions opts;
  opts.trials = 50;
  opts.seed = 4;
  opts.n_points = 1;
  CHECK(check_hull_image(catalog_lookup("ex432_A").field, kBox2, opts).passed);
}

TEST_CASE("kkm covering holds for affine data") {
  KkmOptions opts;
  opts.trials = 300;
  opts.seed = 6;
  const PropertyReport rep =
      check_kkm(make_affine_random(2, 33), VectorField::identity(2), kBox2, opts);
  CHECK(rep.passed);
  CHECK(rep.trials == 300);
}

TEST_CASE("kkm covering fails on the planar instance with the frozen value") {
  KkmOptions opts;
  opts.forced = {{{{0.5, -1.0}, {-0.5, -1.0}}, {0.5, 0.5}}};
  opts.forced_only = true;
  const PropertyReport rep = check_kkm(catalog_lookup("ex432_A").field,
                                       catalog_lookup("ex432_a").field, kBox2, opts);
  CHECK_FALSE(rep.passed);
  CHECK(witness_value(rep, "max_lhs") == -0.25);
  CHECK(witness_point(rep, "x") == Point{0.0, -1.0});
}

TEST_CASE("kkm degenerate combinations collapse to the base point") {
  KkmOptions opts;
  opts.forced = {{{{0.3, -0.4}, {0.3, -0.4}}, {0.5, 0.5}}};
  opts.forced_only = true;
  const PropertyReport rep = check_kkm(catalog_lookup("ex432_A").field,
                                       catalog_lookup("ex432_a").field, kBox2, opts);
  CHECK(rep.passed);  // x equals both y's, so the best lhs is exactly zero
}

TEST_CASE("brute forced pair search agrees with the kkm checker") {
  const VectorField A = catalog_lookup("ex432_A").field;
  const VectorField a = catalog_lookup("ex432_a").field;
  const SampleGrid grid = sample_grid(kBox2, 9);
  double worst = std::numeric_limits<double>::infinity();
  KkmTrial worst_trial;
  for (const Point& y1 : grid.points)
    for (const Point& y2 : grid.points) {
      const Point x = {0.5 * (y1[0] + y2[0]), 0.5 * (y1[1] + y2[1])};
      const Point Ax = evaluate(A, x);
      const Point ax = evaluate(a, x);
      const double v =
          std::max(inequality_lhs_values(VIKind::iS, Ax, evaluate(A, y1), ax, ax),
                   inequality_lhs_values(VIKind::iS, Ax, evaluate(A, y2), ax, ax));
      if (v < worst) {
        worst = v;
        worst_trial = {{y1, y2}, {0.5, 0.5}};
      }
    }
  CHECK(worst <= -0.25);  // the frozen witness pair lives on this grid
  KkmOptions opts;
  opts.forced = {worst_trial};
  opts.forced_only = true;
  const PropertyReport rep = check_kkm(A, a, kBox2, opts);
  CHECK_FALSE(rep.passed);
  CHECK(witness_value(rep, "max_lhs") == worst);
}

TEST_CASE("minty inclusion fails in the reverse direction on the up-down instance") {
  MintyOptions opts;
  opts.direction = MintyDirection::iM_subset_iS;
  const VectorField A = catalog_lookup("ex434_A").field;
  const VectorField a = catalog_lookup("ex434_a").field;
  const PropertyReport rep = check_minty_inclusion(A, a, kSeg, opts);
  CHECK_FALSE(rep.passed);
  CHECK(counter_value(rep, "in_iM") == 3);
  CHECK(counter_value(rep, "in_iS") == 1);
  CHECK(counter_value(rep, "difference") == 2);
  CHECK(witness_point(rep, "x") == Point{-0.5});
  CHECK(witness_point(rep, "diff_1") == Point{0.55});

  MintyOptions fwd;
  fwd.direction = MintyDirection::iS_subset_iM;
  CHECK(check_minty_inclusion(A, a, kSeg, fwd).passed);
}

TEST_CASE("minty inclusion on the step instance lists all offenders") {
  MintyOptions opts;
  opts.direction = MintyDirection::iM_subset_iS;
  const VectorField A = catalog_lookup("ex4331_A").field;
  const VectorField a = catalog_lookup("ex4331_a").field;
  const PropertyReport rep = check_minty_inclusion(A, a, kSeg, opts);
  CHECK_FALSE(rep.passed);
  CHECK(counter_value(rep, "in_iM") == 41);
  CHECK(counter_value(rep, "in_iS") == 1);
  CHECK(counter_value(rep, "difference") == 40);
  CHECK(witness_point(rep, "x") == Point{-1.0});
  REQUIRE(rep.witness.has_value());
  bool has_half = false;
  for (const auto& [key, p] : rep.witness->points)
    if (key.rfind("diff_", 0) == 0 && p == Point{0.5}) has_half = true;
  CHECK(has_half);

  MintyOptions fwd;
  fwd.direction = MintyDirection::iS_subset_iM;
  CHECK(check_minty_inclusion(A, a, kSeg, fwd).passed);
}

TEST_CASE("psd pullbacks satisfy the forward minty inclusion") {
  const VectorField a = catalog_lookup("ex434_a").field;
  const VectorField A = make_psd_pullback(a, 9);
  MintyOptions opts;
  opts.resolution = 33;
  CHECK(check_minty_inclusion(A, a, kSeg, opts).passed);
}

TEST_CASE("dense 1-D scans agree with the monotone oracle") {
  const VectorField step = catalog_lookup("ex4331_A").field;
  const VectorField updown = catalog_lookup("ex434_A").field;
  const VectorField decreasing = VectorField::componentwise({"-x"}, 1);

  const PropertyReport q1 = check_ql_dense_1d(step, -1.0, 1.0, 10001);
  const PropertyReport m1 = monotone_scan_1d(step, -1.0, 1.0, 10001);
  CHECK(q1.passed);
  CHECK(m1.passed);

  const PropertyReport q2 = check_ql_dense_1d(updown, -1.0, 1.0, 10001);
  const PropertyReport m2 = monotone_scan_1d(updown, -1.0, 1.0, 10001);
  CHECK_FALSE(q2.passed);
  CHECK_FALSE(m2.passed);
  REQUIRE(q2.witness.has_value());
  CHECK(witness_value(q2, "violation") > 1e-9);

  CHECK(check_ql_dense_1d(decreasing, -1.0, 1.0, 10001).passed);
  CHECK(monotone_scan_1d(decreasing, -1.0, 1.0, 10001).passed);
}

TEST_CASE("multiscale triples catch plateaus that adjacent scans miss") {
  // 0 ... 0 1 ... 1 0 ... 0 passes every adjacent triple but not the
  // wide ones
  const VectorField hat =
      VectorField::componentwise({"piecewise(x < 0.25 -> 0, x < 0.75 -> 1, else -> 0)"}, 1);
  const PropertyReport rep = check_ql_dense_1d(hat, 0.0, 1.0, 101);
  CHECK_FALSE(rep.passed);
  CHECK_FALSE(monotone_scan_1d(hat, 0.0, 1.0, 101).passed);
}

TEST_CASE("dense scan validates its arguments") {
  CHECK_THROWS_AS(check_ql_dense_1d(catalog_lookup("ex432_A").field, -1.0, 1.0), DimensionError);
  CHECK_THROWS_AS(check_ql_dense_1d(VectorField::identity(1), -1.0, 1.0, 2), Error);
  CHECK_THROWS_AS(monotone_scan_1d(catalog_lookup("ex432_A").field, -1.0, 1.0), DimensionError);
}

TEST_CASE("checker reports serialize deterministically") {
  PairOptions opts;
  opts.trials = 100;
  opts.seed = 13;
  const VectorField a = catalog_lookup("ex432_a").field;
  const VectorField A = make_psd_pullback(a, 2);
  const PropertyReport r1 = check_monotone_relative(A, a, kBox2, opts);
  const PropertyReport r2 = check_monotone_relative(A, a, kBox2, opts);
  CHECK(to_json(r1).dump() == to_json(r2).dump());

  MintyOptions mo;
  mo.direction = MintyDirection::iM_subset_iS;
  const PropertyReport m1 = check_minty_inclusion(catalog_lookup("ex434_A").field,
                                                  catalog_lookup("ex434_a").field, kSeg, mo);
  const PropertyReport m2 = check_minty_inclusion(catalog_lookup("ex434_A").field,
                                                  catalog_lookup("ex434_a").field, kSeg, mo);
  CHECK(to_json(m1).dump() == to_json(m2).dump());
}
