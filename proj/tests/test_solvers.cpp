#include <catch2/catch_amalgamated.hpp>

#include "vikit/instance_io.hpp"
#include "vikit/solvers.hpp"

using namespace vikit;

namespace {

VIInstance planar(VIKind kind = VIKind::iS) {
  return make_vi_instance(kind, catalog_lookup("ex432_A").field,
                          catalog_lookup("ex432_a").field,
                          ConvexSet::box({-1.0, -1.0}, {1.0, 1.0}));
}

// Independent oracle for the planar instance: the inverted Stampacchia
// lhs collapses to u v (u - x1), linear in v and convex in u on the
// worst side, so the true violation maximum sits at a box corner.
double planar_oracle_gap(const Point& x) {
  double worst = 0.0;
  for (double u : {-1.0, 1.0})
    for (double v : {-1.0, 1.0}) worst = std::max(worst, -(u * v * (u - x[0])));
  return worst;
}

}  // namespace

TEST_CASE("planar instance has no solution on the grid") {
  const std::optional<LipschitzModuli> lip = LipschitzModuli{std::sqrt(7.0), 1.0};
  const SolveReport rep = solve_grid(planar(), 41, -1.0, lip);
  CHECK(rep.verdict == Verdict::NoSolutionAtResolution);
  CHECK_THAT(rep.best_gap, Catch::Matchers::WithinAbs(1.0, 1e-12));
  CHECK(rep.best_x == Point{0.0, -1.0});
  CHECK(rep.worst_y == Point{-1.0, -1.0});
  CHECK(rep.evaluations == 2 * 1681);
  REQUIRE(rep.certificate.has_value());
  CHECK(rep.certificate->holds);
  CHECK(rep.certificate->margin > 0.7);
  CHECK(rep.certificate->margin < 0.8);
  CHECK(rep.certificate->gap_min == rep.best_gap);

  const SolveReport bare = solve_grid(planar(), 41);
  CHECK_FALSE(bare.certificate.has_value());
}

TEST_CASE("grid best gap agrees with the corner oracle") {
  const SolveReport rep = solve_grid(planar(), 21);
  const SampleGrid grid = sample_grid(planar().K, 21);
  double oracle = std::numeric_limits<double>::infinity();
  for (const Point& x : grid.points) oracle = std::min(oracle, planar_oracle_gap(x));
  CHECK(std::fabs(rep.best_gap - oracle) <= 1e-12);
}

TEST_CASE("zero operator solves at the first grid point") {
  const ConvexSet box = ConvexSet::box({-1.0, -1.0}, {1.0, 1.0});
  const VIInstance inst =
      make_vi_instance(VIKind::S, VectorField::zero(2), VectorField::identity(2), box);
  const SolveReport rep = solve_grid(inst, 9);
  CHECK(rep.verdict == Verdict::SolutionFound);
  CHECK(rep.best_gap == 0.0);
  CHECK(rep.best_x == sample_grid(box, 9).points[0]);
}

TEST_CASE("identity pairing solves exactly where a vanishes") {
  // a = identity vanishes at the origin, so every inverted Stampacchia
  // product collapses there regardless of A
  const VIInstance inst = make_vi_instance(
      VIKind::iS, make_affine_random(2, 19), VectorField::identity(2),
      ConvexSet::box({-1.0, -1.0}, {1.0, 1.0}));
  const SolveReport rep = solve_grid(inst, 9);  // the origin is on the 9-grid
  CHECK(rep.verdict == Verdict::SolutionFound);
  CHECK(rep.best_gap == 0.0);
  CHECK(gap(inst, Point{0.0, 0.0}, sample_grid(inst.K, 9)).gap == 0.0);
}

TEST_CASE("solve reports are deterministic") {
  const std::optional<LipschitzModuli> lip = LipschitzModuli{std::sqrt(7.0), 1.0};
  const SolveReport r1 = solve_grid(planar(), 21, -1.0, lip);
  const SolveReport r2 = solve_grid(planar(), 21, -1.0, lip);
  CHECK(to_json(r1).dump() == to_json(r2).dump());
}

TEST_CASE("finer grids never increase the best gap on nested boxes") {
  const VIInstance inst = make_vi_instance(VIKind::iS, make_affine_random(2, 55),
                                           VectorField::identity(2),
                                           ConvexSet::box({-1.0, -1.0}, {1.0, 1.0}));
  const SolveReport coarse = solve_grid(inst, 17);
  const SolveReport fine = solve_grid(inst, 33);
  CHECK(fine.best_gap <= coarse.best_gap + 1e-12);
}

TEST_CASE("refinement keeps honest gaps on unsolvable instances") {
  const SolveReport coarse = solve_grid(planar(), 21);
  const SolveReport refined = refine(planar(), coarse, 2);
  CHECK(refined.refinement_levels == 2);
  CHECK(refined.verdict == Verdict::NoSolutionAtResolution);
  CHECK(refined.best_gap >= 0.99);
  CHECK(refined.best_gap <= coarse.best_gap + 1e-12);
  CHECK(refined.evaluations > coarse.evaluations);
}

TEST_CASE("refinement never worsens an exact solution") {
  const ConvexSet box = ConvexSet::box({-1.0, -1.0}, {1.0, 1.0});
  const VIInstance inst =
      make_vi_instance(VIKind::iS, make_affine_random(2, 3), VectorField::identity(2), box);
  const SolveReport coarse = solve_grid(inst, 33);
  CHECK(coarse.verdict == Verdict::SolutionFound);
  CHECK(coarse.best_x == Point{0.0, 0.0});
  CHECK(coarse.best_gap == 0.0);
  const SolveReport refined = refine(inst, coarse, 3);
  CHECK(refined.best_gap <= coarse.best_gap + 1e-12);
  CHECK(refined.verdict == Verdict::SolutionFound);
}

TEST_CASE("refine validates its arguments") {
  const SolveReport coarse = solve_grid(planar(), 9);
  CHECK_THROWS_AS(refine(planar(), coarse, 1, 1.5), Error);
  CHECK_THROWS_AS(refine(planar(), coarse, 1, 0.0), Error);
  const SolveReport same = refine(planar(), coarse, 0);
  CHECK(to_json(same).dump() == to_json(coarse).dump());
}

TEST_CASE("default tolerance scales with spacing and field size") {
  const SolveReport rep = solve_grid(planar(), 41);
  // spacing 0.05, sup-norm sqrt(2) from the map component on the corner
  CHECK_THAT(rep.tol, Catch::Matchers::WithinAbs(0.05 * 0.05 * std::sqrt(2.0), 1e-9));
  const SolveReport fixed = solve_grid(planar(), 41, 0.5);
  CHECK(fixed.tol == 0.5);
  CHECK(fixed.verdict == Verdict::NoSolutionAtResolution);  // best gap is 1
}

TEST_CASE("certificates require a box domain") {
  const VIInstance inst =
      make_vi_instance(VIKind::iS, catalog_lookup("ex432_A").field,
                       catalog_lookup("ex432_a").field, ConvexSet::ball({0.0, 0.0}, 1.0));
  const std::optional<LipschitzModuli> lip = LipschitzModuli{std::sqrt(7.0), 1.0};
  const SolveReport rep = solve_grid(inst, 21, -1.0, lip);
  CHECK_FALSE(rep.certificate.has_value());
}

TEST_CASE("fixed point of 1 - x sits exactly on the grid") {
  const VectorField F = VectorField::componentwise({"1 - x"}, 1);
  const BrouwerReport rep = brouwer_fixed_point(F, ConvexSet::box({0.0}, {1.0}), 41, 3);
  CHECK(rep.x == Point{0.5});
  CHECK(rep.residual == 0.0);
  REQUIRE(rep.level_residuals.size() == 4);
  for (std::size_t i = 1; i < rep.level_residuals.size(); ++i)
    CHECK(rep.level_residuals[i] <= rep.level_residuals[i - 1] + 1e-15);
}

TEST_CASE("identity map reports the first grid point as fixed") {
  const VectorField F = VectorField::identity(1);
  const BrouwerReport rep = brouwer_fixed_point(F, ConvexSet::box({-1.0}, {1.0}), 9);
  CHECK(rep.x == Point{-1.0});
  CHECK(rep.residual == 0.0);
}

TEST_CASE("off-grid contractions improve under refinement") {
  // fixed point of 0.3 x + 0.31 is 0.442857..., never on a dyadic grid
  const VectorField F = VectorField::componentwise({"0.3*x + 0.31"}, 1);
  const BrouwerReport rep = brouwer_fixed_point(F, ConvexSet::box({0.0}, {1.0}), 9, 4);
  REQUIRE(rep.level_residuals.size() == 5);
  for (std::size_t i = 1; i < rep.level_residuals.size(); ++i)
    CHECK(rep.level_residuals[i] <= rep.level_residuals[i - 1] + 1e-15);
  CHECK(rep.level_residuals.back() < rep.level_residuals.front());
  CHECK(std::fabs(rep.x[0] - 0.31 / 0.7) <= 0.01);
}

TEST_CASE("maps that leave the set are rejected with the offending point") {
  const VectorField F = VectorField::componentwise({"x + 1"}, 1);
  CHECK_THROWS_WITH(brouwer_fixed_point(F, ConvexSet::box({0.0}, {1.0}), 5),
                    Catch::Matchers::ContainsSubstring("leaves the set"));
  const VectorField G = VectorField::componentwise({"x + y", "y"}, 2);
  CHECK_THROWS_AS(brouwer_fixed_point(G, ConvexSet::box({0.0}, {1.0}), 5), DimensionError);
}

TEST_CASE("planar ball contraction lands on the center") {
  const VectorField F = VectorField::componentwise({"x/2", "y/2"}, 2);
  const BrouwerReport rep = brouwer_fixed_point(F, ConvexSet::ball({0.0, 0.0}, 1.0), 17, 2);
  CHECK(norm(rep.x) == 0.0);
  CHECK(rep.residual == 0.0);
}
