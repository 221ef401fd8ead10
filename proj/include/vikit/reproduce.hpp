#ifndef VIKIT_REPRODUCE_HPP
#define VIKIT_REPRODUCE_HPP

#include "instance_io.hpp"

namespace vikit {

// Regression pipelines for the bundled examples. Every expected value
// below is frozen; a reproduce run recomputes the measured side from
// scratch and compares. All pipelines are deterministic, so two runs of
// the same id produce byte-identical reports.

struct ReproStep {
  std::string name;
  bool ok = false;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct ReproResult {
  std::string id;
  bool ok = true;
  std::vector<ReproStep> steps;
};

namespace detail_repro {

inline void step_eq(ReproResult& r, const std::string& name, double measured, double expected,
                    double tolerance, const std::string& detail = "") {
  ReproStep s;
  s.name = name;
  s.measured = measured;
  s.expected = expected;
  s.tolerance = tolerance;
  s.ok = std::isfinite(measured) && std::fabs(measured - expected) <= tolerance;
  s.detail = detail;
  r.ok = r.ok && s.ok;
  r.steps.push_back(std::move(s));
}

inline void step_flag(ReproResult& r, const std::string& name, bool ok, double measured,
                      const std::string& detail) {
  ReproStep s;
  s.name = name;
  s.measured = measured;
  s.expected = ok ? measured : 0.0;
  s.ok = ok;
  s.detail = detail;
  r.ok = r.ok && ok;
  r.steps.push_back(std::move(s));
}

inline ReproResult repro_planar() {
  ReproResult r;
  r.id = "ex432";
  const CatalogEntry A = catalog_lookup("ex432_A");
  const CatalogEntry a = catalog_lookup("ex432_a");
  const VIInstance inst = make_vi_instance(VIKind::iS, A.field, a.field, A.domain);
  const LipschitzModuli lip{std::sqrt(7.0), 1.0};
  const SolveReport solve = solve_grid(inst, 41, -1.0, lip);
  step_eq(r, "best_gap", solve.best_gap, 1.0, 1e-12,
          "smallest sampled gap on the 41-grid");
  step_eq(r, "best_x_first_coordinate", solve.best_x[0], 0.0, 1e-12);
  step_flag(r, "verdict_no_solution", solve.verdict == Verdict::NoSolutionAtResolution,
            solve.verdict == Verdict::NoSolutionAtResolution ? 1.0 : 0.0,
            "no grid point closes the gap");
  step_flag(r, "certificate_holds",
            solve.certificate.has_value() && solve.certificate->holds,
            solve.certificate ? solve.certificate->margin : -1.0,
            "Lipschitz margin rules out off-grid solutions");

  QlOptions ql;
  ql.forced = {SegmentTrial{{0.0, 0.0}, {1.0, 1.0}, 0.5}};
  ql.forced_only = true;
  const PropertyReport qlrep = check_ql(A.field, A.domain, ql);
  step_flag(r, "ql_violation_found", !qlrep.passed, qlrep.passed ? 1.0 : 0.0,
            "midpoint image leaves the image segment");
  const double want = std::sqrt(2.0) / 16.0;
  step_eq(r, "ql_violation_distance",
          qlrep.witness ? qlrep.witness->values[1].second : -1.0, want, 1e-12,
          "distance of the midpoint image from the image segment");

  KkmOptions kkm;
  kkm.forced = {KkmTrial{{{0.5, -1.0}, {-0.5, -1.0}}, {0.5, 0.5}}};
  kkm.forced_only = true;
  const PropertyReport kkmrep = check_kkm(A.field, a.field, A.domain, kkm);
  step_flag(r, "kkm_violation_found", !kkmrep.passed, kkmrep.passed ? 1.0 : 0.0,
            "covering property fails for the forced pair");
  step_eq(r, "kkm_witness_max_lhs",
          kkmrep.witness ? kkmrep.witness->values.back().second : 1.0, -0.25, 1e-12);
  return r;
}

inline ReproResult repro_zigzag() {
  ReproResult r;
  r.id = "ex434";
  const CatalogEntry A = catalog_lookup("ex434_A");
  const CatalogEntry a = catalog_lookup("ex434_a");
  const Point x0 = {-0.5};
  const SampleGrid grid = sample_grid(A.domain, 41);
  const GapReport gim = gap(VIKind::iM, A.field, a.field, A.domain, x0, grid);
  step_eq(r, "gap_iM_at_minus_half", gim.gap, 0.0, 1e-12, "x0 solves the iM problem");
  const GapReport gis = gap(VIKind::iS, A.field, a.field, A.domain, x0, grid);
  step_eq(r, "gap_iS_at_minus_half", gis.gap, 2.0 / 3.0, 1e-12,
          "x0 does not solve the iS problem");
  step_eq(r, "gap_iS_worst_y", gis.worst_y[0], 1.0, 1e-12);
  step_eq(r, "lhs_iS_at_three_quarters",
          inequality_lhs(VIKind::iS, A.field, a.field, x0, {0.75}), -1.0 / 3.0, 1e-12,
          "explicit violating direction");
  MintyOptions minty;
  minty.direction = MintyDirection::iM_subset_iS;
  const PropertyReport mrep = check_minty_inclusion(A.field, a.field, A.domain, minty);
  step_flag(r, "minty_iM_not_subset_iS", !mrep.passed, mrep.passed ? 1.0 : 0.0,
            "iM solutions are not all iS solutions");
  step_eq(r, "minty_witness_x", mrep.witness ? mrep.witness->points[0].second[0] : 1.0, -0.5,
          1e-12, "lowest-index offending grid point");
  return r;
}

inline ReproResult repro_step() {
  ReproResult r;
  r.id = "ex4331";
  const CatalogEntry A = catalog_lookup("ex4331_A");
  const CatalogEntry a = catalog_lookup("ex4331_a");
  const Point x0 = {0.5};
  const SampleGrid grid = sample_grid(A.domain, 41);
  const GapReport gim = gap(VIKind::iM, A.field, a.field, A.domain, x0, grid);
  step_eq(r, "gap_iM_at_half", gim.gap, 0.0, 1e-12, "x0 solves the iM problem");
  const GapReport gis = gap(VIKind::iS, A.field, a.field, A.domain, x0, grid);
  step_eq(r, "gap_iS_at_half", gis.gap, 1.0, 1e-12, "x0 does not solve the iS problem");
  step_eq(r, "gap_iS_worst_y", gis.worst_y[0], -1.0, 1e-12,
          "lowest-index worst direction");

  MintyOptions minty;
  minty.direction = MintyDirection::iM_subset_iS;
  const PropertyReport mrep = check_minty_inclusion(A.field, a.field, A.domain, minty);
  step_flag(r, "minty_iM_not_subset_iS", !mrep.passed, mrep.passed ? 1.0 : 0.0,
            "iM solutions are not all iS solutions");
  double diff_count = 0.0;
  for (const auto& [name, v] : mrep.counters)
    if (name == "difference") diff_count = static_cast<double>(v);
  step_eq(r, "minty_difference_count", diff_count, 40.0, 0.0,
          "every grid point except 0 solves iM only");
  bool has_half = false;
  if (mrep.witness)
    for (const auto& [name, p] : mrep.witness->points)
      if (name.rfind("diff_", 0) == 0 && p.size() == 1 && p[0] == 0.5) has_half = true;
  step_flag(r, "minty_difference_contains_half", has_half, has_half ? 1.0 : 0.0,
            "x0 = 0.5 appears among the offenders");

  QlOptions strict;
  strict.forced = {SegmentTrial{{-1.0}, {1.0}, 0.25}};
  strict.forced_only = true;
  const PropertyReport srep = check_strict_ql(A.field, A.domain, strict);
  step_flag(r, "strict_ql_fails", !srep.passed, srep.passed ? 1.0 : 0.0,
            "midpoint image collapses onto an endpoint");
  const PropertyReport qrep = check_ql_dense_1d(A.field, -1.0, 1.0, 100000);
  step_flag(r, "dense_ql_passes", qrep.passed, qrep.passed ? 1.0 : 0.0,
            "step operator keeps the segment property on the dense lattice");
  const PropertyReport mono = monotone_scan_1d(A.field, -1.0, 1.0, 100000);
  step_flag(r, "monotone_scan_agrees", mono.passed == qrep.passed, mono.passed ? 1.0 : 0.0,
            "independent monotonicity scan gives the same verdict");
  return r;
}

inline ReproResult repro_brouwer_1d() {
  ReproResult r;
  r.id = "brouwer_1d";
  const VectorField F = VectorField::componentwise({"1 - x"}, 1);
  const ConvexSet K = ConvexSet::box({0.0}, {1.0});
  const BrouwerReport rep = brouwer_fixed_point(F, K, 41, 3);
  step_eq(r, "fixed_point", rep.x[0], 0.5, 1e-12, "unique fixed point of x -> 1 - x");
  step_eq(r, "residual", rep.residual, 0.0, 1e-12);
  double worst_increase = 0.0;
  for (std::size_t i = 1; i < rep.level_residuals.size(); ++i)
    worst_increase =
        std::max(worst_increase, rep.level_residuals[i] - rep.level_residuals[i - 1]);
  step_eq(r, "residuals_non_increasing", worst_increase, 0.0, 1e-15,
          "largest residual increase across refinement levels");
  return r;
}

inline ReproResult repro_brouwer_2d() {
  ReproResult r;
  r.id = "brouwer_2d";
  const VectorField F = VectorField::componentwise({"x/2", "y/2"}, 2);
  const ConvexSet K = ConvexSet::ball({0.0, 0.0}, 1.0);
  const BrouwerReport rep = brouwer_fixed_point(F, K, 33, 3);
  step_eq(r, "fixed_point_norm", norm(rep.x), 0.0, 1e-12, "contraction to the center");
  step_eq(r, "residual", rep.residual, 0.0, 1e-12);
  double worst_increase = 0.0;
  for (std::size_t i = 1; i < rep.level_residuals.size(); ++i)
    worst_increase =
        std::max(worst_increase, rep.level_residuals[i] - rep.level_residuals[i - 1]);
  step_eq(r, "residuals_non_increasing", worst_increase, 0.0, 1e-15,
          "largest residual increase across refinement levels");
  return r;
}

}  // namespace detail_repro

inline std::vector<std::string> reproduce_ids() {
  return {"ex432", "ex434", "ex4331", "brouwer_1d", "brouwer_2d"};
}

inline ReproResult reproduce(const std::string& id) {
  if (id == "ex432") return detail_repro::repro_planar();
  if (id == "ex434") return detail_repro::repro_zigzag();
  if (id == "ex4331") return detail_repro::repro_step();
  if (id == "brouwer_1d") return detail_repro::repro_brouwer_1d();
  if (id == "brouwer_2d") return detail_repro::repro_brouwer_2d();
  std::string known;
  for (const std::string& k : reproduce_ids()) {
    if (!known.empty()) known += ", ";
    known += k;
  }
  throw Error("unknown reproduce id '" + id + "' (known: " + known + ")");
}

inline json to_json(const ReproStep& s) {
  json out;
  out["name"] = s.name;
  out["ok"] = s.ok;
  out["measured"] = s.measured;
  out["expected"] = s.expected;
  out["tolerance"] = s.tolerance;
  if (!s.detail.empty()) out["detail"] = s.detail;
  return out;
}

inline json to_json(const ReproResult& r) {
  json out;
  out["id"] = r.id;
  out["ok"] = r.ok;
  json steps = json::array();
  for (const ReproStep& s : r.steps) steps.push_back(to_json(s));
  out["steps"] = steps;
  return out;
}

}  // namespace vikit

#endif
