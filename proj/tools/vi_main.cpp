// Command line front end: solve and check inequality-problem instances,
// search for fixed points, re-run the bundled regression pipelines and
// export gap fields. All reports are deterministic; timing goes to
// stderr so identical runs stay byte-identical on stdout and in files.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "vikit/vikit.hpp"

namespace {

using vikit::json;

void emit(const json& report, const std::optional<std::string>& out_path) {
  const std::string text = report.dump(2) + "\n";
  if (out_path) {
    std::ofstream out(*out_path, std::ios::binary);
    if (!out) throw vikit::Error("cannot write report to '" + *out_path + "'");
    out << text;
  } else {
    std::cout << text;
  }
}

struct CommonOpts {
  std::string file;
  std::optional<int> resolution;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

int cmd_solve(const CommonOpts& c, const std::optional<int>& refine_levels,
              const std::optional<double>& shrink) {
  vikit::InstanceFile f = vikit::load_instance(c.file);
  if (c.resolution) f.solver.resolution = *c.resolution;
  if (c.tol) f.solver.tol = *c.tol;
  if (refine_levels) f.solver.refine_levels = *refine_levels;
  if (shrink) f.solver.shrink = *shrink;
  if (c.seed) f.seed = *c.seed;
  const vikit::VIInstance inst = vikit::to_vi_instance(f);
  vikit::SolveReport rep =
      vikit::solve_grid(inst, f.solver.resolution, f.solver.tol, f.lipschitz);
  if (f.solver.refine_levels > 0)
    rep = vikit::refine(inst, rep, f.solver.refine_levels, f.solver.shrink, f.solver.tol);
  emit(vikit::run_report_json("solve", vikit::instance_digest(f), vikit::to_json(rep)), c.out);
  return rep.verdict == vikit::Verdict::SolutionFound ? 0 : 2;
}

int cmd_check(const CommonOpts& c, const std::string& property,
              const std::optional<long long>& trials, const std::optional<int>& t_samples,
              const std::optional<int>& n_points, const std::string& direction) {
  vikit::InstanceFile f = vikit::load_instance(c.file);
  if (c.seed) f.seed = *c.seed;
  if (c.resolution) f.solver.resolution = *c.resolution;
  if (!f.set) throw vikit::Error("check: instance has no set");
  if (!f.A) throw vikit::Error("check: instance has no operator A");
  const double tol = c.tol.value_or(1e-9);
  const vikit::ConvexSet& K = *f.set;
  const vikit::VectorField& A = *f.A;
  auto need_a = [&]() -> const vikit::VectorField& {
    if (!f.a) throw vikit::Error("check: property '" + property + "' needs the field a");
    return *f.a;
  };

  vikit::PropertyReport rep;
  if (property == "ql" || property == "strict_ql") {
    vikit::QlOptions o;
    o.tol = tol;
    o.seed = f.seed;
    if (trials) o.trials = *trials;
    if (t_samples) o.t_samples = *t_samples;
    rep = property == "ql" ? vikit::check_ql(A, K, o) : vikit::check_strict_ql(A, K, o);
  } else if (property == "monotone_relative" || property == "a_pseudomonotone") {
    vikit::PairOptions o;
    o.tol = tol;
    o.seed = f.seed;
    if (trials) o.trials = *trials;
    rep = property == "monotone_relative" ? vikit::check_monotone_relative(A, need_a(), K, o)
                                          : vikit::check_a_pseudomonotone(A, need_a(), K, o);
  } else if (property == "hull_image") {
    vikit::HullImageOptions o;
    o.tol = tol;
    o.seed = f.seed;
    if (trials) o.trials = *trials;
    if (n_points) o.n_points = *n_points;
    rep = vikit::check_hull_image(A, K, o);
  } else if (property == "kkm") {
    vikit::KkmOptions o;
    o.tol = tol;
    o.seed = f.seed;
    if (trials) o.trials = *trials;
    if (n_points) o.n_points = *n_points;
    rep = vikit::check_kkm(A, need_a(), K, o);
  } else if (property == "minty") {
    vikit::MintyOptions o;
    o.tol = tol;
    o.resolution = f.solver.resolution;
    if (direction == "iS_subset_iM")
      o.direction = vikit::MintyDirection::iS_subset_iM;
    else if (direction == "iM_subset_iS")
      o.direction = vikit::MintyDirection::iM_subset_iS;
    else
      throw vikit::Error("check: --direction must be iS_subset_iM or iM_subset_iS");
    rep = vikit::check_minty_inclusion(A, need_a(), K, o);
  } else {
    throw vikit::Error("unknown property '" + property +
                       "' (known: ql, strict_ql, monotone_relative, a_pseudomonotone, "
                       "hull_image, kkm, minty)");
  }
  emit(vikit::run_report_json("check", vikit::instance_digest(f), vikit::to_json(rep)), c.out);
  return rep.passed ? 0 : 2;
}

int cmd_fixed_point(const CommonOpts& c, const std::optional<int>& levels,
                    const std::optional<double>& shrink) {
  vikit::InstanceFile f = vikit::load_instance(c.file);
  if (c.resolution) f.solver.resolution = *c.resolution;
  if (!f.set || !f.F) throw vikit::Error("fixed-point: instance needs 'set' and 'F'");
  const int lv = levels.value_or(f.solver.refine_levels);
  const double sh = shrink.value_or(f.solver.shrink);
  double tol = c.tol.value_or(f.solver.tol);
  if (tol < 0.0) tol = 1e-9;
  const vikit::BrouwerReport rep =
      vikit::brouwer_fixed_point(*f.F, *f.set, f.solver.resolution, lv, sh);
  json payload = vikit::to_json(rep);
  payload["tol"] = tol;
  emit(vikit::run_report_json("fixed-point", vikit::instance_digest(f), std::move(payload)),
       c.out);
  return rep.residual <= tol ? 0 : 2;
}

int cmd_reproduce(const std::string& id, const std::optional<std::string>& out) {
  const vikit::ReproResult r = vikit::reproduce(id);
  emit(vikit::run_report_json("reproduce", id, vikit::to_json(r)), out);
  return r.ok ? 0 : 2;
}

int cmd_export_gap_field(const CommonOpts& c, const std::string& csv_path) {
  vikit::InstanceFile f = vikit::load_instance(c.file);
  if (c.resolution) f.solver.resolution = *c.resolution;
  if (f.dimension > 3)
    throw vikit::Error("export-gap-field: defined for dimension <= 3, instance has dimension " +
                       std::to_string(f.dimension));
  const vikit::VIInstance inst = vikit::to_vi_instance(f);
  const std::string csv = vikit::gap_field_csv(inst, f.solver.resolution);
  std::ofstream out(csv_path, std::ios::binary);
  if (!out) throw vikit::Error("cannot write CSV to '" + csv_path + "'");
  out << csv;
  out.close();
  long long rows = -1;  // header line is not a row
  for (char ch : csv)
    if (ch == '\n') ++rows;
  json payload;
  payload["path"] = csv_path;
  payload["rows"] = rows;
  payload["resolution"] = f.solver.resolution;
  emit(vikit::run_report_json("export-gap-field", vikit::instance_digest(f), std::move(payload)),
       c.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grid solver and property checker for generalized inequality problems"};
  app.require_subcommand(1);

  CommonOpts c;
  std::optional<int> refine_levels, levels, t_samples, n_points;
  std::optional<double> shrink;
  std::optional<long long> trials;
  std::string property, direction = "iS_subset_iM", repro_id, csv_path;

  auto add_common = [&](CLI::App* cmd, bool with_file = true) {
    if (with_file) cmd->add_option("file", c.file, "instance JSON file")->required();
    cmd->add_option("--resolution", c.resolution, "override grid resolution");
    cmd->add_option("--tol", c.tol, "override tolerance");
    cmd->add_option("--seed", c.seed, "override instance seed");
    cmd->add_option("--out", c.out, "write the JSON report to this file instead of stdout");
  };

  CLI::App* solve = app.add_subcommand("solve", "grid search for solutions of an instance");
  add_common(solve);
  solve->add_option("--refine-levels", refine_levels, "local refinement levels after the scan");
  solve->add_option("--shrink", shrink, "refinement radius shrink factor in (0, 1)");

  CLI::App* check = app.add_subcommand("check", "run a sampled property check on an instance");
  add_common(check);
  check->add_option("--property", property, "property to check")->required();
  check->add_option("--trials", trials, "number of random trials");
  check->add_option("--t-samples", t_samples, "interior segment samples per trial");
  check->add_option("--n-points", n_points, "points per combination trial");
  check->add_option("--direction", direction, "minty inclusion direction");

  CLI::App* fixed = app.add_subcommand("fixed-point", "search for a fixed point of F on the set");
  add_common(fixed);
  fixed->add_option("--levels", levels, "refinement levels");
  fixed->add_option("--shrink", shrink, "refinement radius shrink factor in (0, 1)");

  CLI::App* repro = app.add_subcommand("reproduce", "re-run a bundled regression pipeline");
  repro->add_option("id", repro_id, "pipeline id (ex432, ex434, ex4331, brouwer_1d, brouwer_2d)")
      ->required();
  repro->add_option("--out", c.out, "write the JSON report to this file instead of stdout");

  CLI::App* exp = app.add_subcommand("export-gap-field", "write the sampled gap field as CSV");
  add_common(exp, true);
  exp->add_option("-o,--csv", csv_path, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const auto start = std::chrono::steady_clock::now();
  int rc = 1;
  try {
    if (solve->parsed()) rc = cmd_solve(c, refine_levels, shrink);
    else if (check->parsed()) rc = cmd_check(c, property, trials, t_samples, n_points, direction);
    else if (fixed->parsed()) rc = cmd_fixed_point(c, levels, shrink);
    else if (repro->parsed()) rc = cmd_reproduce(repro_id, c.out);
    else if (exp->parsed()) rc = cmd_export_gap_field(c, csv_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    rc = 1;
  }
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  std::cerr << "elapsed_ms=" << elapsed << "\n";
  return rc;
}
