#ifndef VIKIT_SOLVERS_HPP
#define VIKIT_SOLVERS_HPP

#include "vi.hpp"

namespace vikit {

enum class Verdict { SolutionFound, NoSolutionAtResolution };

inline std::string to_string(Verdict v) {
  return v == Verdict::SolutionFound ? "solution_found" : "no_solution_at_resolution";
}

struct LipschitzModuli {
  double L_A = 0.0;
  double L_a = 0.0;
};

// Rules out solutions at every point of the set, not just the grid: if
// the smallest sampled gap exceeds what a Lipschitz bound on the gap
// function can lose over one covering radius, no point of K has gap 0.
struct NonexistenceCertificate {
  double gap_min = 0.0;
  double gap_lipschitz = 0.0;
  double covering_radius = 0.0;
  double margin = 0.0;  // gap_min - gap_lipschitz * covering_radius
  bool holds = false;
};

struct SolveReport {
  Point best_x;
  double best_gap = 0.0;
  Point worst_y;
  long long worst_index = -1;
  int resolution = 0;
  int refinement_levels = 0;
  long long evaluations = 0;
  double tol = 0.0;
  Verdict verdict = Verdict::NoSolutionAtResolution;
  std::optional<NonexistenceCertificate> certificate;
};

namespace detail_solve {

// Heuristic grid scale: largest axis span of the bounding box over the
// per-axis point count. Used for refine radii and the default tolerance.
inline double base_spacing(const ConvexSet& K, int resolution) {
  const Box bb = K.bounding_box();
  double h = 0.0;
  for (std::size_t i = 0; i < bb.lower.size(); ++i)
    h = std::max(h, (bb.upper[i] - bb.lower[i]) / static_cast<double>(resolution - 1));
  return h;
}

inline double max_norm(const std::vector<Point>& vals) {
  double m = 0.0;
  for (const Point& v : vals) m = std::max(m, norm(v));
  return m;
}

// sup-norm Lipschitz bound for the gap function of each kind, from
// moduli of A and a and sup norms over the searched set.
inline double gap_lipschitz(VIKind kind, const LipschitzModuli& lip, double sup_A, double sup_a) {
  switch (kind) {
    case VIKind::S: return 2.0 * sup_a * lip.L_A + sup_A * lip.L_a;
    case VIKind::iS: return sup_a * lip.L_A + 2.0 * sup_A * lip.L_a;
    case VIKind::M: return sup_A * lip.L_a;
    case VIKind::iM: return sup_a * lip.L_A;
  }
  return 0.0;
}

inline std::string format_point(const Point& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ", ";
    s += detail_expr::format_double(p[i]);
  }
  return s + ")";
}

}  // namespace detail_solve

// Exhaustive scan: x and y both range over the same sample grid, so the
// best gap is exact for the sampled problem. tol < 0 selects the default
// 0.05 * spacing * sup field norm. With Lipschitz moduli and an exact
// covering radius (Box sets) the report carries a nonexistence
// certificate for the continuum problem.
inline SolveReport solve_grid(const VIInstance& inst, int resolution, double tol = -1.0,
                              const std::optional<LipschitzModuli>& lipschitz = std::nullopt) {
  const SampleGrid grid = sample_grid(inst.K, resolution);
  GapEngine engine(inst, grid.points);

  const double sup_A = detail_solve::max_norm(engine.A_vals());
  const double sup_a = detail_solve::max_norm(engine.a_vals());
  const double resolved_tol =
      tol >= 0.0 ? tol
                 : 0.05 * detail_solve::base_spacing(inst.K, resolution) * std::max(sup_A, sup_a);

  SolveReport rep;
  rep.resolution = resolution;
  rep.tol = resolved_tol;
  rep.evaluations = engine.evaluations();
  double best = std::numeric_limits<double>::infinity();
  long long best_i = -1, best_worst = -1;
  for (std::size_t i = 0; i < engine.ys().size(); ++i) {
    const GapEngine::MaxViolation mv = engine.max_violation(engine.A_vals()[i], engine.a_vals()[i]);
    const double g = mv.value + 0.0;
    if (g < best) {
      best = g;
      best_i = static_cast<long long>(i);
      best_worst = mv.index;
    }
  }
  rep.best_x = engine.ys()[static_cast<std::size_t>(best_i)];
  rep.best_gap = best;
  rep.worst_index = best_worst;
  rep.worst_y = engine.ys()[static_cast<std::size_t>(best_worst)];
  rep.verdict = best <= resolved_tol ? Verdict::SolutionFound : Verdict::NoSolutionAtResolution;

  if (lipschitz && grid.covering_radius) {
    NonexistenceCertificate cert;
    cert.gap_min = best;
    cert.covering_radius = *grid.covering_radius;
    const double m_A = sup_A + lipschitz->L_A * cert.covering_radius;
    const double m_a = sup_a + lipschitz->L_a * cert.covering_radius;
    cert.gap_lipschitz = detail_solve::gap_lipschitz(inst.kind, *lipschitz, m_A, m_a);
    cert.margin = cert.gap_min - cert.gap_lipschitz * cert.covering_radius;
    cert.holds = cert.margin > 0.0;
    rep.certificate = cert;
  }
  return rep;
}

// Local refinement around the incumbent: each level lays a lattice of
// the same per-axis resolution over a shrinking box centered at the
// current best x, while y keeps ranging over the union of the global
// coarse grid and the local lattice so tightening candidates are still
// tested against far-away points. The coarse certificate, if any, is
// carried over unchanged (it was established on the full grid).
inline SolveReport refine(const VIInstance& inst, const SolveReport& coarse, int levels,
                          double shrink = 0.5, double tol = -1.0) {
  if (levels < 1) return coarse;
  if (shrink <= 0.0 || shrink >= 1.0) throw Error("refine: shrink must lie in (0, 1)");
  const int res = coarse.resolution;
  const SampleGrid global = sample_grid(inst.K, res);
  const Box bb = inst.K.bounding_box();
  const int n = inst.K.dim();

  SolveReport current = coarse;
  long long evals = coarse.evaluations;
  const double resolved_tol = tol >= 0.0 ? tol : coarse.tol;
  double radius = detail_solve::base_spacing(inst.K, res) *
                  std::pow(shrink, static_cast<double>(coarse.refinement_levels));

  for (int level = 0; level < levels; ++level) {
    Point lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
      lo[i] = std::max(bb.lower[i], current.best_x[i] - radius);
      hi[i] = std::min(bb.upper[i], current.best_x[i] + radius);
    }
    std::vector<Point> cands;
    detail::for_each_lattice_index(n, res, [&](const std::vector<int>& idx) {
      Point p(n);
      for (int i = 0; i < n; ++i) p[i] = detail::lattice_coord(lo[i], hi[i], idx[i], res);
      if (contains(inst.K, p, 0.0)) cands.push_back(std::move(p));
    });
    if (std::find(cands.begin(), cands.end(), current.best_x) == cands.end())
      cands.push_back(current.best_x);

    std::vector<Point> ys = global.points;
    ys.insert(ys.end(), cands.begin(), cands.end());
    GapEngine engine(inst, std::move(ys));
    evals += engine.evaluations();

    const std::size_t off = global.points.size();
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_k = 0;
    long long best_worst = -1;
    for (std::size_t k = 0; k < cands.size(); ++k) {
      const GapEngine::MaxViolation mv =
          engine.max_violation(engine.A_vals()[off + k], engine.a_vals()[off + k]);
      const double g = mv.value + 0.0;
      if (g < best) {
        best = g;
        best_k = k;
        best_worst = mv.index;
      }
    }
    current.best_x = cands[best_k];
    current.best_gap = best;
    current.worst_index = best_worst;
    current.worst_y = engine.ys()[static_cast<std::size_t>(best_worst)];
    current.refinement_levels += 1;
    radius *= shrink;
  }
  current.tol = resolved_tol;
  current.evaluations = evals;
  current.verdict =
      current.best_gap <= resolved_tol ? Verdict::SolutionFound : Verdict::NoSolutionAtResolution;
  return current;
}

struct BrouwerReport {
  Point x;
  double residual = 0.0;
  std::vector<double> level_residuals;  // coarse first, then one per refinement level
  SolveReport solve;
};

// Fixed points of a self-map F of K, found by solving the inequality
// problem with A = identity and a = id - F: a point solves it exactly
// when F(x) = x, since taking y = F(x) forces <y - x, x - F(x)> =
// -|F(x) - x|^2 >= 0. Rejects maps that leave K anywhere on the grid.
inline BrouwerReport brouwer_fixed_point(const VectorField& F, const ConvexSet& K, int resolution,
                                         int levels = 0, double shrink = 0.5) {
  if (F.dim_in() != K.dim() || F.dim_out() != K.dim())
    throw DimensionError("fixed_point: F must be a self-map of the set");
  const SampleGrid grid = sample_grid(K, resolution);
  for (const Point& g : grid.points) {
    const Point img = evaluate(F, g);
    if (!contains(K, img, 1e-9))
      throw Error("fixed_point: F leaves the set at grid point " + detail_solve::format_point(g) +
                  " with image " + detail_solve::format_point(img));
  }
  const VIInstance inst =
      make_vi_instance(VIKind::iS, VectorField::identity(K.dim()), VectorField::id_minus(F), K);
  BrouwerReport rep;
  SolveReport solve = solve_grid(inst, resolution);
  rep.level_residuals.push_back(distance(evaluate(F, solve.best_x), solve.best_x));
  for (int level = 0; level < levels; ++level) {
    solve = refine(inst, solve, 1, shrink);
    rep.level_residuals.push_back(distance(evaluate(F, solve.best_x), solve.best_x));
  }
  rep.x = solve.best_x;
  rep.residual = rep.level_residuals.back();
  rep.solve = std::move(solve);
  return rep;
}

}  // namespace vikit

#endif
