#ifndef VIKIT_CHECKERS_HPP
#define VIKIT_CHECKERS_HPP

#include "vi.hpp"

namespace vikit {

// Sampled property checks. Each returns a PropertyReport whose witness,
// when present, carries enough points and values to re-run the failing
// check verbatim. Sampling is seeded and fully deterministic; forced
// trials run before any random ones and are counted in `trials`.

struct PropertyWitness {
  std::vector<std::pair<std::string, Point>> points;
  std::vector<std::pair<std::string, double>> values;
  std::string note;
};

struct PropertyReport {
  std::string property;
  bool passed = true;
  long long trials = 0;
  double tol = 0.0;
  std::uint64_t seed = 0;
  std::optional<PropertyWitness> witness;
  std::vector<std::pair<std::string, long long>> counters;
};

namespace detail_check {

inline void bump(PropertyReport& rep, const std::string& key, long long by = 1) {
  for (auto& [k, v] : rep.counters)
    if (k == key) {
      v += by;
      return;
    }
  rep.counters.emplace_back(key, by);
}

inline Point combine(const Point& x, const Point& y, double t) {
  Point z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = (1.0 - t) * x[i] + t * y[i];
  return z;
}

}  // namespace detail_check

struct SegmentTrial {
  Point x;
  Point y;
  double t = 0.5;
};

struct QlOptions {
  long long trials = 1000;
  int t_samples = 9;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  std::vector<SegmentTrial> forced;
  bool forced_only = false;
};

// Image-segment property: for z on [x, y], A(z) must lie on the segment
// [A(x), A(y)] (within tol). Random trials test a ladder of interior t
// values per sampled pair; the first failure is kept as the witness.
inline PropertyReport check_ql(const VectorField& A, const ConvexSet& D, const QlOptions& opts) {
  PropertyReport rep;
  rep.property = "ql";
  rep.tol = opts.tol;
  rep.seed = opts.seed;
  auto run_one = [&](const Point& x, const Point& y, double t) -> bool {
    const Point z = detail_check::combine(x, y, t);
    const double d = segment_distance(evaluate(A, z), evaluate(A, x), evaluate(A, y));
    if (d > opts.tol) {
      rep.passed = false;
      PropertyWitness w;
      w.points = {{"x", x}, {"y", y}, {"z", z}};
      w.values = {{"t", t}, {"distance", d}};
      w.note = "image point leaves the image segment";
      rep.witness = w;
      return false;
    }
    return true;
  };
  for (const SegmentTrial& f : opts.forced) {
    ++rep.trials;
    if (!run_one(f.x, f.y, f.t)) return rep;
  }
  if (opts.forced_only) return rep;
  Rng rng(opts.seed);
  for (long long trial = 0; trial < opts.trials; ++trial) {
    const Point x = sample_point(D, rng);
    const Point y = sample_point(D, rng);
    ++rep.trials;
    for (int k = 1; k <= opts.t_samples; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(opts.t_samples + 1);
      if (!run_one(x, y, t)) return rep;
    }
  }
  return rep;
}

// Open-segment variant: additionally rejects image points that collapse
// onto an endpoint. Pairs with A(x) = A(y) make the open segment empty;
// those checks count as degenerate and the property cannot pass.
inline PropertyReport check_strict_ql(const VectorField& A, const ConvexSet& D,
                                      const QlOptions& opts) {
  PropertyReport rep;
  rep.property = "strict_ql";
  rep.tol = opts.tol;
  rep.seed = opts.seed;
  auto record = [&](const Point& x, const Point& y, double t, const Point& z, double value,
                    const std::string& note) {
    rep.passed = false;
    if (!rep.witness) {
      PropertyWitness w;
      w.points = {{"x", x}, {"y", y}, {"z", z}};
      w.values = {{"t", t}, {"value", value}};
      w.note = note;
      rep.witness = w;
    }
  };
  auto run_one = [&](const Point& x, const Point& y, double t) {
    const Point z = detail_check::combine(x, y, t);
    const Point Ax = evaluate(A, x), Ay = evaluate(A, y), Az = evaluate(A, z);
    const double span = distance(Ax, Ay);
    if (span <= opts.tol) {
      detail_check::bump(rep, "degenerate");
      record(x, y, t, z, span, "degenerate: endpoint images coincide, open segment is empty");
      return;
    }
    const double d = segment_distance(Az, Ax, Ay);
    if (d > opts.tol) {
      record(x, y, t, z, d, "image point leaves the image segment");
      return;
    }
    const double end = std::min(distance(Az, Ax), distance(Az, Ay));
    if (end <= opts.tol) {
      record(x, y, t, z, end, "image point hits an endpoint of the open segment");
      return;
    }
  };
  for (const SegmentTrial& f : opts.forced) {
    ++rep.trials;
    run_one(f.x, f.y, f.t);
    if (!rep.passed) return rep;
  }
  if (opts.forced_only) return rep;
  Rng rng(opts.seed);
  for (long long trial = 0; trial < opts.trials; ++trial) {
    Point x = sample_point(D, rng);
    Point y = sample_point(D, rng);
    for (int redraw = 0; redraw < 8 && y == x; ++redraw) y = sample_point(D, rng);
    if (y == x) continue;
    ++rep.trials;
    for (int k = 1; k <= opts.t_samples; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(opts.t_samples + 1);
      run_one(x, y, t);
      if (!rep.passed) return rep;
    }
  }
  return rep;
}

struct PairOptions {
  long long trials = 1000;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  std::vector<std::pair<Point, Point>> forced;
  bool forced_only = false;
};

// <A(x) - A(y), a(x) - a(y)> >= -tol over sampled pairs.
inline PropertyReport check_monotone_relative(const VectorField& A, const VectorField& a,
                                              const ConvexSet& D, const PairOptions& opts) {
  PropertyReport rep;
  rep.property = "monotone_relative";
  rep.tol = opts.tol;
  rep.seed = opts.seed;
  auto run_one = [&](const Point& x, const Point& y) -> bool {
    const double v = dot(sub(evaluate(A, x), evaluate(A, y)), sub(evaluate(a, x), evaluate(a, y)));
    if (v < -opts.tol) {
      rep.passed = false;
      PropertyWitness w;
      w.points = {{"x", x}, {"y", y}};
      w.values = {{"value", v}};
      w.note = "pair with negative monotonicity product";
      rep.witness = w;
      return false;
    }
    return true;
  };
  for (const auto& [x, y] : opts.forced) {
    ++rep.trials;
    if (!run_one(x, y)) return rep;
  }
  if (opts.forced_only) return rep;
  Rng rng(opts.seed);
  for (long long trial = 0; trial < opts.trials; ++trial) {
    const Point x = sample_point(D, rng);
    const Point y = sample_point(D, rng);
    ++rep.trials;
    if (!run_one(x, y)) return rep;
  }
  return rep;
}

// Pseudomonotonicity relative to a: whenever <A(x), a(y) - a(x)> >= -tol
// the consequent <A(y), a(y) - a(x)> >= -tol must hold. Pairs whose
// antecedent fails are counted as vacuous. The pair-draw pattern matches
// check_monotone_relative, so the same seed sees the same pairs.
inline PropertyReport check_a_pseudomonotone(const VectorField& A, const VectorField& a,
                                             const ConvexSet& D, const PairOptions& opts) {
  PropertyReport rep;
  rep.property = "a_pseudomonotone";
  rep.tol = opts.tol;
  rep.seed = opts.seed;
  auto run_one = [&](const Point& x, const Point& y) -> bool {
    const Point diff = sub(evaluate(a, y), evaluate(a, x));
    const double antecedent = dot(evaluate(A, x), diff);
    if (antecedent < -opts.tol) {
      detail_check::bump(rep, "vacuous");
      return true;
    }
    const double consequent = dot(evaluate(A, y), diff);
    if (consequent < -opts.tol) {
      rep.passed = false;
      PropertyWitness w;
      w.points = {{"x", x}, {"y", y}};
      w.values = {{"antecedent", antecedent}, {"consequent", consequent}};
      w.note = "antecedent holds but consequent is negative";
      rep.witness = w;
      return false;
    }
    return true;
  };
  for (const auto& [x, y] : opts.forced) {
    ++rep.trials;
    if (!run_one(x, y)) return rep;
  }
  if (opts.forced_only) return rep;
  Rng rng(opts.seed);
  for (long long trial = 0; trial < opts.trials; ++trial) {
    const Point x = sample_point(D, rng);
    const Point y = sample_point(D, rng);
    ++rep.trials;
    if (!run_one(x, y)) return rep;
  }
  return rep;
}

struct HullTrial {
  std::vector<Point> points;
  std::vector<double> weights;  // convex weights defining the combined point
};

struct HullImageOptions {
  int n_points = 4;
  long long trials = 1000;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  std::vector<HullTrial> forced;
  bool forced_only = false;
};

// Image of a convex combination must stay in the convex hull of the
// images: hull_distance(A(x), {A(x_i)}) <= tol for x = sum w_i x_i.
inline PropertyReport check_hull_image(const VectorField& A, const ConvexSet& D,
                                       const HullImageOptions& opts) {
  PropertyReport rep;
  rep.property = "hull_image";
  rep.tol = opts.tol;
  rep.seed = opts.seed;
  auto run_one = [&](const std::vector<Point>& pts, const std::vector<double>& w,
                     const Point& x) -> bool {
    std::vector<Point> images;
    images.reserve(pts.size());
    for (const Point& p : pts) images.push_back(evaluate(A, p));
    const HullDistanceResult hd = hull_distance_full(evaluate(A, x), images, 200, opts.tol);
    if (!hd.converged) {
      rep.passed = false;
      detail_check::bump(rep, "nonconverged");
      PropertyWitness wit;
      wit.points = {{"x", x}};
      wit.values = {{"dual_gap", hd.dual_gap}};
      wit.note = "hull distance solve did not converge";
      rep.witness = wit;
      return false;
    }
    if (hd.distance > opts.tol) {
      rep.passed = false;
      PropertyWitness wit;
      for (std::size_t i = 0; i < pts.size(); ++i)
        wit.points.emplace_back("x" + std::to_string(i + 1), pts[i]);
      wit.points.emplace_back("x", x);
      for (std::size_t i = 0; i < w.size(); ++i)
        wit.values.emplace_back("w" + std::to_string(i + 1), w[i]);
      wit.values.emplace_back("distance", hd.distance);
      wit.note = "image of the combination leaves the hull of the images";
      rep.witness = wit;
      return false;
    }
    return true;
  };
  for (const HullTrial& f : opts.forced) {
    if (f.points.empty() || f.points.size() != f.weights.size())
      throw Error("hull_image: forced trial needs matching points and weights");
    Point x(f.points[0].size(), 0.0);
    for (std::size_t j = 0; j < f.points.size(); ++j)
      for (std::size_t i = 0; i < x.size(); ++i) x[i] += f.weights[j] * f.points[j][i];
    ++rep.trials;
    if (!run_one(f.points, f.weights, x)) return rep;
  }
  if (opts.forced_only) return rep;
  Rng rng(opts.seed);
  for (long long trial = 0; trial < opts.trials; ++trial) {
    std::vector<Point> pts(static_cast<std::size_t>(opts.n_points));
    for (Point& p : pts) p = sample_point(D, rng);
    auto [x, w] = convex_sample(pts, rng);
    ++rep.trials;
    if (!run_one(pts, w, x)) return rep;
  }
  return rep;
}

struct KkmTrial {
  std::vector<Point> ys;
  std::vector<double> weights;
};

struct KkmOptions {
  int n_points = 3;
  long long trials = 1000;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  std::vector<KkmTrial> forced;
  bool forced_only = false;
};

// Covering property of the sets G(y) = {x : <A(y) - A(x), a(x)> >= 0}:
// any convex combination x of y_1..y_k must lie in some G(y_i), so
// max_i <A(y_i) - A(x), a(x)> >= -tol.
inline PropertyReport check_kkm(const VectorField& A, const VectorField& a, const ConvexSet& K,
                                const KkmOptions& opts) {
  PropertyReport rep;
  rep.property = "kkm";
  rep.tol = opts.tol;
  rep.seed = opts.seed;
  auto run_one = [&](const std::vector<Point>& ys, const std::vector<double>& w,
                     const Point& x) -> bool {
    const Point Ax = evaluate(A, x);
    const Point ax = evaluate(a, x);
    double best = -std::numeric_limits<double>::infinity();
    for (const Point& y : ys)
      best = std::max(best, inequality_lhs_values(VIKind::iS, Ax, evaluate(A, y), ax, ax));
    if (best < -opts.tol) {
      rep.passed = false;
      PropertyWitness wit;
      for (std::size_t i = 0; i < ys.size(); ++i)
        wit.points.emplace_back("y" + std::to_string(i + 1), ys[i]);
      wit.points.emplace_back("x", x);
      for (std::size_t i = 0; i < w.size(); ++i)
        wit.values.emplace_back("w" + std::to_string(i + 1), w[i]);
      wit.values.emplace_back("max_lhs", best);
      wit.note = "combination escapes every covering set";
      rep.witness = wit;
      return false;
    }
    return true;
  };
  for (const KkmTrial& f : opts.forced) {
    if (f.ys.empty() || f.ys.size() != f.weights.size())
      throw Error("kkm: forced trial needs matching points and weights");
    Point x(f.ys[0].size(), 0.0);
    for (std::size_t j = 0; j < f.ys.size(); ++j)
      for (std::size_t i = 0; i < x.size(); ++i) x[i] += f.weights[j] * f.ys[j][i];
    ++rep.trials;
    if (!run_one(f.ys, f.weights, x)) return rep;
  }
  if (opts.forced_only) return rep;
  Rng rng(opts.seed);
  for (long long trial = 0; trial < opts.trials; ++trial) {
    std::vector<Point> ys(static_cast<std::size_t>(opts.n_points));
    for (Point& y : ys) y = sample_point(K, rng);
    auto [x, w] = convex_sample(ys, rng);
    ++rep.trials;
    if (!run_one(ys, w, x)) return rep;
  }
  return rep;
}

enum class MintyDirection { iS_subset_iM, iM_subset_iS };

inline std::string to_string(MintyDirection d) {
  return d == MintyDirection::iS_subset_iM ? "iS_subset_iM" : "iM_subset_iS";
}

struct MintyOptions {
  int resolution = 41;
  double tol = 1e-9;
  MintyDirection direction = MintyDirection::iS_subset_iM;
};

// Grid-level solution-set inclusion between the iS and iM problems on
// the same data. Both gaps are computed from one pass of cached field
// values; offenders are grid points solving the first problem but not
// the second. The witness keeps the lowest-index offender plus the
// offender list capped at 64 entries.
inline PropertyReport check_minty_inclusion(const VectorField& A, const VectorField& a,
                                            const ConvexSet& K, const MintyOptions& opts) {
  PropertyReport rep;
  rep.property = "minty_inclusion";
  rep.tol = opts.tol;
  const SampleGrid grid = sample_grid(K, opts.resolution);
  const VIInstance inst = make_vi_instance(VIKind::iS, A, a, K);
  const GapEngine engine(inst, grid.points);
  const std::vector<Point>& As = engine.A_vals();
  const std::vector<Point>& as = engine.a_vals();
  const std::size_t n = grid.points.size();
  rep.trials = static_cast<long long>(n);

  std::vector<double> gap_is(n), gap_im(n);
  for (std::size_t i = 0; i < n; ++i) {
    double vis = -std::numeric_limits<double>::infinity();
    double vim = vis;
    for (std::size_t j = 0; j < n; ++j) {
      vis = std::max(vis, -inequality_lhs_values(VIKind::iS, As[i], As[j], as[i], as[j]));
      vim = std::max(vim, -inequality_lhs_values(VIKind::iM, As[i], As[j], as[i], as[j]));
    }
    gap_is[i] = vis + 0.0;
    gap_im[i] = vim + 0.0;
  }

  const bool from_is = opts.direction == MintyDirection::iS_subset_iM;
  long long n_is = 0, n_im = 0;
  std::vector<std::size_t> offenders;
  for (std::size_t i = 0; i < n; ++i) {
    const bool in_is = gap_is[i] <= opts.tol;
    const bool in_im = gap_im[i] <= opts.tol;
    n_is += in_is;
    n_im += in_im;
    const bool offending = from_is ? (in_is && !in_im) : (in_im && !in_is);
    if (offending) offenders.push_back(i);
  }
  detail_check::bump(rep, "in_iS", n_is);
  detail_check::bump(rep, "in_iM", n_im);
  detail_check::bump(rep, "difference", static_cast<long long>(offenders.size()));
  if (!offenders.empty()) {
    rep.passed = false;
    PropertyWitness wit;
    const std::size_t first = offenders[0];
    wit.points.emplace_back("x", grid.points[first]);
    wit.values = {{"gap_iS", gap_is[first]}, {"gap_iM", gap_im[first]}};
    const std::size_t cap = std::min<std::size_t>(offenders.size(), 64);
    for (std::size_t k = 0; k < cap; ++k)
      wit.points.emplace_back("diff_" + std::to_string(k), grid.points[offenders[k]]);
    wit.note = "inclusion " + to_string(opts.direction) + " fails at " +
               std::to_string(offenders.size()) + " grid points";
    rep.witness = wit;
  }
  return rep;
}

// Dense 1-D screen of the image-segment property on a uniform lattice.
// Checks triples (i, i + s/2, i + s) over doubling scales plus s = 3 and
// the full span, about 2n checks per scale set, against cached values.
inline PropertyReport check_ql_dense_1d(const VectorField& A, double lo, double hi,
                                        long long n_points = 100000, double tol = 1e-9) {
  if (A.dim_in() != 1 || A.dim_out() != 1)
    throw DimensionError("check_ql_dense_1d: field must map R^1 to R^1");
  if (n_points < 3) throw Error("check_ql_dense_1d: needs at least 3 points");
  PropertyReport rep;
  rep.property = "ql_dense_1d";
  rep.tol = tol;
  const long long last = n_points - 1;
  std::vector<double> xs(static_cast<std::size_t>(n_points));
  std::vector<double> vals(static_cast<std::size_t>(n_points));
  for (long long i = 0; i <= last; ++i) {
    xs[i] = lo + (hi - lo) * (static_cast<double>(i) / static_cast<double>(last));
    vals[i] = evaluate(A, {xs[i]})[0];
  }
  std::vector<long long> scales = {2, 3};
  for (long long s = 4; s < last; s *= 2) scales.push_back(s);
  if (last >= 2) scales.push_back(last);
  auto check_triple = [&](long long i, long long m, long long k) -> bool {
    ++rep.trials;
    const double left = std::min(vals[i], vals[k]);
    const double right = std::max(vals[i], vals[k]);
    const double v = vals[m];
    const double violation = std::max({0.0, v - right, left - v});
    if (violation > tol) {
      rep.passed = false;
      PropertyWitness w;
      w.points = {{"x", {xs[i]}}, {"z", {xs[m]}}, {"y", {xs[k]}}};
      w.values = {{"A_x", vals[i]}, {"A_z", v}, {"A_y", vals[k]}, {"violation", violation}};
      w.note = "interior value leaves the endpoint interval";
      rep.witness = w;
      return false;
    }
    return true;
  };
  for (long long s : scales) {
    if (s < 2 || s > last) continue;
    const long long step = std::max<long long>(1, s / 2);
    for (long long i = 0; i + s <= last; i += step)
      if (!check_triple(i, i + s / 2, i + s)) return rep;
  }
  return rep;
}

// Sign constancy of consecutive differences on the same lattice; the
// independent cross-check for the dense ql screen on monotone data.
inline PropertyReport monotone_scan_1d(const VectorField& A, double lo, double hi,
                                       long long n_points = 100000) {
  if (A.dim_in() != 1 || A.dim_out() != 1)
    throw DimensionError("monotone_scan_1d: field must map R^1 to R^1");
  if (n_points < 2) throw Error("monotone_scan_1d: needs at least 2 points");
  PropertyReport rep;
  rep.property = "monotone_1d";
  const long long last = n_points - 1;
  double prev_x = lo;
  double prev_v = evaluate(A, {lo})[0];
  long long up_at = -1, down_at = -1;
  double up_x0 = 0, up_x1 = 0, down_x0 = 0, down_x1 = 0;
  for (long long i = 1; i <= last; ++i) {
    const double x = lo + (hi - lo) * (static_cast<double>(i) / static_cast<double>(last));
    const double v = evaluate(A, {x})[0];
    ++rep.trials;
    if (v > prev_v && up_at < 0) {
      up_at = i;
      up_x0 = prev_x;
      up_x1 = x;
    }
    if (v < prev_v && down_at < 0) {
      down_at = i;
      down_x0 = prev_x;
      down_x1 = x;
    }
    prev_x = x;
    prev_v = v;
  }
  if (up_at >= 0 && down_at >= 0) {
    rep.passed = false;
    PropertyWitness w;
    w.points = {{"increasing_from", {up_x0}},
                {"increasing_to", {up_x1}},
                {"decreasing_from", {down_x0}},
                {"decreasing_to", {down_x1}}};
    w.note = "differences change sign, the field is not monotone on the lattice";
    rep.witness = w;
  }
  return rep;
}

}  // namespace vikit

#endif
