#ifndef VIKIT_GEOMETRY_HPP
#define VIKIT_GEOMETRY_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <variant>

#include "common.hpp"

namespace vikit {

struct Box {
  Point lower;
  Point upper;
};

struct Ball {
  Point center;
  double radius;
};

struct Simplex {
  std::vector<Point> vertices;  // dim + 1 affinely independent points
};

struct Hull {
  std::vector<Point> vertices;  // any finite nonempty set
};

// Compact convex subset of R^n. Construction validates shape so the rest
// of the library can assume well-formed sets.
class ConvexSet {
 public:
  using Body = std::variant<Box, Ball, Simplex, Hull>;

  static ConvexSet box(Point lower, Point upper) {
    if (lower.empty() || lower.size() != upper.size())
      throw DimensionError("box: lower/upper must be nonempty and equally sized");
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || lower[i] > upper[i])
        throw Error("box: requires finite lower <= upper on every axis");
    }
    return ConvexSet(Box{std::move(lower), std::move(upper)});
  }

  static ConvexSet ball(Point center, double radius) {
    if (center.empty()) throw DimensionError("ball: center must be nonempty");
    if (!all_finite(center) || !std::isfinite(radius) || radius <= 0.0)
      throw Error("ball: requires finite center and radius > 0");
    return ConvexSet(Ball{std::move(center), radius});
  }

  static ConvexSet simplex(std::vector<Point> vertices) {
    if (vertices.empty()) throw Error("simplex: needs vertices");
    const std::size_t n = vertices[0].size();
    if (n == 0 || vertices.size() != n + 1)
      throw DimensionError("simplex: needs dim + 1 vertices in R^dim");
    for (const Point& v : vertices) {
      if (v.size() != n) throw DimensionError("simplex: inconsistent vertex dimensions");
      if (!all_finite(v)) throw Error("simplex: vertices must be finite");
    }
    if (!affinely_independent(vertices))
      throw Error("simplex: vertices are affinely dependent");
    return ConvexSet(Simplex{std::move(vertices)});
  }

  static ConvexSet hull(std::vector<Point> vertices) {
    if (vertices.empty()) throw Error("hull: needs at least one vertex");
    const std::size_t n = vertices[0].size();
    if (n == 0) throw DimensionError("hull: vertices must be nonempty points");
    for (const Point& v : vertices) {
      if (v.size() != n) throw DimensionError("hull: inconsistent vertex dimensions");
      if (!all_finite(v)) throw Error("hull: vertices must be finite");
    }
    return ConvexSet(Hull{std::move(vertices)});
  }

  int dim() const {
    if (const Box* b = std::get_if<Box>(&body_)) return static_cast<int>(b->lower.size());
    if (const Ball* b = std::get_if<Ball>(&body_)) return static_cast<int>(b->center.size());
    if (const Simplex* s = std::get_if<Simplex>(&body_))
      return static_cast<int>(s->vertices[0].size());
    return static_cast<int>(std::get<Hull>(body_).vertices[0].size());
  }

  const Body& body() const { return body_; }

  // Smallest axis-aligned box containing the set, used for lattice sampling.
  Box bounding_box() const {
    if (const Box* b = std::get_if<Box>(&body_)) return *b;
    if (const Ball* b = std::get_if<Ball>(&body_)) {
      Point lo = b->center, hi = b->center;
      for (std::size_t i = 0; i < lo.size(); ++i) {
        lo[i] -= b->radius;
        hi[i] += b->radius;
      }
      return Box{lo, hi};
    }
    const std::vector<Point>& vs =
        std::holds_alternative<Simplex>(body_) ? std::get<Simplex>(body_).vertices
                                               : std::get<Hull>(body_).vertices;
    Point lo = vs[0], hi = vs[0];
    for (const Point& v : vs)
      for (std::size_t i = 0; i < v.size(); ++i) {
        lo[i] = std::min(lo[i], v[i]);
        hi[i] = std::max(hi[i], v[i]);
      }
    return Box{lo, hi};
  }

 private:
  explicit ConvexSet(Body b) : body_(std::move(b)) {}

  static bool affinely_independent(const std::vector<Point>& vs) {
    // Rank check on the edge matrix via Gram-Schmidt with a fixed cutoff.
    const std::size_t n = vs[0].size();
    std::vector<Point> basis;
    for (std::size_t k = 1; k < vs.size(); ++k) {
      Point w = sub(vs[k], vs[0]);
      for (const Point& b : basis) {
        const double c = dot(w, b);
        for (std::size_t i = 0; i < n; ++i) w[i] -= c * b[i];
      }
      const double len = norm(w);
      if (len < 1e-10) return false;
      basis.push_back(scale(1.0 / len, w));
    }
    return true;
  }

  Body body_;
};

// Distance from p to the segment [a, b], by projection with clamped
// parameter. Degenerate segments fall back to point distance.
inline double segment_distance(const Point& p, const Point& a, const Point& b) {
  require_same_dim(p, a, "segment_distance");
  require_same_dim(p, b, "segment_distance");
  const Point ab = sub(b, a);
  const double denom = norm2(ab);
  if (denom == 0.0) return distance(p, a);
  double t = dot(sub(p, a), ab) / denom;
  t = std::clamp(t, 0.0, 1.0);
  Point proj(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) proj[i] = a[i] + t * ab[i];
  return distance(p, proj);
}

struct HullDistanceResult {
  double distance = 0.0;
  double dual_gap = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Distance from p to conv{vertices} by Wolfe's minimum norm point
// algorithm: Frank-Wolfe vertex selection plus affine minimization over
// the active vertex set. Converges finitely in exact arithmetic. Stops
// when |x| <= tol (the true distance lies in [0, |x|], x being a hull
// point) or when the duality gap |x|^2 - min_j <x, w_j> drops to
// tol * |x| (gap / |x| bounds the distance error). Interior points need
// the first rule: once x sits at rounding distance from zero the gap
// cannot beat rounding noise. Plain Frank-Wolfe is hopeless at
// tol = 1e-9 (O(1/k) rate), hence the active-set step.
inline HullDistanceResult hull_distance_full(const Point& p, const std::vector<Point>& vertices,
                                             int max_iter = 200, double tol = 1e-9) {
  if (vertices.empty()) throw Error("hull_distance: empty vertex set");
  for (const Point& v : vertices) require_same_dim(p, v, "hull_distance");
  const std::size_t n = p.size();
  const std::size_t m = vertices.size();

  // Work with W_j = v_j - p; we seek the min norm point of conv{W_j}.
  std::vector<Point> w(m);
  for (std::size_t j = 0; j < m; ++j) w[j] = sub(vertices[j], p);

  HullDistanceResult res;
  if (m == 1) {
    res.distance = norm(w[0]);
    res.converged = true;
    return res;
  }

  std::size_t start = 0;
  double best = norm2(w[0]);
  for (std::size_t j = 1; j < m; ++j) {
    const double c = norm2(w[j]);
    if (c < best) {
      best = c;
      start = j;
    }
  }
  std::vector<std::size_t> active{start};
  std::vector<double> lam{1.0};
  Point x = w[start];

  auto rebuild = [&]() {
    x.assign(n, 0.0);
    for (std::size_t k = 0; k < active.size(); ++k)
      for (std::size_t i = 0; i < n; ++i) x[i] += lam[k] * w[active[k]][i];
  };

  for (int iter = 1; iter <= max_iter; ++iter) {
    res.iterations = iter;
    const double xx = norm2(x);
    std::size_t j_best = 0;
    double inner_best = dot(x, w[0]);
    for (std::size_t j = 1; j < m; ++j) {
      const double c = dot(x, w[j]);
      if (c < inner_best) {
        inner_best = c;
        j_best = j;
      }
    }
    res.dual_gap = xx - inner_best;
    const double xn = std::sqrt(xx);
    if (xn <= tol || res.dual_gap <= tol * xn) {
      res.converged = true;
      break;
    }
    if (std::find(active.begin(), active.end(), j_best) == active.end()) {
      active.push_back(j_best);
      lam.push_back(0.0);
    }

    // Minor cycle: pull the iterate to the affine minimizer over the
    // active set, dropping vertices whose weight would go negative.
    for (std::size_t guard = 0; guard <= active.size(); ++guard) {
      const int k = static_cast<int>(active.size());
      // KKT system of min |sum a_i W_i|^2 s.t. sum a_i = 1.
      std::vector<double> aug((k + 1) * (k + 2), 0.0);
      const int cols = k + 2;
      for (int r = 0; r < k; ++r) {
        for (int c = 0; c < k; ++c) aug[r * cols + c] = dot(w[active[r]], w[active[c]]);
        aug[r * cols + k] = 1.0;
        aug[r * cols + k + 1] = 0.0;
      }
      for (int c = 0; c < k; ++c) aug[k * cols + c] = 1.0;
      aug[k * cols + k] = 0.0;
      aug[k * cols + k + 1] = 1.0;
      std::vector<double> sol;
      if (!solve_linear(aug, k + 1, sol)) {
        // Singular Gram (duplicate vertices); take a plain line-search
        // step toward the chosen vertex instead.
        const Point d = sub(w[j_best], x);
        const double dd = norm2(d);
        if (dd > 0.0) {
          double t = -dot(x, d) / dd;
          t = std::clamp(t, 0.0, 1.0);
          for (double& l : lam) l *= (1.0 - t);
          for (std::size_t idx = 0; idx < active.size(); ++idx)
            if (active[idx] == j_best) lam[idx] += t;
          rebuild();
        }
        break;
      }
      bool feasible = true;
      for (int i = 0; i < k; ++i)
        if (sol[i] < -1e-12) feasible = false;
      if (feasible) {
        for (int i = 0; i < k; ++i) lam[i] = std::max(sol[i], 0.0);
        rebuild();
        break;
      }
      // Step as far toward the affine minimizer as nonnegativity allows,
      // then drop the vertices that hit zero.
      double theta = 1.0;
      for (int i = 0; i < k; ++i)
        if (sol[i] < lam[i]) theta = std::min(theta, lam[i] / (lam[i] - sol[i]));
      std::vector<std::size_t> next_active;
      std::vector<double> next_lam;
      for (int i = 0; i < k; ++i) {
        const double l = lam[i] + theta * (sol[i] - lam[i]);
        if (l > 1e-14) {
          next_active.push_back(active[i]);
          next_lam.push_back(l);
        }
      }
      if (next_active.empty()) {
        next_active.push_back(active[0]);
        next_lam.push_back(1.0);
      }
      active = std::move(next_active);
      lam = std::move(next_lam);
      rebuild();
    }
  }
  res.distance = norm(x);
  return res;
}

inline double hull_distance(const Point& p, const std::vector<Point>& vertices,
                            int max_iter = 200, double tol = 1e-9) {
  const HullDistanceResult r = hull_distance_full(p, vertices, max_iter, tol);
  if (!r.converged)
    throw ConvergenceError("hull_distance: duality gap " + std::to_string(r.dual_gap) +
                           " after " + std::to_string(r.iterations) + " iterations");
  return r.distance;
}

namespace detail {

// Barycentric coordinates of p in a simplex, via the edge-matrix solve.
// Returns nullopt when the solve is singular (cannot happen for sets that
// passed construction, but kept defensive).
inline std::optional<std::vector<double>> barycentric(const Simplex& s, const Point& p) {
  const int n = static_cast<int>(p.size());
  std::vector<double> aug(n * (n + 1));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) aug[r * (n + 1) + c] = s.vertices[c + 1][r] - s.vertices[0][r];
    aug[r * (n + 1) + n] = p[r] - s.vertices[0][r];
  }
  std::vector<double> lam_tail;
  if (!solve_linear(aug, n, lam_tail)) return std::nullopt;
  std::vector<double> lam(n + 1);
  double sum_tail = 0.0;
  for (int i = 0; i < n; ++i) {
    lam[i + 1] = lam_tail[i];
    sum_tail += lam_tail[i];
  }
  lam[0] = 1.0 - sum_tail;
  return lam;
}

}  // namespace detail

// Membership test with tolerance in Euclidean distance. Box and Ball are
// exact; Simplex uses barycentric coordinates with a 1e-12 slack and
// Hull (or a near-boundary Simplex point) falls back to the iterative
// hull distance, so membership carries that intrinsic numerical slack.
inline bool contains(const ConvexSet& set, const Point& p, double tol = 0.0) {
  if (static_cast<int>(p.size()) != set.dim())
    throw DimensionError("contains: point dimension does not match set");
  if (!all_finite(p)) return false;
  if (tol < 0.0) tol = 0.0;
  if (const Box* b = std::get_if<Box>(&set.body())) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double excess = std::max({0.0, b->lower[i] - p[i], p[i] - b->upper[i]});
      d2 += excess * excess;
    }
    return std::sqrt(d2) <= tol;
  }
  if (const Ball* b = std::get_if<Ball>(&set.body()))
    return distance(p, b->center) <= b->radius + tol;
  if (const Simplex* s = std::get_if<Simplex>(&set.body())) {
    if (auto lam = detail::barycentric(*s, p)) {
      double lo = 0.0;
      for (double l : *lam) lo = std::min(lo, l);
      if (lo >= -1e-12) return true;
      // Near or past the boundary: decide by actual distance.
      const HullDistanceResult r = hull_distance_full(p, s->vertices, 200, 1e-12);
      return r.distance <= tol + 1e-12;
    }
    return false;
  }
  const Hull& h = std::get<Hull>(set.body());
  for (const Point& v : h.vertices)
    if (v == p) return true;
  const HullDistanceResult r = hull_distance_full(p, h.vertices, 200, 1e-12);
  return r.distance <= tol + 1e-12;
}

struct SampleGrid {
  std::vector<Point> points;
  int resolution = 0;
  // Covering radius of the grid inside the set (every set point is within
  // this distance of a grid point). Exact for Box, absent otherwise.
  std::optional<double> covering_radius;
};

namespace detail {

template <typename Fn>
inline void for_each_lattice_index(int axes, int resolution, Fn&& fn) {
  // Lexicographic: first axis outermost, so index 0 is the lower corner.
  std::vector<int> idx(axes, 0);
  for (;;) {
    fn(idx);
    int axis = axes - 1;
    while (axis >= 0) {
      if (++idx[axis] < resolution) break;
      idx[axis] = 0;
      --axis;
    }
    if (axis < 0) return;
  }
}

inline double lattice_coord(double lo, double hi, int k, int resolution) {
  // k/(res-1) first: power-of-two denominators make witness coordinates
  // like 0.75 or -0.5 land exactly on the grid.
  return lo + (hi - lo) * (static_cast<double>(k) / static_cast<double>(resolution - 1));
}

inline SampleGrid box_grid(const Box& b, int resolution) {
  const int n = static_cast<int>(b.lower.size());
  SampleGrid g;
  g.resolution = resolution;
  for_each_lattice_index(n, resolution, [&](const std::vector<int>& idx) {
    Point p(n);
    for (int i = 0; i < n; ++i) p[i] = lattice_coord(b.lower[i], b.upper[i], idx[i], resolution);
    g.points.push_back(std::move(p));
  });
  double d2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double h = (b.upper[i] - b.lower[i]) / static_cast<double>(resolution - 1);
    d2 += h * h;
  }
  g.covering_radius = 0.5 * std::sqrt(d2);
  return g;
}

// Weight lattice over the vertices: all integer compositions k_1..k_m of
// resolution-1, enumerated lexicographically over (k_1..k_{m-1}).
template <typename Fn>
inline void for_each_composition(int parts, int total, Fn&& fn) {
  std::vector<int> k(parts, 0);
  std::vector<int> head(parts - 1, 0);
  for (;;) {
    int sum = 0;
    for (int h : head) sum += h;
    if (sum <= total) {
      for (int i = 0; i + 1 < parts; ++i) k[i] = head[i];
      k[parts - 1] = total - sum;
      fn(k);
    }
    int axis = parts - 2;
    while (axis >= 0) {
      if (++head[axis] <= total) break;
      head[axis] = 0;
      --axis;
    }
    if (axis < 0) return;
  }
}

inline SampleGrid vertex_grid(const std::vector<Point>& vertices, int resolution) {
  const int m = static_cast<int>(vertices.size());
  const int n = static_cast<int>(vertices[0].size());
  SampleGrid g;
  g.resolution = resolution;
  if (m == 1) {
    g.points.push_back(vertices[0]);
    return g;
  }
  const int denom = resolution - 1;
  for_each_composition(m, denom, [&](const std::vector<int>& k) {
    Point p(n, 0.0);
    for (int j = 0; j < m; ++j) {
      const double lam = static_cast<double>(k[j]) / static_cast<double>(denom);
      for (int i = 0; i < n; ++i) p[i] += lam * vertices[j][i];
    }
    g.points.push_back(std::move(p));
  });
  return g;
}

}  // namespace detail

// Deterministic finite sample of the set. resolution = points per axis
// (vertex-weight denominator + 1 for Simplex/Hull); endpoints included.
// Ball grids are the bounding-box lattice filtered by membership with the
// center appended if it is not already present.
inline SampleGrid sample_grid(const ConvexSet& set, int resolution) {
  if (resolution < 2) throw Error("sample_grid: resolution must be >= 2");
  if (const Box* b = std::get_if<Box>(&set.body())) return detail::box_grid(*b, resolution);
  if (const Ball* b = std::get_if<Ball>(&set.body())) {
    SampleGrid g = detail::box_grid(set.bounding_box(), resolution);
    g.covering_radius.reset();
    std::vector<Point> kept;
    for (Point& p : g.points)
      if (distance(p, b->center) <= b->radius) kept.push_back(std::move(p));
    if (std::find(kept.begin(), kept.end(), b->center) == kept.end())
      kept.push_back(b->center);
    g.points = std::move(kept);
    return g;
  }
  if (const Simplex* s = std::get_if<Simplex>(&set.body()))
    return detail::vertex_grid(s->vertices, resolution);
  return detail::vertex_grid(std::get<Hull>(set.body()).vertices, resolution);
}

// Random convex combination of the vertices: i.i.d. uniform weights
// normalized to sum 1. The last weight is recomputed as 1 minus the rest
// so the weights sum to exactly 1.0 in floating point.
inline std::pair<Point, std::vector<double>> convex_sample(const std::vector<Point>& vertices,
                                                           Rng& rng) {
  if (vertices.empty()) throw Error("convex_sample: empty vertex set");
  const std::size_t m = vertices.size();
  const std::size_t n = vertices[0].size();
  std::vector<double> lam(m);
  if (m == 1) {
    lam[0] = 1.0;
    return {vertices[0], lam};
  }
  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    lam[j] = rng.unit_pos();
    total += lam[j];
  }
  double head = 0.0;
  for (std::size_t j = 0; j + 1 < m; ++j) {
    lam[j] /= total;
    head += lam[j];
  }
  lam[m - 1] = 1.0 - head;
  if (lam[m - 1] < 0.0) lam[m - 1] = 0.0;
  Point p(n, 0.0);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i) p[i] += lam[j] * vertices[j][i];
  return {std::move(p), std::move(lam)};
}

inline std::pair<Point, std::vector<double>> convex_sample(const std::vector<Point>& vertices,
                                                           std::uint64_t seed) {
  Rng rng(seed);
  return convex_sample(vertices, rng);
}

// Random point of the set, deterministic given the rng state. Ball uses
// rejection from the bounding box (acceptance >= pi/4 per axis pair at
// the dimensions used here).
inline Point sample_point(const ConvexSet& set, Rng& rng) {
  if (const Box* b = std::get_if<Box>(&set.body())) {
    Point p(b->lower.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = rng.uniform(b->lower[i], b->upper[i]);
    return p;
  }
  if (const Ball* b = std::get_if<Ball>(&set.body())) {
    for (;;) {
      Point p(b->center.size());
      for (std::size_t i = 0; i < p.size(); ++i)
        p[i] = rng.uniform(b->center[i] - b->radius, b->center[i] + b->radius);
      if (distance(p, b->center) <= b->radius) return p;
    }
  }
  const std::vector<Point>& vs = std::holds_alternative<Simplex>(set.body())
                                     ? std::get<Simplex>(set.body()).vertices
                                     : std::get<Hull>(set.body()).vertices;
  return convex_sample(vs, rng).first;
}

}  // namespace vikit

#endif
