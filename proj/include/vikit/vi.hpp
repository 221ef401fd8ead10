#ifndef VIKIT_VI_HPP
#define VIKIT_VI_HPP

#include <limits>

#include "operators.hpp"

namespace vikit {

// The four inequality shapes. x in K solves the problem when the left
// hand side below is >= 0 for every y in K:
//   S   <A(x), a(y) - a(x)>
//   iS  <A(y) - A(x), a(x)>
//   M   <A(y), a(y) - a(x)>
//   iM  <A(y) - A(x), a(y)>
enum class VIKind { S, M, iS, iM };

inline std::string to_string(VIKind k) {
  switch (k) {
    case VIKind::S: return "S";
    case VIKind::M: return "M";
    case VIKind::iS: return "iS";
    case VIKind::iM: return "iM";
  }
  return "?";
}

inline VIKind vikind_from_string(const std::string& s) {
  if (s == "S") return VIKind::S;
  if (s == "M") return VIKind::M;
  if (s == "iS") return VIKind::iS;
  if (s == "iM") return VIKind::iM;
  throw Error("unknown problem kind '" + s + "' (expected S, M, iS or iM)");
}

// Left hand side from pre-evaluated field values. Differences are taken
// componentwise before the products and the sum runs in index order, so
// the self pair y = x is exactly zero and swapping the roles of A and a
// between S and iS (or M and iM) reproduces the other value bit for bit.
inline double inequality_lhs_values(VIKind k, const Point& Ax, const Point& Ay, const Point& ax,
                                    const Point& ay) {
  const std::size_t n = Ax.size();
  if (Ay.size() != n || ax.size() != n || ay.size() != n)
    throw DimensionError("inequality_lhs: field values disagree on dimension");
  double s = 0.0;
  switch (k) {
    case VIKind::S:
      for (std::size_t i = 0; i < n; ++i) s += Ax[i] * (ay[i] - ax[i]);
      break;
    case VIKind::iS:
      for (std::size_t i = 0; i < n; ++i) s += (Ay[i] - Ax[i]) * ax[i];
      break;
    case VIKind::M:
      for (std::size_t i = 0; i < n; ++i) s += Ay[i] * (ay[i] - ax[i]);
      break;
    case VIKind::iM:
      for (std::size_t i = 0; i < n; ++i) s += (Ay[i] - Ax[i]) * ay[i];
      break;
  }
  return s;
}

inline double inequality_lhs(VIKind k, const VectorField& A, const VectorField& a, const Point& x,
                             const Point& y) {
  return inequality_lhs_values(k, evaluate(A, x), evaluate(A, y), evaluate(a, x), evaluate(a, y));
}

struct VIInstance {
  VIKind kind;
  VectorField A;
  VectorField a;
  ConvexSet K;
};

inline VIInstance make_vi_instance(VIKind kind, VectorField A, VectorField a, ConvexSet K) {
  if (A.dim_in() != K.dim() || a.dim_in() != K.dim())
    throw DimensionError("vi instance: fields must take points of the set's dimension");
  if (A.dim_out() != a.dim_out())
    throw DimensionError("vi instance: A and a must map into the same space");
  return VIInstance{kind, std::move(A), std::move(a), std::move(K)};
}

inline double inequality_lhs(const VIInstance& inst, const Point& x, const Point& y) {
  return inequality_lhs(inst.kind, inst.A, inst.a, x, y);
}

struct GapReport {
  Point x;
  double gap = 0.0;
  Point worst_y;
  long long worst_index = -1;
  int resolution = 0;
  double tol = 0.0;
  bool is_solution = false;
};

// Caches field values over a fixed y universe so many gap queries share
// the 2N field evaluations. Ties in the running maximum keep the lowest
// index, which makes worst-y reporting deterministic.
class GapEngine {
 public:
  GapEngine(const VIInstance& inst, std::vector<Point> ys) : kind_(inst.kind), ys_(std::move(ys)) {
    A_vals_.reserve(ys_.size());
    a_vals_.reserve(ys_.size());
    for (const Point& y : ys_) {
      A_vals_.push_back(evaluate(inst.A, y));
      a_vals_.push_back(evaluate(inst.a, y));
    }
    evaluations_ = 2 * static_cast<long long>(ys_.size());
  }

  struct MaxViolation {
    double value = -std::numeric_limits<double>::infinity();
    long long index = -1;
  };

  MaxViolation max_violation(const Point& Ax, const Point& ax) const {
    MaxViolation best;
    for (std::size_t i = 0; i < ys_.size(); ++i) {
      const double v = -inequality_lhs_values(kind_, Ax, A_vals_[i], ax, a_vals_[i]);
      if (v > best.value) {
        best.value = v;
        best.index = static_cast<long long>(i);
      }
    }
    return best;
  }

  const std::vector<Point>& ys() const { return ys_; }
  const std::vector<Point>& A_vals() const { return A_vals_; }
  const std::vector<Point>& a_vals() const { return a_vals_; }
  long long evaluations() const { return evaluations_; }

 private:
  VIKind kind_;
  std::vector<Point> ys_;
  std::vector<Point> A_vals_;
  std::vector<Point> a_vals_;
  long long evaluations_ = 0;
};

// Sampled gap at x: the largest violation -lhs(x, y) over the grid with
// x itself appended when absent, so the value is always >= 0 and is 0
// exactly when no sampled y violates the inequality.
inline GapReport gap(const VIInstance& inst, const Point& x, const SampleGrid& samples,
                     double tol = 1e-9) {
  if (!contains(inst.K, x, 1e-9)) throw Error("gap: query point lies outside the set");
  std::vector<Point> ys = samples.points;
  if (std::find(ys.begin(), ys.end(), x) == ys.end()) ys.push_back(x);
  GapEngine engine(inst, std::move(ys));
  const Point Ax = evaluate(inst.A, x);
  const Point ax = evaluate(inst.a, x);
  const GapEngine::MaxViolation mv = engine.max_violation(Ax, ax);
  GapReport rep;
  rep.x = x;
  rep.gap = mv.value + 0.0;  // normalize -0.0
  rep.worst_index = mv.index;
  rep.worst_y = engine.ys()[static_cast<std::size_t>(mv.index)];
  rep.resolution = samples.resolution;
  rep.tol = tol;
  rep.is_solution = rep.gap <= tol;
  return rep;
}

inline GapReport gap(VIKind kind, const VectorField& A, const VectorField& a, const ConvexSet& K,
                     const Point& x, const SampleGrid& samples, double tol = 1e-9) {
  return gap(make_vi_instance(kind, A, a, K), x, samples, tol);
}

inline GapReport is_solution(const VIInstance& inst, const Point& x, int resolution,
                             double tol = 1e-9) {
  return gap(inst, x, sample_grid(inst.K, resolution), tol);
}

}  // namespace vikit

#endif
