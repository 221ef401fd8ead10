#ifndef VIKIT_OPERATORS_HPP
#define VIKIT_OPERATORS_HPP

#include <cstdint>
#include <memory>
#include <variant>

#include "expr.hpp"
#include "geometry.hpp"

namespace vikit {

// A map R^n -> R^m. Bodies:
//   Catalog       named built-in with a native closed-form implementation
//   Componentwise one scalar expression per output component
//   Identity      p -> p
//   Affine        p -> M p + b
//   IdMinus       p -> p - F(p), the fixed-point residual form
//   MatrixImage   p -> M F(p), used to build monotone pullbacks
class VectorField {
 public:
  struct Catalog {
    std::string name;
    int dim_in;
    int dim_out;
    Point (*fn)(const Point&);
  };
  struct Componentwise {
    std::vector<Expression> components;
  };
  struct Identity {
    int dim;
  };
  struct Affine {
    int rows;
    int cols;
    std::vector<double> matrix;  // row major
    Point offset;
  };
  struct IdMinus {
    std::shared_ptr<const VectorField> inner;
  };
  struct MatrixImage {
    int rows;
    int cols;
    std::vector<double> matrix;  // row major, cols == inner.dim_out()
    std::shared_ptr<const VectorField> inner;
  };
  using Body = std::variant<Catalog, Componentwise, Identity, Affine, IdMinus, MatrixImage>;

  static VectorField identity(int dim) {
    if (dim < 1) throw DimensionError("identity field needs dim >= 1");
    return VectorField(Identity{dim});
  }

  static VectorField affine(int rows, int cols, std::vector<double> matrix, Point offset) {
    if (rows < 1 || cols < 1 || matrix.size() != static_cast<std::size_t>(rows) * cols ||
        offset.size() != static_cast<std::size_t>(rows))
      throw DimensionError("affine field: matrix/offset sizes do not match rows x cols");
    return VectorField(Affine{rows, cols, std::move(matrix), std::move(offset)});
  }

  static VectorField zero(int dim) {
    if (dim < 1) throw DimensionError("zero field needs dim >= 1");
    return affine(dim, dim, std::vector<double>(static_cast<std::size_t>(dim) * dim, 0.0),
                  Point(dim, 0.0));
  }

  static VectorField componentwise(std::vector<Expression> components) {
    if (components.empty()) throw DimensionError("componentwise field needs components");
    const int dim = components[0].dim();
    for (const Expression& c : components)
      if (c.dim() != dim)
        throw DimensionError("componentwise field: components disagree on dimension");
    return VectorField(Componentwise{std::move(components)});
  }

  static VectorField componentwise(const std::vector<std::string>& sources, int dim) {
    std::vector<Expression> comps;
    comps.reserve(sources.size());
    for (const std::string& s : sources) comps.push_back(Expression::parse(s, dim));
    return componentwise(std::move(comps));
  }

  static VectorField id_minus(VectorField inner) {
    if (inner.dim_in() != inner.dim_out())
      throw DimensionError("id_minus needs a square field (dim_in == dim_out)");
    return VectorField(IdMinus{std::make_shared<const VectorField>(std::move(inner))});
  }

  static VectorField matrix_image(int rows, std::vector<double> matrix, VectorField inner) {
    const int cols = inner.dim_out();
    if (rows < 1 || matrix.size() != static_cast<std::size_t>(rows) * cols)
      throw DimensionError("matrix_image: matrix size does not match rows x inner output");
    return VectorField(MatrixImage{rows, cols, std::move(matrix),
                                   std::make_shared<const VectorField>(std::move(inner))});
  }

  static VectorField catalog(const std::string& name, int dim_in, int dim_out,
                             Point (*fn)(const Point&)) {
    return VectorField(Catalog{name, dim_in, dim_out, fn});
  }

  int dim_in() const {
    if (const auto* c = std::get_if<Catalog>(&body_)) return c->dim_in;
    if (const auto* c = std::get_if<Componentwise>(&body_)) return c->components[0].dim();
    if (const auto* i = std::get_if<Identity>(&body_)) return i->dim;
    if (const auto* a = std::get_if<Affine>(&body_)) return a->cols;
    if (const auto* m = std::get_if<IdMinus>(&body_)) return m->inner->dim_in();
    return std::get<MatrixImage>(body_).inner->dim_in();
  }

  int dim_out() const {
    if (const auto* c = std::get_if<Catalog>(&body_)) return c->dim_out;
    if (const auto* c = std::get_if<Componentwise>(&body_))
      return static_cast<int>(c->components.size());
    if (const auto* i = std::get_if<Identity>(&body_)) return i->dim;
    if (const auto* a = std::get_if<Affine>(&body_)) return a->rows;
    if (const auto* m = std::get_if<IdMinus>(&body_)) return m->inner->dim_out();
    return std::get<MatrixImage>(body_).rows;
  }

  Point operator()(const Point& p) const;

  const Body& body() const { return body_; }

 private:
  explicit VectorField(Body b) : body_(std::move(b)) {}
  Body body_;
};

inline Point evaluate(const VectorField& f, const Point& p) {
  if (static_cast<int>(p.size()) != f.dim_in())
    throw DimensionError("evaluate: point dimension " + std::to_string(p.size()) +
                         " does not match field input dimension " + std::to_string(f.dim_in()));
  Point out;
  if (const auto* c = std::get_if<VectorField::Catalog>(&f.body())) {
    out = c->fn(p);
  } else if (const auto* c = std::get_if<VectorField::Componentwise>(&f.body())) {
    out.resize(c->components.size());
    for (std::size_t i = 0; i < c->components.size(); ++i) out[i] = c->components[i].eval(p);
  } else if (std::holds_alternative<VectorField::Identity>(f.body())) {
    out = p;
  } else if (const auto* a = std::get_if<VectorField::Affine>(&f.body())) {
    out.resize(a->rows);
    for (int r = 0; r < a->rows; ++r) {
      double s = 0.0;
      for (int c = 0; c < a->cols; ++c) s += a->matrix[r * a->cols + c] * p[c];
      out[r] = s + a->offset[r];
    }
  } else if (const auto* m = std::get_if<VectorField::IdMinus>(&f.body())) {
    out = sub(p, evaluate(*m->inner, p));
  } else {
    const auto& mi = std::get<VectorField::MatrixImage>(f.body());
    const Point inner = evaluate(*mi.inner, p);
    out.resize(mi.rows);
    for (int r = 0; r < mi.rows; ++r) {
      double s = 0.0;
      for (int c = 0; c < mi.cols; ++c) s += mi.matrix[r * mi.cols + c] * inner[c];
      out[r] = s;
    }
  }
  if (!all_finite(out)) throw EvalError("field evaluation produced a non-finite value");
  return out;
}

inline Point VectorField::operator()(const Point& p) const { return evaluate(*this, p); }

// Seeded dense affine map with matrix and offset entries uniform in
// [-1, 1], drawn row major then offset, so reports are reproducible.
inline VectorField make_affine_random(int dim, std::uint64_t seed,
                                      std::vector<double>* matrix_out = nullptr,
                                      Point* offset_out = nullptr) {
  if (dim < 1) throw DimensionError("make_affine_random needs dim >= 1");
  Rng rng(seed);
  std::vector<double> m(static_cast<std::size_t>(dim) * dim);
  for (double& v : m) v = rng.uniform(-1.0, 1.0);
  Point b(dim);
  for (double& v : b) v = rng.uniform(-1.0, 1.0);
  if (matrix_out) *matrix_out = m;
  if (offset_out) *offset_out = b;
  return VectorField::affine(dim, dim, std::move(m), std::move(b));
}

// A = M a with M = R^T R positive semidefinite, R seeded uniform.
// Pairs (A, a) of this shape are monotone relative to a by construction.
inline VectorField make_psd_pullback(const VectorField& a, std::uint64_t seed) {
  const int n = a.dim_out();
  Rng rng(seed);
  std::vector<double> r(static_cast<std::size_t>(n) * n);
  for (double& v : r) v = rng.uniform(-1.0, 1.0);
  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += r[k * n + i] * r[k * n + j];
      m[i * n + j] = s;
    }
  return VectorField::matrix_image(n, std::move(m), a);
}

namespace detail_catalog {

inline Point planar_A(const Point& p) { return {p[0] * p[0] * p[1], p[0] * p[1]}; }

inline Point planar_a(const Point& p) { return {1.0, -p[0]}; }

inline Point zigzag_A(const Point& p) {
  const double x = p[0];
  if (x <= -0.5) return {-2.0 * x - 1.0};
  if (x <= 0.0) return {2.0 * x + 1.0};
  return {-2.0 * x + 1.0};
}

inline Point zigzag_a(const Point& p) {
  const double x = p[0];
  if (x <= 0.5) return {(-2.0 * x) / 3.0 + 1.0 / 3.0};
  return {-2.0 * x + 1.0};
}

inline Point step_A(const Point& p) { return {p[0] < 0.0 ? -1.0 : 1.0}; }

inline Point step_a(const Point& p) { return {p[0]}; }

}  // namespace detail_catalog

struct CatalogEntry {
  std::string name;
  std::string provenance;
  VectorField field;
  ConvexSet domain;
  // Independent expression-language encoding of the same map, used to
  // cross-check the native implementation.
  std::vector<std::string> expr_components;
};

inline const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {
      "ex432_A", "ex432_a", "ex434_A", "ex434_a", "ex4331_A", "ex4331_a",
      "identity", "zero", "affine_random"};
  return names;
}

// Looks up a named operator. dim is required for the dimension-generic
// entries (identity, zero, affine_random) and must match for the fixed
// ones when given; seed only affects affine_random.
inline CatalogEntry catalog_lookup(const std::string& name, int dim = 0, std::uint64_t seed = 0) {
  auto box1 = []() { return ConvexSet::box({-1.0}, {1.0}); };
  auto box2 = []() { return ConvexSet::box({-1.0, -1.0}, {1.0, 1.0}); };
  auto check_dim = [&](int want) {
    if (dim != 0 && dim != want)
      throw DimensionError("catalog entry '" + name + "' has dimension " + std::to_string(want) +
                           ", not " + std::to_string(dim));
  };
  if (name == "ex432_A") {
    check_dim(2);
    return CatalogEntry{name, "bundled planar example, operator side",
                        VectorField::catalog(name, 2, 2, detail_catalog::planar_A), box2(),
                        {"x^2*y", "x*y"}};
  }
  if (name == "ex432_a") {
    check_dim(2);
    return CatalogEntry{name, "bundled planar example, comparison side",
                        VectorField::catalog(name, 2, 2, detail_catalog::planar_a), box2(),
                        {"1", "-x"}};
  }
  if (name == "ex434_A") {
    check_dim(1);
    return CatalogEntry{
        name, "bundled piecewise linear example, operator side",
        VectorField::catalog(name, 1, 1, detail_catalog::zigzag_A), box1(),
        {"piecewise(x <= -0.5 -> -2*x - 1, x <= 0 -> 2*x + 1, else -> -2*x + 1)"}};
  }
  if (name == "ex434_a") {
    check_dim(1);
    return CatalogEntry{name, "bundled piecewise linear example, comparison side",
                        VectorField::catalog(name, 1, 1, detail_catalog::zigzag_a), box1(),
                        {"piecewise(x <= 0.5 -> -2*x/3 + 1/3, else -> -2*x + 1)"}};
  }
  if (name == "ex4331_A") {
    check_dim(1);
    return CatalogEntry{name, "bundled step example, operator side",
                        VectorField::catalog(name, 1, 1, detail_catalog::step_A), box1(),
                        {"piecewise(x < 0 -> -1, else -> 1)"}};
  }
  if (name == "ex4331_a") {
    check_dim(1);
    return CatalogEntry{name, "bundled step example, comparison side",
                        VectorField::catalog(name, 1, 1, detail_catalog::step_a), box1(),
                        {"x"}};
  }
  const bool parametric = (name == "identity" || name == "zero" || name == "affine_random");
  if (parametric) {
    if (dim < 1)
      throw DimensionError("catalog entry '" + name + "' needs an explicit dimension");
    const Point lo(dim, -1.0), hi(dim, 1.0);
    ConvexSet domain = ConvexSet::box(lo, hi);
    std::vector<std::string> exprs;
    if (name == "identity") {
      for (int i = 1; i <= dim; ++i) exprs.push_back("x" + std::to_string(i));
      return CatalogEntry{name, "identity map", VectorField::identity(dim), std::move(domain),
                          std::move(exprs)};
    }
    if (name == "zero") {
      exprs.assign(dim, "0");
      return CatalogEntry{name, "zero map", VectorField::zero(dim), std::move(domain),
                          std::move(exprs)};
    }
    std::vector<double> m;
    Point b;
    VectorField f = make_affine_random(dim, seed, &m, &b);
    for (int r = 0; r < dim; ++r) {
      std::string s;
      for (int c = 0; c < dim; ++c) {
        if (c) s += " + ";
        s += "(" + detail_expr::format_double(m[r * dim + c]) + ")*x" + std::to_string(c + 1);
      }
      s += " + (" + detail_expr::format_double(b[r]) + ")";
      exprs.push_back(std::move(s));
    }
    return CatalogEntry{name, "seeded random affine map", std::move(f), std::move(domain),
                        std::move(exprs)};
  }
  std::string known;
  for (const std::string& n : catalog_names()) {
    if (!known.empty()) known += ", ";
    known += n;
  }
  throw Error("unknown catalog entry '" + name + "' (known: " + known + ")");
}

}  // namespace vikit

#endif
