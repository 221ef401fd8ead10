#ifndef VIKIT_INSTANCE_IO_HPP
#define VIKIT_INSTANCE_IO_HPP

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "checkers.hpp"
#include "solvers.hpp"

namespace vikit {

// Keys are kept in insertion order so canonical serialization, digests
// and run reports are byte-stable across runs.
using json = nlohmann::ordered_json;

struct FieldSpec {
  std::string source;                   // "catalog" or "expr"
  std::string name;                     // catalog entry name
  std::optional<std::uint64_t> seed;    // explicit seed for seeded entries
  std::vector<std::string> components;  // expression source, one per output
};

struct SolverConfig {
  int resolution = 41;
  double tol = -1.0;  // negative = pick the default from grid scale and field size
  int refine_levels = 0;
  double shrink = 0.5;
};

struct InstanceFile {
  int dimension = 0;
  std::optional<ConvexSet> set;
  std::optional<FieldSpec> A_spec, a_spec, F_spec;
  std::optional<VectorField> A, a, F;
  std::optional<VIKind> problem;
  SolverConfig solver;
  std::optional<LipschitzModuli> lipschitz;
  std::uint64_t seed = 0;
};

namespace detail_io {

inline void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                                const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : known)
      if (key == k) ok = true;
    if (!ok) throw Error("instance: unknown key '" + key + "' in " + where);
  }
}

inline const json& need(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw Error("instance: missing key '" + std::string(key) + "' in " + where);
  return *it;
}

inline double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw Error("instance: " + where + " must be a number");
  return v.get<double>();
}

inline long long as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw Error("instance: " + where + " must be an integer");
  return v.get<long long>();
}

inline Point as_point(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw Error("instance: " + where + " must be a nonempty array");
  Point p;
  p.reserve(v.size());
  for (const json& e : v) p.push_back(as_number(e, where + " entry"));
  return p;
}

inline ConvexSet parse_set(const json& v, int dim) {
  if (!v.is_object()) throw Error("instance: 'set' must be an object");
  const std::string type = need(v, "type", "set").get<std::string>();
  auto check_dim = [&](const Point& p, const char* what) {
    if (static_cast<int>(p.size()) != dim)
      throw DimensionError("instance: set " + std::string(what) + " has " +
                           std::to_string(p.size()) + " entries, expected " +
                           std::to_string(dim));
  };
  if (type == "box") {
    reject_unknown_keys(v, {"type", "lower", "upper"}, "set");
    Point lo = as_point(need(v, "lower", "set"), "set.lower");
    Point hi = as_point(need(v, "upper", "set"), "set.upper");
    check_dim(lo, "lower");
    check_dim(hi, "upper");
    return ConvexSet::box(std::move(lo), std::move(hi));
  }
  if (type == "ball") {
    reject_unknown_keys(v, {"type", "center", "radius"}, "set");
    Point c = as_point(need(v, "center", "set"), "set.center");
    check_dim(c, "center");
    return ConvexSet::ball(std::move(c), as_number(need(v, "radius", "set"), "set.radius"));
  }
  if (type == "simplex" || type == "hull") {
    reject_unknown_keys(v, {"type", "vertices"}, "set");
    const json& vs = need(v, "vertices", "set");
    if (!vs.is_array() || vs.empty())
      throw Error("instance: set.vertices must be a nonempty array");
    std::vector<Point> verts;
    for (const json& e : vs) {
      verts.push_back(as_point(e, "set vertex"));
      check_dim(verts.back(), "vertex");
    }
    return type == "simplex" ? ConvexSet::simplex(std::move(verts))
                             : ConvexSet::hull(std::move(verts));
  }
  throw Error("instance: unknown set type '" + type + "' (expected box, ball, simplex or hull)");
}

inline std::pair<FieldSpec, VectorField> parse_field(const json& v, int dim,
                                                     std::uint64_t default_seed,
                                                     const std::string& where) {
  if (!v.is_object()) throw Error("instance: '" + where + "' must be an object");
  FieldSpec spec;
  spec.source = need(v, "source", where).get<std::string>();
  if (spec.source == "catalog") {
    reject_unknown_keys(v, {"source", "name", "seed"}, where);
    spec.name = need(v, "name", where).get<std::string>();
    if (const auto it = v.find("seed"); it != v.end())
      spec.seed = static_cast<std::uint64_t>(as_int(*it, where + ".seed"));
    CatalogEntry entry = catalog_lookup(spec.name, dim, spec.seed.value_or(default_seed));
    return {std::move(spec), std::move(entry.field)};
  }
  if (spec.source == "expr") {
    reject_unknown_keys(v, {"source", "components"}, where);
    const json& comps = need(v, "components", where);
    if (!comps.is_array() || comps.empty())
      throw Error("instance: " + where + ".components must be a nonempty array of strings");
    for (const json& c : comps) {
      if (!c.is_string()) throw Error("instance: " + where + ".components must hold strings");
      spec.components.push_back(c.get<std::string>());
    }
    return {spec, VectorField::componentwise(spec.components, dim)};
  }
  throw Error("instance: " + where + ".source must be 'catalog' or 'expr'");
}

}  // namespace detail_io

inline InstanceFile parse_instance_json(const json& root) {
  if (!root.is_object()) throw Error("instance: top level must be a JSON object");
  detail_io::reject_unknown_keys(
      root, {"dimension", "set", "A", "a", "F", "problem", "solver", "lipschitz", "seed"},
      "instance");
  InstanceFile f;
  const long long dim = detail_io::as_int(detail_io::need(root, "dimension", "instance"),
                                          "dimension");
  if (dim < 1 || dim > 64) throw Error("instance: dimension must be between 1 and 64");
  f.dimension = static_cast<int>(dim);
  if (const auto it = root.find("seed"); it != root.end())
    f.seed = static_cast<std::uint64_t>(detail_io::as_int(*it, "seed"));
  f.set = detail_io::parse_set(detail_io::need(root, "set", "instance"), f.dimension);
  if (const auto it = root.find("A"); it != root.end()) {
    auto [spec, field] = detail_io::parse_field(*it, f.dimension, f.seed, "A");
    f.A_spec = std::move(spec);
    f.A = std::move(field);
  }
  if (const auto it = root.find("a"); it != root.end()) {
    auto [spec, field] = detail_io::parse_field(*it, f.dimension, f.seed, "a");
    f.a_spec = std::move(spec);
    f.a = std::move(field);
  }
  if (const auto it = root.find("F"); it != root.end()) {
    auto [spec, field] = detail_io::parse_field(*it, f.dimension, f.seed, "F");
    f.F_spec = std::move(spec);
    f.F = std::move(field);
  }
  if (f.A && f.a && f.A->dim_out() != f.a->dim_out())
    throw DimensionError("instance: A and a must map into the same space");
  if (const auto it = root.find("problem"); it != root.end())
    f.problem = vikind_from_string(it->get<std::string>());
  if (const auto it = root.find("solver"); it != root.end()) {
    const json& s = *it;
    if (!s.is_object()) throw Error("instance: 'solver' must be an object");
    detail_io::reject_unknown_keys(s, {"resolution", "tol", "refine_levels", "shrink"}, "solver");
    if (const auto r = s.find("resolution"); r != s.end()) {
      const long long res = detail_io::as_int(*r, "solver.resolution");
      if (res < 2 || res > 100000) throw Error("instance: solver.resolution must be >= 2");
      f.solver.resolution = static_cast<int>(res);
    }
    if (const auto r = s.find("tol"); r != s.end())
      f.solver.tol = detail_io::as_number(*r, "solver.tol");
    if (const auto r = s.find("refine_levels"); r != s.end()) {
      const long long lv = detail_io::as_int(*r, "solver.refine_levels");
      if (lv < 0 || lv > 64) throw Error("instance: solver.refine_levels must be in [0, 64]");
      f.solver.refine_levels = static_cast<int>(lv);
    }
    if (const auto r = s.find("shrink"); r != s.end()) {
      f.solver.shrink = detail_io::as_number(*r, "solver.shrink");
      if (f.solver.shrink <= 0.0 || f.solver.shrink >= 1.0)
        throw Error("instance: solver.shrink must lie in (0, 1)");
    }
  }
  if (const auto it = root.find("lipschitz"); it != root.end()) {
    const json& l = *it;
    if (!l.is_object()) throw Error("instance: 'lipschitz' must be an object");
    detail_io::reject_unknown_keys(l, {"L_A", "L_a"}, "lipschitz");
    LipschitzModuli lip;
    lip.L_A = detail_io::as_number(detail_io::need(l, "L_A", "lipschitz"), "lipschitz.L_A");
    lip.L_a = detail_io::as_number(detail_io::need(l, "L_a", "lipschitz"), "lipschitz.L_a");
    if (lip.L_A < 0.0 || lip.L_a < 0.0) throw Error("instance: Lipschitz moduli must be >= 0");
    f.lipschitz = lip;
  }
  return f;
}

inline InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open instance file '" + path + "'");
  json root;
  try {
    in >> root;
  } catch (const std::exception& e) {
    throw Error("instance file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_instance_json(root);
}

inline json set_to_json(const ConvexSet& set) {
  json out;
  if (const Box* b = std::get_if<Box>(&set.body())) {
    out["type"] = "box";
    out["lower"] = b->lower;
    out["upper"] = b->upper;
  } else if (const Ball* b = std::get_if<Ball>(&set.body())) {
    out["type"] = "ball";
    out["center"] = b->center;
    out["radius"] = b->radius;
  } else {
    const bool simplex = std::holds_alternative<Simplex>(set.body());
    out["type"] = simplex ? "simplex" : "hull";
    out["vertices"] = simplex ? std::get<Simplex>(set.body()).vertices
                              : std::get<Hull>(set.body()).vertices;
  }
  return out;
}

inline json field_spec_to_json(const FieldSpec& spec) {
  json out;
  out["source"] = spec.source;
  if (spec.source == "catalog") {
    out["name"] = spec.name;
    if (spec.seed) out["seed"] = *spec.seed;
  } else {
    out["components"] = spec.components;
  }
  return out;
}

// Canonical form: fixed key order, solver config always spelled out.
// Re-parsing the output yields an instance with identical run reports.
inline json instance_to_json(const InstanceFile& f) {
  json out;
  out["dimension"] = f.dimension;
  out["set"] = set_to_json(*f.set);
  if (f.A_spec) out["A"] = field_spec_to_json(*f.A_spec);
  if (f.a_spec) out["a"] = field_spec_to_json(*f.a_spec);
  if (f.F_spec) out["F"] = field_spec_to_json(*f.F_spec);
  if (f.problem) out["problem"] = to_string(*f.problem);
  json solver;
  solver["resolution"] = f.solver.resolution;
  solver["tol"] = f.solver.tol;
  solver["refine_levels"] = f.solver.refine_levels;
  solver["shrink"] = f.solver.shrink;
  out["solver"] = solver;
  if (f.lipschitz) {
    json lip;
    lip["L_A"] = f.lipschitz->L_A;
    lip["L_a"] = f.lipschitz->L_a;
    out["lipschitz"] = lip;
  }
  out["seed"] = f.seed;
  return out;
}

inline std::string instance_digest(const InstanceFile& f) {
  return fnv1a64_hex(instance_to_json(f).dump());
}

inline VIInstance to_vi_instance(const InstanceFile& f) {
  if (!f.set || !f.A || !f.a || !f.problem)
    throw Error("instance: solving needs 'set', 'A', 'a' and 'problem'");
  return make_vi_instance(*f.problem, *f.A, *f.a, *f.set);
}

inline json to_json(const GapReport& r) {
  json out;
  out["x"] = r.x;
  out["gap"] = r.gap;
  out["worst_y"] = r.worst_y;
  out["worst_index"] = r.worst_index;
  out["resolution"] = r.resolution;
  out["tol"] = r.tol;
  out["is_solution"] = r.is_solution;
  return out;
}

inline json to_json(const NonexistenceCertificate& c) {
  json out;
  out["gap_min"] = c.gap_min;
  out["gap_lipschitz"] = c.gap_lipschitz;
  out["covering_radius"] = c.covering_radius;
  out["margin"] = c.margin;
  out["holds"] = c.holds;
  return out;
}

inline json to_json(const SolveReport& r) {
  json out;
  out["best_x"] = r.best_x;
  out["best_gap"] = r.best_gap;
  out["worst_y"] = r.worst_y;
  out["worst_index"] = r.worst_index;
  out["resolution"] = r.resolution;
  out["refinement_levels"] = r.refinement_levels;
  out["evaluations"] = r.evaluations;
  out["tol"] = r.tol;
  out["verdict"] = to_string(r.verdict);
  if (r.certificate) out["certificate"] = to_json(*r.certificate);
  return out;
}

inline json to_json(const PropertyWitness& w) {
  json out;
  json points;
  for (const auto& [name, p] : w.points) points[name] = p;
  out["points"] = points;
  json values;
  for (const auto& [name, v] : w.values) values[name] = v;
  out["values"] = values;
  out["note"] = w.note;
  return out;
}

inline json to_json(const PropertyReport& r) {
  json out;
  out["property"] = r.property;
  out["passed"] = r.passed;
  out["trials"] = r.trials;
  out["tol"] = r.tol;
  out["seed"] = r.seed;
  if (!r.counters.empty()) {
    json counters;
    for (const auto& [name, v] : r.counters) counters[name] = v;
    out["counters"] = counters;
  }
  if (r.witness) out["witness"] = to_json(*r.witness);
  return out;
}

inline json to_json(const BrouwerReport& r) {
  json out;
  out["x"] = r.x;
  out["residual"] = r.residual;
  out["level_residuals"] = r.level_residuals;
  out["solve"] = to_json(r.solve);
  return out;
}

// Envelope for everything the tool prints. Wall time is deliberately not
// part of it; timing goes to stderr so repeated runs are byte-identical.
inline json run_report_json(const std::string& command, const std::string& instance,
                            json payload) {
  json out;
  out["tool"] = "vi";
  out["version"] = kVersion;
  out["command"] = command;
  out["instance"] = instance;
  out["report"] = std::move(payload);
  return out;
}

// Gap field over the sample grid as CSV: grid coordinates, gap, then the
// worst y. Row order is grid order; numbers are shortest round-trip.
inline std::string gap_field_csv(const VIInstance& inst, int resolution) {
  const SampleGrid grid = sample_grid(inst.K, resolution);
  GapEngine engine(inst, grid.points);
  const int n = inst.K.dim();
  std::string out;
  for (int i = 1; i <= n; ++i) out += "x" + std::to_string(i) + ",";
  out += "gap";
  for (int i = 1; i <= n; ++i) out += ",worst_y" + std::to_string(i);
  out += "\n";
  for (std::size_t i = 0; i < engine.ys().size(); ++i) {
    const GapEngine::MaxViolation mv =
        engine.max_violation(engine.A_vals()[i], engine.a_vals()[i]);
    const Point& x = engine.ys()[i];
    for (int c = 0; c < n; ++c) out += detail_expr::format_double(x[c]) + ",";
    out += detail_expr::format_double(mv.value + 0.0);
    const Point& wy = engine.ys()[static_cast<std::size_t>(mv.index)];
    for (int c = 0; c < n; ++c) out += "," + detail_expr::format_double(wy[c]);
    out += "\n";
  }
  return out;
}

}  // namespace vikit

#endif
