#pragma once

// JSON forms of the library types. Complex numbers are [re, im] pairs.

#include <json.hpp>
#include <string>
#include <variant>
#include <vector>

#include "striplab/approximation.hpp"
#include "striplab/error.hpp"
#include "striplab/geometry.hpp"
#include "striplab/polynomial.hpp"
#include "striplab/repair.hpp"
#include "striplab/scan.hpp"
#include "striplab/target.hpp"
#include "striplab/zeta.hpp"

namespace striplab {

using json = nlohmann::json;

inline json to_json_value(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw InvalidArgument("expected a complex number as [re, im], got " + j.dump());
}

inline json to_json_value(const std::vector<cplx>& zs) {
  json out = json::array();
  for (const cplx& z : zs) out.push_back(to_json_value(z));
  return out;
}

inline std::vector<cplx> complex_list_from_json(const json& j) {
  if (!j.is_array()) throw InvalidArgument("expected a list of complex numbers");
  std::vector<cplx> out;
  out.reserve(j.size());
  for (const json& e : j) out.push_back(complex_from_json(e));
  return out;
}

// ---------------------------------------------------------------------------
// sets

/// Parses a set description: {"variant": "segment"|"arc"|"polyline"|"points"|
/// "cantor_product", ...}. Every failure surfaces as InvalidSpec.
inline CompactSet build_set(const json& spec) {
  try {
    if (!spec.is_object()) throw InvalidSpec("set description must be a JSON object");
    const std::string variant = spec.at("variant").get<std::string>();
    if (variant == "segment") return CompactSet::segment(complex_from_json(spec.at("a")), complex_from_json(spec.at("b")));
    if (variant == "arc") {
      return CompactSet::arc(complex_from_json(spec.at("center")), spec.at("radius").get<double>(),
                             spec.at("angle_start").get<double>(), spec.at("angle_end").get<double>());
    }
    if (variant == "polyline") return CompactSet::polyline(complex_list_from_json(spec.at("vertices")));
    if (variant == "points") return CompactSet::point_set(complex_list_from_json(spec.at("points")));
    if (variant == "cantor_product") {
      std::vector<Interval> intervals;
      if (spec.contains("intervals")) {
        for (const json& iv : spec.at("intervals")) {
          if (!iv.is_array() || iv.size() != 2) throw InvalidSpec("intervals are [lo, hi] pairs");
          intervals.push_back({iv[0].get<double>(), iv[1].get<double>()});
        }
      } else if (spec.contains("depth")) {
        intervals = fat_cantor(spec.at("depth").get<int>());
      } else {
        throw InvalidSpec("cantor_product needs 'intervals' or 'depth'");
      }
      const std::string fibers = spec.value("fibers", std::string("solid"));
      if (fibers != "solid" && fibers != "edges") throw InvalidSpec("fibers must be 'solid' or 'edges'");
      return CompactSet::cantor_product(std::move(intervals), spec.at("y_lo").get<double>(),
                                        spec.at("y_hi").get<double>(), spec.value("scale", 1.0),
                                        spec.contains("offset") ? complex_from_json(spec.at("offset")) : cplx{},
                                        fibers == "edges" ? FiberMode::edges : FiberMode::solid);
    }
    throw InvalidSpec("unknown variant '" + variant + "'");
  } catch (const InvalidSpec&) {
    throw;
  } catch (const Error& e) {
    throw InvalidSpec(e.what());
  } catch (const json::exception& e) {
    throw InvalidSpec(e.what());
  }
}

inline json to_json_value(const CompactSet& set) {
  return std::visit(
      detail::overloaded{
          [](const Segment& s) { return json{{"variant", "segment"}, {"a", to_json_value(s.a)}, {"b", to_json_value(s.b)}}; },
          [](const Arc& a) {
            return json{{"variant", "arc"},
                        {"center", to_json_value(a.center)},
                        {"radius", a.radius},
                        {"angle_start", a.angle_start},
                        {"angle_end", a.angle_end}};
          },
          [](const Polyline& p) { return json{{"variant", "polyline"}, {"vertices", to_json_value(p.vertices)}}; },
          [](const PointSet& p) { return json{{"variant", "points"}, {"points", to_json_value(p.points)}}; },
          [](const CantorProduct& cp) {
            json intervals = json::array();
            for (const Interval& iv : cp.spans()) intervals.push_back({iv.lo, iv.hi});
            return json{{"variant", "cantor_product"},
                        {"intervals", std::move(intervals)},
                        {"y_lo", cp.y_lo},
                        {"y_hi", cp.y_hi},
                        {"scale", cp.scale},
                        {"offset", to_json_value(cp.offset)},
                        {"fibers", cp.fibers == FiberMode::edges ? "edges" : "solid"}};
          },
      },
      set.shape());
}

// ---------------------------------------------------------------------------
// polynomials and certificates

inline json to_json_value(const Polynomial& p) {
  return json{{"coeffs", to_json_value(p.coeffs())},
              {"center", to_json_value(p.frame().center)},
              {"scale", p.frame().scale}};
}

/// {"coeffs": [...]} with optional "center" and "scale" (defaults 0 and 1).
inline Polynomial polynomial_from_json(const json& j) {
  Frame frame;
  if (j.contains("center")) frame.center = complex_from_json(j.at("center"));
  if (j.contains("scale")) frame.scale = j.at("scale").get<double>();
  return Polynomial(complex_list_from_json(j.at("coeffs")), frame);
}

inline json to_json_value(const FactoredPolynomial& fp) {
  return json{{"leading", to_json_value(fp.leading)},
              {"roots", to_json_value(fp.roots)},
              {"center", to_json_value(fp.frame.center)},
              {"scale", fp.frame.scale}};
}

inline FactoredPolynomial factored_from_json(const json& j) {
  FactoredPolynomial fp;
  fp.leading = complex_from_json(j.at("leading"));
  fp.roots = complex_list_from_json(j.at("roots"));
  if (j.contains("center")) fp.frame.center = complex_from_json(j.at("center"));
  if (j.contains("scale")) fp.frame.scale = j.at("scale").get<double>();
  return fp;
}

inline json to_json_value(const FitResult& r) {
  return json{{"polynomial", to_json_value(r.polynomial)},
              {"sup_error_on_samples", r.sup_error_on_samples},
              {"degree_used", r.degree_used},
              {"iterations", r.iterations},
              {"covering_radius", r.covering_radius},
              {"derivative_bound", r.derivative_bound},
              {"modulus_bound", r.modulus_bound()}};
}

inline json to_json_value(const RepairCertificate& c, const FactoredPolynomial& fp) {
  json moved = json::array();
  for (const MovedRoot& m : c.moved_roots) {
    moved.push_back({{"index", m.index},
                     {"old", to_json_value(m.old_root)},
                     {"new", to_json_value(m.new_root)},
                     {"distance_moved", m.distance_moved}});
  }
  return json{{"perturbation_bound_value", c.perturbation_bound_value},
              {"min_modulus_lower_bound", c.min_modulus_lower_bound},
              {"moved_roots", std::move(moved)},
              {"budget", c.budget},
              {"bound_radius", c.bound_radius},
              {"clearance", c.clearance},
              {"delta", c.delta},
              {"original_leading", to_json_value(c.original_leading)},
              {"polynomial", to_json_value(fp)}};
}

// ---------------------------------------------------------------------------
// targets, zeta, scans

/// {"kind": "builtin", "name": ..., "value": [re, im]?} | {"kind": "samples",
/// "values": [...]} | {"kind": "zeta"}.
inline TargetSpec target_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "builtin") {
      BuiltinTarget b{j.at("name").get<std::string>(), {}};
      if (!is_builtin_name(b.name)) throw InvalidArgument("unknown builtin target '" + b.name + "'");
      if (b.name == "constant") b.value = complex_from_json(j.at("value"));
      return b;
    }
    if (kind == "samples") return SampledTarget{complex_list_from_json(j.at("values"))};
    if (kind == "zeta") return ZetaTarget{};
    throw InvalidArgument("unknown target kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed target: ") + e.what());
  }
}

inline json to_json_value(const TargetSpec& spec) {
  if (const auto* b = std::get_if<BuiltinTarget>(&spec)) {
    json out{{"kind", "builtin"}, {"name", b->name}};
    if (b->name == "constant") out["value"] = to_json_value(b->value);
    return out;
  }
  if (const auto* s = std::get_if<SampledTarget>(&spec)) return json{{"kind", "samples"}, {"values", to_json_value(s->values)}};
  return json{{"kind", "zeta"}};
}

inline json to_json_value(const ZetaValue& v) {
  return json{{"value", to_json_value(v.value)}, {"error_estimate", v.error_estimate}};
}

inline json to_json_value(const ZetaParams& p) {
  return json{{"terms_per_unit_t", p.terms_per_unit_t}, {"min_terms", p.min_terms}, {"bernoulli_terms", p.bernoulli_terms}};
}

inline json to_json_value(const ScanConfig& c) {
  return json{{"T", c.T},           {"step", c.step},     {"eps", c.eps},         {"refine_tol", c.refine_tol},
              {"t_start", c.t_start}, {"grid_h", c.grid_h}, {"threads", c.threads}};
}

inline json to_json_value(const ScanReport& r) {
  json trace = json::array();
  for (const TracePoint& p : r.trace) trace.push_back({p.t, p.D});
  json hits = json::array();
  for (const HitInterval& h : r.hit_intervals) hits.push_back({h.lo, h.hi});
  return json{{"trace", std::move(trace)},
              {"hit_intervals", std::move(hits)},
              {"empirical_density", r.empirical_density},
              {"best_t", r.best_t},
              {"best_D", r.best_D},
              {"eps", r.eps},
              {"step", r.step},
              {"t_start", r.t_start},
              {"t_end", r.t_end},
              {"truncated", r.truncated},
              {"grid_size", r.grid_size},
              {"covering_radius", r.covering_radius},
              {"warnings", r.warnings}};
}

}  // namespace striplab
