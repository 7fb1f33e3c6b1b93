#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "striplab/error.hpp"
#include "striplab/geometry.hpp"
#include "striplab/zeta.hpp"

namespace striplab {

/// One of "conj", "abs", "identity", "constant" (the last uses `value`).
struct BuiltinTarget {
  std::string name;
  cplx value{};
};

/// Values aligned one-to-one with a caller-supplied grid.
struct SampledTarget {
  std::vector<cplx> values;
};

struct ZetaTarget {};

using TargetSpec = std::variant<BuiltinTarget, SampledTarget, ZetaTarget>;

/// Samples f_i of a continuous target on a grid.
struct TargetFunction {
  std::vector<cplx> samples;
  std::string description;

  std::size_t size() const { return samples.size(); }
};

inline bool is_builtin_name(const std::string& name) {
  return name == "conj" || name == "abs" || name == "identity" || name == "constant";
}

inline std::string describe(const TargetSpec& spec) {
  if (const auto* b = std::get_if<BuiltinTarget>(&spec)) {
    if (b->name == "conj") return "conj(z)";
    if (b->name == "abs") return "|z|";
    if (b->name == "identity") return "z";
    return "constant(" + std::to_string(b->value.real()) + "," + std::to_string(b->value.imag()) + ")";
  }
  if (std::holds_alternative<ZetaTarget>(spec)) return "zeta(z)";
  return "samples";
}

/// Pointwise form of a builtin or zeta target. Sampled targets have none.
inline std::function<cplx(cplx)> target_callable(const TargetSpec& spec, const ZetaParams& params = {}) {
  if (const auto* b = std::get_if<BuiltinTarget>(&spec)) {
    if (b->name == "conj") return [](cplx z) { return std::conj(z); };
    if (b->name == "abs") return [](cplx z) { return cplx(std::abs(z), 0.0); };
    if (b->name == "identity") return [](cplx z) { return z; };
    if (b->name == "constant") {
      const cplx v = b->value;
      return [v](cplx) { return v; };
    }
    throw InvalidArgument("unknown builtin target '" + b->name + "'");
  }
  if (std::holds_alternative<ZetaTarget>(spec)) {
    return [params](cplx z) { return zeta_em(z, params).value; };
  }
  throw TargetMismatch("sampled targets have no pointwise form; supply the aligned grid");
}

inline TargetFunction sample_target(const TargetSpec& spec, const SampleGrid& grid, const ZetaParams& params = {}) {
  TargetFunction out{{}, describe(spec)};
  if (const auto* s = std::get_if<SampledTarget>(&spec)) {
    if (s->values.size() != grid.size()) {
      throw TargetMismatch("target has " + std::to_string(s->values.size()) + " samples for a grid of " +
                           std::to_string(grid.size()));
    }
    out.samples = s->values;
  } else if (std::holds_alternative<ZetaTarget>(spec)) {
    const auto values = ShiftedZeta(grid.points, params)(0.0);
    out.samples.reserve(values.size());
    for (const ZetaValue& v : values) out.samples.push_back(v.value);
  } else {
    const auto f = target_callable(spec, params);
    out.samples.reserve(grid.size());
    for (const cplx& z : grid.points) out.samples.push_back(f(z));
  }
  for (const cplx& v : out.samples) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw TargetMismatch("target values must be finite");
  }
  return out;
}

}  // namespace striplab
