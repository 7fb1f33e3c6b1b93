#pragma once

// Discrepancy D(t) = max_i |zeta(z_i + i t) - f_i| over a sampled set, hit
// intervals where D(t) < eps, and their finite-horizon density.
//
// Hits are detected on the coarse t-grid and crossing endpoints are refined
// by bisection. A hit that starts and ends between two grid points that are
// both above eps is missed, so the density is neither a lower nor an upper
// bound; the report carries the step for refinement audits.

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "striplab/error.hpp"
#include "striplab/geometry.hpp"
#include "striplab/target.hpp"
#include "striplab/zeta.hpp"

namespace striplab {

struct ScanConfig {
  double T = 100.0;
  double step = 0.05;
  double eps = 0.1;
  double refine_tol = 1e-4;
  double t_start = 0.0;
  /// Covering radius used when a compact set has to be sampled.
  double grid_h = 0.01;
  unsigned threads = 1;

  void validate() const {
    if (!(t_start >= 0.0) || !std::isfinite(t_start)) throw InvalidArgument("t_start must be >= 0");
    if (!(T > t_start) || !std::isfinite(T)) throw InvalidArgument("T must exceed t_start");
    if (!(step > 0.0)) throw InvalidArgument("step must be positive");
    if (step > (T - t_start) / 10.0 * (1.0 + 1e-12)) throw InvalidArgument("step must be at most (T - t_start)/10");
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw InvalidArgument("eps must be non-negative");
    if (!(refine_tol > 0.0) || !(refine_tol < step)) throw InvalidArgument("refine_tol must be in (0, step)");
    if (!(grid_h > 0.0)) throw InvalidArgument("grid_h must be positive");
  }
};

struct TracePoint {
  double t;
  double D;
};

struct HitInterval {
  double lo;
  double hi;
  double length() const { return hi - lo; }
};

struct ScanReport {
  std::vector<TracePoint> trace;
  std::vector<HitInterval> hit_intervals;
  double empirical_density = 0.0;
  double best_t = 0.0;
  double best_D = std::numeric_limits<double>::infinity();
  double eps = 0.0;
  double step = 0.0;
  double t_start = 0.0;
  /// Horizon actually covered; below the configured T only when truncated.
  double t_end = 0.0;
  bool truncated = false;
  std::size_t grid_size = 0;
  double covering_radius = 0.0;
  std::vector<std::string> warnings;
};

/// Shifted-zeta engine paired with aligned target samples.
class Discrepancy {
 public:
  Discrepancy(const SampleGrid& grid, const TargetFunction& target, const ZetaParams& params, double t_max = 0.0)
      : engine_(grid.points, params, t_max), target_(target.samples) {
    if (grid.size() != target.size()) throw TargetMismatch("target and grid sizes differ");
  }

  double operator()(double t) const {
    const auto values = engine_(t);
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) d = std::max(d, std::abs(values[i].value - target_[i]));
    return d;
  }

  /// Sum of the zeta error estimates at shift t.
  double error_budget(double t) const {
    double s = 0.0;
    for (const ZetaValue& v : engine_(t)) s += v.error_estimate;
    return s;
  }

 private:
  ShiftedZeta engine_;
  std::vector<cplx> target_;
};

inline double discrepancy(const SampleGrid& grid, const TargetFunction& target, double t,
                          const ZetaParams& params = {}) {
  return Discrepancy(grid, target, params, t)(t);
}

/// f_i = zeta(z_i): the strong-recurrence target.
inline TargetFunction self_similarity_target(const SampleGrid& grid, const ZetaParams& params = {}) {
  TargetFunction out = sample_target(ZetaTarget{}, grid, params);
  out.description = "zeta(z) (self-similarity)";
  return out;
}

namespace detail {

inline std::vector<double> t_grid(const ScanConfig& cfg) {
  const double span = cfg.T - cfg.t_start;
  const auto n = static_cast<std::size_t>(std::floor(span / cfg.step + 1e-9));
  std::vector<double> ts;
  ts.reserve(n + 2);
  for (std::size_t k = 0; k <= n; ++k) ts.push_back(cfg.t_start + double(k) * cfg.step);
  if (ts.back() < cfg.T - 1e-12 * std::max(1.0, cfg.T)) ts.push_back(cfg.T);
  else ts.back() = std::min(ts.back(), cfg.T);
  return ts;
}

/// Runs job(i) for i in [0, count) over contiguous chunks. Results must be
/// written by index so the outcome does not depend on the thread count.
inline void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(count, lo + chunk);
      try {
        for (std::size_t i = lo; i < hi; ++i) job(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail

/// Hit intervals, density and argmin for a fixed trace. `D` is only called
/// to bisect crossings, so the result is a pure function of the trace, eps,
/// refine_tol and D.
inline ScanReport assemble_report(std::vector<TracePoint> trace, double eps, const ScanConfig& cfg,
                                  const std::function<double(double)>& D) {
  ScanReport report;
  report.eps = eps;
  report.step = cfg.step;
  report.t_start = cfg.t_start;
  report.trace = std::move(trace);
  const auto& tr = report.trace;
  if (tr.empty()) return report;
  report.t_end = tr.back().t;

  for (const TracePoint& p : tr) {
    if (p.D < report.best_D) report.best_D = p.D, report.best_t = p.t;
  }

  // Crossing cells, then bisection per cell.
  std::vector<std::size_t> cells;
  for (std::size_t k = 0; k + 1 < tr.size(); ++k) {
    if ((tr[k].D < eps) != (tr[k + 1].D < eps)) cells.push_back(k);
  }
  std::vector<double> crossing(cells.size());
  detail::parallel_for(cells.size(), cfg.threads, [&](std::size_t c) {
    const std::size_t k = cells[c];
    const bool left_below = tr[k].D < eps;
    double a = tr[k].t;
    double b = tr[k + 1].t;
    while (b - a > cfg.refine_tol) {
      const double mid = 0.5 * (a + b);
      if ((D(mid) < eps) == left_below) a = mid;
      else b = mid;
    }
    crossing[c] = 0.5 * (a + b);
  });

  std::optional<double> open;
  if (tr.front().D < eps) open = tr.front().t;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (open) {
      report.hit_intervals.push_back({*open, crossing[c]});
      open.reset();
    } else {
      open = crossing[c];
    }
  }
  if (open) report.hit_intervals.push_back({*open, tr.back().t});

  double covered = 0.0;
  for (const HitInterval& h : report.hit_intervals) covered += h.length();
  const double horizon = report.t_end - report.t_start;
  report.empirical_density = horizon > 0.0 ? std::clamp(covered / horizon, 0.0, 1.0) : (report.hit_intervals.empty() ? 0.0 : 1.0);
  return report;
}

/// Scan over a fixed grid and aligned target.
inline ScanReport scan_grid(const SampleGrid& grid, const TargetFunction& target, const ScanConfig& cfg,
                            const ZetaParams& params = {}) {
  cfg.validate();
  const Discrepancy D(grid, target, params, cfg.T);
  const std::vector<double> ts = detail::t_grid(cfg);

  std::vector<double> values(ts.size(), 0.0);
  std::vector<char> failed(ts.size(), 0);
  std::vector<std::exception_ptr> failure(ts.size());
  detail::parallel_for(ts.size(), cfg.threads, [&](std::size_t i) {
    try {
      values[i] = D(ts[i]);
    } catch (const PrecisionExhausted&) {
      failed[i] = 1;
      failure[i] = std::current_exception();
    }
  });

  std::vector<TracePoint> trace;
  trace.reserve(ts.size());
  bool truncated = false;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (failed[i]) {
      if (i == 0) std::rethrow_exception(failure[i]);
      truncated = true;
      break;
    }
    trace.push_back({ts[i], values[i]});
  }
  ScanReport report = assemble_report(std::move(trace), cfg.eps, cfg, [&](double t) { return D(t); });
  report.truncated = truncated;
  report.grid_size = grid.size();
  report.covering_radius = grid.covering_radius;
  if (truncated) report.warnings.push_back("zeta precision exhausted; trace truncated at t = " + std::to_string(report.t_end));
  return report;
}

inline bool inside_strip(const SampleGrid& grid) {
  return std::all_of(grid.points.begin(), grid.points.end(),
                     [](const cplx& z) { return z.real() > 0.5 && z.real() < 1.0; });
}

/// Samples K at cfg.grid_h, resolves the target on that grid and scans.
inline ScanReport scan_density(const CompactSet& set, const TargetSpec& spec, const ScanConfig& cfg,
                               const ZetaParams& params = {}) {
  cfg.validate();
  const SampleGrid grid = discretize(set, cfg.grid_h);
  const TargetFunction target = sample_target(spec, grid, params);
  ScanReport report = scan_grid(grid, target, cfg, params);
  if (!inside_strip(grid)) report.warnings.push_back("set leaves the strip 1/2 < Re(z) < 1");
  return report;
}

/// K = [sigma, sigma + iC], f given at imaginary offsets in [0, C].
inline ScanReport line_universality(double sigma, double C, std::span<const double> offsets,
                                    const TargetFunction& f, const ScanConfig& cfg, const ZetaParams& params = {}) {
  if (!(sigma > 0.5 && sigma < 1.0)) throw InvalidArgument("line universality needs 1/2 < sigma < 1");
  if (!(C > 0.0)) throw InvalidArgument("line universality needs C > 0");
  if (offsets.size() != f.size() || offsets.empty()) throw TargetMismatch("offsets and target samples differ");
  SampleGrid grid{{}, 0.0, CompactSet::segment(cplx(sigma, 0.0), cplx(sigma, C))};
  std::vector<double> sorted(offsets.begin(), offsets.end());
  std::sort(sorted.begin(), sorted.end());
  for (double u : sorted) {
    if (!(u >= 0.0 && u <= C)) throw InvalidArgument("offsets must lie in [0, C]");
    grid.points.emplace_back(sigma, u);
  }
  double gap = std::max(sorted.front(), C - sorted.back());
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) gap = std::max(gap, 0.5 * (sorted[i + 1] - sorted[i]));
  grid.covering_radius = gap;
  // Targets follow the caller's offset order; re-align to the sorted grid.
  std::vector<std::size_t> order(offsets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return offsets[a] < offsets[b]; });
  TargetFunction aligned{{}, f.description};
  for (std::size_t i : order) aligned.samples.push_back(f.samples[i]);
  return scan_grid(grid, aligned, cfg, params);
}

/// Convenience form: f(u) sampled at offsets with spacing from cfg.grid_h.
inline ScanReport line_universality(double sigma, double C, const std::function<cplx(double)>& f,
                                    const ScanConfig& cfg, const ZetaParams& params = {}) {
  const std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(C / (2.0 * cfg.grid_h))));
  std::vector<double> offsets;
  TargetFunction target{{}, "line target"};
  for (std::size_t j = 0; j <= n; ++j) {
    const double u = j == n ? C : C * double(j) / double(n);
    offsets.push_back(u);
    target.samples.push_back(f(u));
  }
  return line_universality(sigma, C, offsets, target, cfg, params);
}

}  // namespace striplab
