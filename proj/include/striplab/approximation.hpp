#pragma once

// Polynomial fits on a sampled compact set: discrete least squares through an
// Arnoldi-orthogonalized basis (never raw monomial normal equations), Lawson
// reweighting toward the sup norm, and least-sufficient-degree search.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "striplab/error.hpp"
#include "striplab/geometry.hpp"
#include "striplab/polynomial.hpp"
#include "striplab/target.hpp"

namespace striplab {

struct FitResult {
  Polynomial polynomial;
  double sup_error_on_samples = 0.0;
  int degree_used = 0;
  int iterations = 0;
  /// Covering radius h of the grid the fit was measured on.
  double covering_radius = 0.0;
  /// Lipschitz constant L_P of the polynomial over a disk containing K.
  double derivative_bound = 0.0;

  /// L_P * h: how far the polynomial can drift between neighbouring samples.
  double modulus_bound() const { return derivative_bound * covering_radius; }
};

class BudgetNotMet : public Error {
 public:
  explicit BudgetNotMet(FitResult best_fit)
      : Error("sup error " + std::to_string(best_fit.sup_error_on_samples) + " not below budget"),
        best(std::move(best_fit)) {}
  FitResult best;
};

struct ApproxOptions {
  int lawson_iters = 30;
  double max_h = 0.01;
  std::size_t sample_cap = default_sample_cap;
  /// Ceiling on the fitting grids. When h would need more samples, h is
  /// coarsened until it fits; the FitResult reports the h actually used.
  std::size_t grid_sample_limit = 10'000;
  ZetaParams zeta{};
};

inline constexpr double lawson_weight_floor = 1e-14;

namespace detail {

/// Weighted discrete least squares of degree n in the variable u. Returns
/// ascending monomial coefficients in u. Weights must be positive.
inline std::vector<cplx> weighted_lsq(std::span<const cplx> u, std::span<const double> w, std::span<const cplx> f,
                                      int degree) {
  const std::size_t M = u.size();
  const std::size_t n = static_cast<std::size_t>(degree);
  if (M < n + 1) throw InsufficientSamples(M, n + 1);

  auto dot = [&](const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx s{};
    for (std::size_t i = 0; i < M; ++i) s += w[i] * std::conj(a[i]) * b[i];
    return s;
  };
  auto norm = [&](const std::vector<cplx>& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < M; ++i) s += w[i] * std::norm(a[i]);
    return std::sqrt(s);
  };

  std::vector<std::vector<cplx>> q;
  std::vector<std::vector<cplx>> mono;  // monomial coefficients of each basis polynomial
  q.reserve(n + 1);
  mono.reserve(n + 1);

  double wsum = 0.0;
  for (double wi : w) wsum += wi;
  const double q0 = 1.0 / std::sqrt(wsum);
  q.emplace_back(M, cplx(q0, 0.0));
  mono.push_back({cplx(q0, 0.0)});

  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<cplx> v(M);
    for (std::size_t i = 0; i < M; ++i) v[i] = u[i] * q[k - 1][i];
    std::vector<cplx> mv(k + 1, cplx{});
    for (std::size_t j = 0; j < k; ++j) mv[j + 1] = mono[k - 1][j];
    const double before = norm(v);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < k; ++j) {
        const cplx h = dot(q[j], v);
        for (std::size_t i = 0; i < M; ++i) v[i] -= h * q[j][i];
        for (std::size_t c = 0; c < mono[j].size(); ++c) mv[c] -= h * mono[j][c];
      }
    }
    const double hk = norm(v);
    if (!(hk > 1e-12 * before)) throw RankDeficient(static_cast<int>(k));
    for (cplx& x : v) x /= hk;
    for (cplx& x : mv) x /= hk;
    q.push_back(std::move(v));
    mono.push_back(std::move(mv));
  }

  std::vector<cplx> r(f.begin(), f.end());
  std::vector<cplx> coeffs(n + 1, cplx{});
  for (std::size_t k = 0; k <= n; ++k) {
    const cplx d = dot(q[k], r);
    for (std::size_t i = 0; i < M; ++i) r[i] -= d * q[k][i];
    for (std::size_t c = 0; c < mono[k].size(); ++c) coeffs[c] += d * mono[k][c];
  }
  return coeffs;
}

inline void check_alignment(const SampleGrid& grid, const TargetFunction& target) {
  if (grid.size() != target.size()) throw TargetMismatch("target and grid sizes differ");
}

inline double sup_residual(const Polynomial& p, const SampleGrid& grid, const TargetFunction& target,
                           std::vector<double>* residuals = nullptr) {
  double sup = 0.0;
  if (residuals) residuals->resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = std::abs(evaluate(p, grid.points[i]) - target.samples[i]);
    sup = std::max(sup, r);
    if (residuals) (*residuals)[i] = r;
  }
  return sup;
}

inline FitResult make_fit(const SampleGrid& grid, const TargetFunction& target, std::vector<cplx> coeffs,
                          const Frame& frame, int degree, int iterations) {
  FitResult out{Polynomial(std::move(coeffs), frame), 0.0, degree, iterations, grid.covering_radius, 0.0};
  out.sup_error_on_samples = sup_residual(out.polynomial, grid, target);
  const double local_radius = bounding_radius(grid.source, frame.center) / frame.scale;
  out.derivative_bound = derivative_bound(out.polynomial, local_radius);
  return out;
}

inline std::vector<cplx> local_points(const SampleGrid& grid, const Frame& frame) {
  std::vector<cplx> u(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) u[i] = frame.to_local(grid.points[i]);
  return u;
}

}  // namespace detail

/// Minimizer of sum |P(z_i) - f_i|^2 over degree <= `degree`.
inline FitResult fit_least_squares(const SampleGrid& grid, const TargetFunction& target, int degree) {
  if (degree < 0) throw InvalidArgument("degree must be non-negative");
  detail::check_alignment(grid, target);
  if (grid.size() < static_cast<std::size_t>(degree) + 1) throw InsufficientSamples(grid.size(), degree + 1);
  const Frame frame = Frame::enclosing(grid.points);
  const auto u = detail::local_points(grid, frame);
  const std::vector<double> w(grid.size(), 1.0 / double(grid.size()));
  return detail::make_fit(grid, target, detail::weighted_lsq(u, w, target.samples, degree), frame, degree, 1);
}

/// Lawson iteration: w_i <- w_i |r_i|, renormalized. Returns the best iterate
/// seen, so never worse than plain least squares.
inline FitResult lawson_refine(const SampleGrid& grid, const TargetFunction& target, int degree, int max_iters) {
  FitResult best = fit_least_squares(grid, target, degree);
  if (max_iters <= 0) return best;

  double fmax = 0.0;
  for (const cplx& v : target.samples) fmax = std::max(fmax, std::abs(v));
  if (best.sup_error_on_samples <= 1e-13 * std::max(1.0, fmax)) return best;

  const Frame frame = best.polynomial.frame();
  const auto u = detail::local_points(grid, frame);
  const std::size_t M = grid.size();
  std::vector<double> w(M, 1.0 / double(M));
  std::vector<double> residuals;
  detail::sup_residual(best.polynomial, grid, target, &residuals);
  int solves = 1;
  double previous = best.sup_error_on_samples;

  for (int it = 0; it < max_iters; ++it) {
    double total = 0.0;
    for (std::size_t i = 0; i < M; ++i) total += (w[i] *= residuals[i]);
    if (!(total > 0.0)) break;
    for (double& wi : w) wi = std::max(wi / total, lawson_weight_floor);

    std::vector<cplx> coeffs;
    try {
      coeffs = detail::weighted_lsq(u, w, target.samples, degree);
    } catch (const RankDeficient&) {
      break;
    }
    ++solves;
    Polynomial p(std::move(coeffs), frame);
    const double sup = detail::sup_residual(p, grid, target, &residuals);
    if (sup < best.sup_error_on_samples) {
      best.polynomial = std::move(p);
      best.sup_error_on_samples = sup;
    }
    if (std::abs(previous - sup) <= 1e-9 * sup) break;
    previous = sup;
  }
  best.iterations = solves;
  const double local_radius = bounding_radius(grid.source, frame.center) / frame.scale;
  best.derivative_bound = derivative_bound(best.polynomial, local_radius);
  return best;
}

namespace detail {

/// Least sufficient degree on a fixed grid: doubling from `start`, then
/// bisection. Throws BudgetNotMet with the best attempt when max_degree fails.
inline FitResult escalate(const SampleGrid& grid, const TargetFunction& target, double budget, int start,
                          int max_degree, int lawson_iters) {
  std::optional<FitResult> best;
  auto attempt = [&](int d) -> std::optional<FitResult> {
    FitResult r = lawson_refine(grid, target, d, lawson_iters);
    if (!best || r.sup_error_on_samples < best->sup_error_on_samples) best = r;
    if (r.sup_error_on_samples < budget) return r;
    return std::nullopt;
  };

  int failed = start - 1;
  std::optional<FitResult> found;
  int found_degree = -1;
  int d = start;
  bool tried_max = false;
  while (true) {
    std::optional<FitResult> r;
    try {
      r = attempt(d);
    } catch (const InsufficientSamples&) {
      break;
    } catch (const RankDeficient&) {
      break;
    }
    tried_max = tried_max || d == max_degree;
    if (r) {
      found = std::move(r);
      found_degree = d;
      break;
    }
    failed = d;
    if (d >= max_degree) break;
    d = std::min(max_degree, d == 0 ? 1 : 2 * d);
  }
  if (!found) {
    if (!best) throw InsufficientSamples(grid.size(), static_cast<std::size_t>(start) + 1);
    throw BudgetNotMet(*best);
  }

  while (found_degree - failed > 1) {
    const int mid = failed + (found_degree - failed) / 2;
    if (auto r = attempt(mid)) {
      found = std::move(r);
      found_degree = mid;
    } else {
      failed = mid;
    }
  }
  return *found;
}

}  // namespace detail

/// Fit on a fixed grid, degree escalation only.
inline FitResult approximate(const SampleGrid& grid, const TargetFunction& target, double budget, int max_degree,
                             const ApproxOptions& opts = {}) {
  if (!(budget > 0.0)) throw InvalidArgument("approximation budget must be positive");
  if (max_degree < 0) throw InvalidArgument("max_degree must be non-negative");
  detail::check_alignment(grid, target);
  return detail::escalate(grid, target, budget, 0, max_degree, opts.lawson_iters);
}

namespace detail {

/// Grid with covering radius as close to h as the sample limit allows.
inline SampleGrid capped_grid(const CompactSet& set, double h, std::size_t limit) {
  while (true) {
    try {
      return discretize(set, h, limit);
    } catch (const BudgetExceeded& e) {
      h *= std::max(1.01, 1.01 * double(e.required_samples) / double(e.sample_cap));
    }
  }
}

}  // namespace detail

/// Least-degree polynomial with grid sup error below `budget`. The grid starts
/// at h = min(max_h, budget/10); if the fitted polynomial's derivative bound
/// L_P shows h > budget / (10 L_P) the fit is redone once on the finer grid.
/// Both grids are capped at grid_sample_limit samples.
inline FitResult approximate(const CompactSet& set, const TargetSpec& spec, double budget, int max_degree,
                             const ApproxOptions& opts = {}) {
  if (!(budget > 0.0)) throw InvalidArgument("approximation budget must be positive");
  if (std::holds_alternative<SampledTarget>(spec)) {
    throw TargetMismatch("sampled targets need the aligned-grid overload of approximate");
  }
  const std::size_t limit = std::min(opts.grid_sample_limit, opts.sample_cap);
  SampleGrid grid = detail::capped_grid(set, std::min(opts.max_h, budget / 10.0), limit);
  TargetFunction target = sample_target(spec, grid, opts.zeta);
  FitResult fit = approximate(grid, target, budget, max_degree, opts);

  const double wanted = budget / (10.0 * std::max(1.0, fit.derivative_bound));
  if (grid.covering_radius > wanted) {
    SampleGrid fine = detail::capped_grid(set, wanted, limit);
    if (fine.covering_radius < grid.covering_radius) {
      TargetFunction fine_target = sample_target(spec, fine, opts.zeta);
      fit = detail::escalate(fine, fine_target, budget, fit.degree_used, std::max(max_degree, fit.degree_used),
                             opts.lawson_iters);
    }
  }
  return fit;
}

}  // namespace striplab
