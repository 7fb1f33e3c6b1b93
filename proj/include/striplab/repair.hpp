#pragma once

// Moves the roots of a polynomial off K so that the result has no zeros on K,
// with a certified bound on how much the polynomial changed. All radii,
// distances and displacements in the certificate are in the polynomial's frame
// units (identical to plain units for the identity frame).

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "striplab/approximation.hpp"
#include "striplab/error.hpp"
#include "striplab/geometry.hpp"
#include "striplab/polynomial.hpp"

namespace striplab {

struct MovedRoot {
  std::size_t index = 0;  // position in the repaired root list
  cplx old_root;
  cplx new_root;
  double distance_moved = 0.0;
};

struct RepairCertificate {
  double perturbation_bound_value = 0.0;  // B over |u| <= bound_radius
  double min_modulus_lower_bound = 0.0;   // L, |p| >= L on K
  std::vector<MovedRoot> moved_roots;
  double budget = 0.0;
  double bound_radius = 0.0;  // R, bounding radius of K in frame units
  double clearance = 0.0;     // tau
  double delta = 0.0;         // displacement allowance per moved root
  cplx original_leading{};    // leading coefficient before repair

  bool valid() const { return perturbation_bound_value < budget && min_modulus_lower_bound > 0.0; }
};

struct RepairResult {
  FactoredPolynomial polynomial;
  RepairCertificate certificate;
};

struct NonvanishingApproximation {
  FactoredPolynomial polynomial;
  FitResult fit;
  RepairCertificate certificate;

  /// Grid sup error of the fit plus the repair perturbation bound.
  double certified_error() const { return fit.sup_error_on_samples + certificate.perturbation_bound_value; }
};

/// Recomputes B from the repaired roots and the moved-root record.
inline double recompute_perturbation_bound(const FactoredPolynomial& fp, const RepairCertificate& cert) {
  std::vector<cplx> before(fp.roots.size());
  std::vector<cplx> after(fp.roots.size());
  for (std::size_t k = 0; k < fp.roots.size(); ++k) before[k] = after[k] = fp.frame.to_local(fp.roots[k]);
  for (const MovedRoot& m : cert.moved_roots) before.at(m.index) = fp.frame.to_local(m.old_root);
  if (fp.roots.empty()) return std::abs(fp.leading - cert.original_leading);
  return perturbation_bound(fp.leading, before, after, cert.bound_radius);
}

namespace detail {

inline RepairResult constant_repair(cplx original, cplx value, const Frame& frame, double budget) {
  RepairResult out;
  out.polynomial = FactoredPolynomial{value, {}, frame};
  out.certificate.budget = budget;
  out.certificate.original_leading = original;
  out.certificate.perturbation_bound_value = std::abs(value - original);
  out.certificate.min_modulus_lower_bound = std::abs(value);
  return out;
}

}  // namespace detail

/// Root-level repair. Roots within the clearance
///   tau = min(max(1e-9, budget * 1e-3 / (m * M^(m-1) * |c0|)), delta0 / 16),
///   M = R + max|root|,  delta0 = budget / (2 * m * |c0| * M^(m-1)),
/// are replaced by exterior points within
///   delta = budget / (2 * m_moved * |c0| * M^(m-1)),
/// halving delta until the telescoping bound is below budget. delta is never
/// taken below the distance resolution of the moved roots. Capping tau
/// below delta0 keeps moved roots outside the clearance, so a second repair
/// with the same budget changes nothing.
inline RepairResult repair_nonvanishing(const FactoredPolynomial& input, const CompactSet& set, double budget) {
  if (!(budget > 0.0)) throw InvalidArgument("repair budget must be positive");
  const Frame& frame = input.frame;
  if (input.leading == cplx{}) {
    // The zero polynomial vanishes everywhere; the forced repair is a small constant.
    return detail::constant_repair(cplx{}, cplx(budget / 2.0, 0.0), frame, budget);
  }
  if (input.roots.empty()) return detail::constant_repair(input.leading, input.leading, frame, budget);

  const std::size_t m = input.roots.size();
  const double c0 = std::abs(input.leading);
  const double R = bounding_radius(set, frame.center) / frame.scale;
  std::vector<cplx> local(m);
  double max_root = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    local[k] = frame.to_local(input.roots[k]);
    max_root = std::max(max_root, std::abs(local[k]));
  }
  const double M = R + max_root;
  const double growth = std::pow(M, double(m - 1));
  const double delta0 = budget / (2.0 * double(m) * c0 * growth);
  const double tau = std::min(std::max(1e-9, budget * 1e-3 / (double(m) * growth * c0)), delta0 / 16.0);

  std::vector<std::size_t> close;
  for (std::size_t k = 0; k < m; ++k) {
    const cplx r = input.roots[k];
    if ((distance(set, r) - distance_floor(set, r)) / frame.scale <= tau) close.push_back(k);
  }

  RepairResult out;
  out.polynomial = input;
  auto& cert = out.certificate;
  cert.budget = budget;
  cert.bound_radius = R;
  cert.clearance = tau;
  cert.original_leading = input.leading;

  if (!close.empty()) {
    // Displacements below a few rounding floors cannot be verified, so the
    // allowance never drops under that resolution; the telescoping bound
    // still decides whether it fits the budget.
    double resolution = 0.0;
    for (std::size_t k : close) resolution = std::max(resolution, 4.0 * distance_floor(set, input.roots[k]) / frame.scale);
    double delta = std::max(budget / (2.0 * double(close.size()) * c0 * growth), resolution);
    for (int attempt = 0;; ++attempt) {
      if (!(delta > 0.0) || !std::isfinite(delta) || attempt > 60 || delta < resolution) {
        throw BudgetInfeasible(std::max(delta, resolution) * frame.scale);
      }
      std::vector<cplx> moved = local;
      cert.moved_roots.clear();
      try {
        for (std::size_t k : close) {
          const cplx w = nearest_exterior(set, input.roots[k], delta * frame.scale);
          moved[k] = frame.to_local(w);
          cert.moved_roots.push_back({k, input.roots[k], w, std::abs(moved[k] - local[k])});
        }
      } catch (const ResolutionExhausted&) {
        throw BudgetInfeasible(delta * frame.scale);
      }
      const double B = perturbation_bound(input.leading, local, moved, R);
      if (B < budget) {
        for (const MovedRoot& mr : cert.moved_roots) out.polynomial.roots[mr.index] = mr.new_root;
        cert.perturbation_bound_value = B;
        cert.delta = delta;
        break;
      }
      delta /= 2.0;
    }
  }
  cert.min_modulus_lower_bound = min_modulus_certificate(out.polynomial, set);
  if (!(cert.min_modulus_lower_bound > 0.0)) throw BudgetInfeasible(cert.delta * frame.scale);
  return out;
}

/// Coefficient-level entry point: finds the roots of P first.
inline RepairResult repair_nonvanishing(const Polynomial& P, const CompactSet& set, double budget) {
  if (!(budget > 0.0)) throw InvalidArgument("repair budget must be positive");
  if (P.is_zero()) return repair_nonvanishing(FactoredPolynomial{cplx{}, {}, P.frame()}, set, budget);
  if (P.degree() == 0) return repair_nonvanishing(FactoredPolynomial{P.leading(), {}, P.frame()}, set, budget);
  std::vector<cplx> found;
  try {
    found = roots(P);
  } catch (const NoConvergence& e) {
    throw RootFindingFailed(e.what());
  }
  return repair_nonvanishing(FactoredPolynomial{P.leading(), std::move(found), P.frame()}, set, budget);
}

/// Fit to eps/2, then repair within eps/2: |p - f| < eps on the grid and p has
/// no zeros on K.
inline NonvanishingApproximation approximate_nonvanishing(const CompactSet& set, const TargetSpec& spec, double eps,
                                                          int max_degree, const ApproxOptions& opts = {}) {
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  FitResult fit = approximate(set, spec, eps / 2.0, max_degree, opts);
  RepairResult rep = repair_nonvanishing(fit.polynomial, set, eps / 2.0);
  return {std::move(rep.polynomial), std::move(fit), std::move(rep.certificate)};
}

}  // namespace striplab
