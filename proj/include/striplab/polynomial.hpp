#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <vector>

#include "striplab/error.hpp"
#include "striplab/geometry.hpp"

namespace striplab {

/// Affine working variable u = (z - center) / scale. Coefficients live in u so
/// that polynomials fitted on a small set far from the origin stay well
/// conditioned. The identity frame gives plain powers of z.
struct Frame {
  cplx center{};
  double scale = 1.0;

  cplx to_local(cplx z) const { return (z - center) / scale; }
  cplx to_global(cplx u) const { return center + scale * u; }
  bool is_identity() const { return center == cplx{} && scale == 1.0; }

  /// Bounding-box midpoint and radius of a point cloud.
  static Frame enclosing(std::span<const cplx> pts) {
    if (pts.empty()) return {};
    double xlo = pts[0].real(), xhi = xlo, ylo = pts[0].imag(), yhi = ylo;
    for (const cplx& z : pts) {
      xlo = std::min(xlo, z.real());
      xhi = std::max(xhi, z.real());
      ylo = std::min(ylo, z.imag());
      yhi = std::max(yhi, z.imag());
    }
    const cplx c(0.5 * (xlo + xhi), 0.5 * (ylo + yhi));
    double r = 0.0;
    for (const cplx& z : pts) r = std::max(r, std::abs(z - c));
    return {c, r > 0.0 ? r : 1.0};
  }
};

/// Dense polynomial, ascending coefficients in the frame variable. Trailing
/// exact zeros are trimmed; the zero polynomial is the single coefficient 0.
class Polynomial {
 public:
  Polynomial() : coeffs_{cplx{}} {}

  explicit Polynomial(std::vector<cplx> coeffs, Frame frame = {}) : coeffs_(std::move(coeffs)), frame_(frame) {
    if (!(frame_.scale > 0.0)) throw InvalidArgument("polynomial frame scale must be positive");
    while (coeffs_.size() > 1 && coeffs_.back() == cplx{}) coeffs_.pop_back();
    if (coeffs_.empty()) coeffs_.push_back(cplx{});
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == cplx{}; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  const Frame& frame() const { return frame_; }
  cplx leading() const { return coeffs_.back(); }

  cplx operator()(cplx z) const;

 private:
  std::vector<cplx> coeffs_;
  Frame frame_;
};

/// Leading coefficient times the product of (u - u_k), u the frame variable.
struct FactoredPolynomial {
  cplx leading{1.0, 0.0};
  std::vector<cplx> roots;
  Frame frame;

  int degree() const { return static_cast<int>(roots.size()); }

  cplx operator()(cplx z) const {
    const cplx u = frame.to_local(z);
    cplx acc = leading;
    for (const cplx& r : roots) acc *= u - frame.to_local(r);
    return acc;
  }
};

namespace detail {

struct HornerValue {
  cplx value;
  cplx derivative;
  double magnitude;  // sum |c_k| |u|^k, scale of the rounding error
};

inline HornerValue horner_with_derivative(std::span<const cplx> c, cplx u) {
  cplx p = c.back();
  cplx dp{};
  double mag = std::abs(c.back());
  const double au = std::abs(u);
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    dp = dp * u + p;
    p = p * u + c[k];
    mag = mag * au + std::abs(c[k]);
  }
  return {p, dp, mag};
}

}  // namespace detail

inline cplx evaluate(const Polynomial& p, cplx z) {
  const auto& c = p.coeffs();
  const cplx u = p.frame().to_local(z);
  cplx acc = c.back();
  for (std::size_t k = c.size() - 1; k-- > 0;) acc = acc * u + c[k];
  return acc;
}

inline cplx Polynomial::operator()(cplx z) const { return evaluate(*this, z); }

/// Sequential multiplication of the linear factors, expanded in the frame variable.
inline Polynomial from_roots(cplx leading, std::span<const cplx> roots, Frame frame = {}) {
  if (leading == cplx{}) throw InvalidArgument("from_roots needs a nonzero leading coefficient");
  std::vector<cplx> c{leading};
  c.reserve(roots.size() + 1);
  for (const cplx& r : roots) {
    const cplx u = frame.to_local(r);
    c.push_back(c.back());
    for (std::size_t k = c.size() - 2; k > 0; --k) c[k] = c[k - 1] - u * c[k];
    c[0] = -u * c[0];
  }
  return Polynomial(std::move(c), frame);
}

inline Polynomial expand(const FactoredPolynomial& fp) { return from_roots(fp.leading, fp.roots, fp.frame); }

inline constexpr int max_root_sweeps = 1000;

/// All m roots by Aberth-Ehrlich iteration, returned in global coordinates.
/// Each root satisfies |p(u)| <= tol * max|c_k| * max(1, |u|)^m in the frame
/// variable u.
inline std::vector<cplx> roots(const Polynomial& p, double tol = 1e-10) {
  const int m = p.degree();
  if (m < 1) throw DegreeZero();
  const auto& c = p.coeffs();
  const Frame& frame = p.frame();
  if (m == 1) return {frame.to_global(-c[0] / c[1])};

  double ring = 0.0;
  for (int k = 0; k < m; ++k) ring = std::max(ring, std::abs(c[k] / c[m]));
  ring += 1.0;

  std::vector<cplx> z(m);
  for (int k = 0; k < m; ++k) z[k] = std::polar(ring, two_pi * k / m + 0.4);

  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::vector<bool> done(m, false);
  int sweep = 0;
  for (; sweep < max_root_sweeps; ++sweep) {
    bool active = false;
    for (int i = 0; i < m; ++i) {
      if (done[i]) continue;
      const auto h = detail::horner_with_derivative(c, z[i]);
      if (std::abs(h.value) <= 2.0 * (m + 1) * eps * h.magnitude) {
        done[i] = true;
        continue;
      }
      active = true;
      cplx repulsion{};
      for (int j = 0; j < m; ++j) {
        if (j != i) repulsion += 1.0 / (z[i] - z[j]);
      }
      cplx step;
      if (h.derivative == cplx{}) {
        step = cplx(std::abs(z[i]) + 1.0, 0.0) * 1e-3;
      } else {
        const cplx ratio = h.value / h.derivative;
        step = ratio / (1.0 - ratio * repulsion);
      }
      z[i] -= step;
      if (std::abs(step) <= 2.0 * eps * std::abs(z[i])) done[i] = true;
    }
    if (!active) break;
  }

  double cmax = 0.0;
  for (const cplx& ck : c) cmax = std::max(cmax, std::abs(ck));
  std::vector<cplx> out(m);
  for (int i = 0; i < m; ++i) {
    const double scale = cmax * std::pow(std::max(1.0, std::abs(z[i])), m);
    const cplx residual = detail::horner_with_derivative(c, z[i]).value;
    if (!(std::abs(residual) <= tol * scale)) throw NoConvergence(sweep);
    out[i] = frame.to_global(z[i]);
  }
  return out;
}

namespace detail {

/// Factors that round a product of n terms outward, so certificates stay on
/// the safe side of floating-point error.
inline double outward_up(std::size_t n) { return 1.0 + 8.0 * double(n + 2) * std::numeric_limits<double>::epsilon(); }
inline double outward_down(std::size_t n) { return 1.0 - 8.0 * double(n + 2) * std::numeric_limits<double>::epsilon(); }

}  // namespace detail

/// Telescoping bound on sup_{|u| <= R} |P - p| for P, p sharing `leading`
/// with roots paired by index.
inline double perturbation_bound(cplx leading, std::span<const cplx> roots_old, std::span<const cplx> roots_new,
                                 double R) {
  if (roots_old.size() != roots_new.size()) throw LengthMismatch("perturbation_bound root lists differ in length");
  const std::size_t m = roots_old.size();
  std::vector<double> reach(m);
  for (std::size_t j = 0; j < m; ++j) reach[j] = R + std::max(std::abs(roots_old[j]), std::abs(roots_new[j]));
  double total = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double moved = std::abs(roots_old[k] - roots_new[k]);
    if (moved == 0.0) continue;
    double prod = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j != k) prod *= reach[j];
    }
    total += moved * prod;
  }
  return std::abs(leading) * total * detail::outward_up(m);
}

/// L = |leading| * prod dist(K, root_k) in frame units; |p| >= L on K.
/// Distances are reduced by their rounding floor first.
inline double min_modulus_certificate(const FactoredPolynomial& fp, const CompactSet& set) {
  double value = std::abs(fp.leading);
  for (const cplx& r : fp.roots) value *= std::max(0.0, distance(set, r) - distance_floor(set, r)) / fp.frame.scale;
  return value * detail::outward_down(fp.roots.size());
}

/// Lipschitz constant of p over the global disk |z - center| <= R * scale,
/// from sum k |c_k| R^(k-1) in the frame variable.
inline double derivative_bound(const Polynomial& p, double local_radius) {
  const auto& c = p.coeffs();
  double sum = 0.0;
  double power = 1.0;
  for (std::size_t k = 1; k < c.size(); ++k) {
    sum += double(k) * std::abs(c[k]) * power;
    power *= local_radius;
  }
  return sum / p.frame().scale;
}

}  // namespace striplab
