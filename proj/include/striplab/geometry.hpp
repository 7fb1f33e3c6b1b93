#pragma once

// Admissible compact sets K: nonempty, compact, empty interior, connected
// complement. Every variant is an exact geometric description; distances are
// closed form.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <memory>
#include <numbers>
#include <string_view>
#include <variant>
#include <vector>

#include "striplab/error.hpp"

namespace striplab {

using cplx = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr std::size_t default_sample_cap = 10'000'000;

struct Segment {
  cplx a;
  cplx b;
};

struct Arc {
  cplx center;
  double radius = 1.0;
  double angle_start = 0.0;
  double angle_end = 0.0;

  double span() const { return angle_end - angle_start; }
  cplx point(double theta) const { return center + std::polar(radius, theta); }

  bool contains_angle(double phi) const {
    double rel = std::fmod(phi - angle_start, two_pi);
    if (rel < 0.0) rel += two_pi;
    // Angles a hair below angle_start wrap to ~2*pi.
    return rel <= span() || rel >= two_pi - 1e-15;
  }
};

struct Polyline {
  std::vector<cplx> vertices;
};

struct PointSet {
  std::vector<cplx> points;
};

struct Interval {
  double lo;
  double hi;
  double length() const { return hi - lo; }
};

/// How a CantorProduct is read as a planar set. `solid` is the union of
/// rectangles interval x [y_lo, y_hi] (has interior at finite depth; used as a
/// scanning carrier). `edges` keeps only the vertical fiber boundaries, which
/// has empty interior and is what repair should be run against.
enum class FiberMode { solid, edges };

struct CantorProduct {
  std::shared_ptr<const std::vector<Interval>> intervals;
  double y_lo = 0.0;
  double y_hi = 0.0;
  double scale = 1.0;
  cplx offset;
  FiberMode fibers = FiberMode::solid;

  const std::vector<Interval>& spans() const { return *intervals; }
  cplx to_local(cplx z) const { return (z - offset) / scale; }
  cplx to_global(double x, double y) const { return scale * cplx(x, y) + offset; }
};

namespace detail {

inline bool segments_intersect(cplx p1, cplx p2, cplx q1, cplx q2) {
  auto cross = [](cplx u, cplx v) { return u.real() * v.imag() - u.imag() * v.real(); };
  auto on_segment = [](cplx p, cplx q, cplx r) {
    return std::min(p.real(), r.real()) <= q.real() && q.real() <= std::max(p.real(), r.real()) &&
           std::min(p.imag(), r.imag()) <= q.imag() && q.imag() <= std::max(p.imag(), r.imag());
  };
  const double d1 = cross(q2 - q1, p1 - q1);
  const double d2 = cross(q2 - q1, p2 - q1);
  const double d3 = cross(p2 - p1, q1 - p1);
  const double d4 = cross(p2 - p1, q2 - p1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  return (d1 == 0 && on_segment(q1, p1, q2)) || (d2 == 0 && on_segment(q1, p2, q2)) ||
         (d3 == 0 && on_segment(p1, q1, p2)) || (d4 == 0 && on_segment(p1, q2, p2));
}

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace detail

class CompactSet {
 public:
  using Shape = std::variant<Segment, Arc, Polyline, PointSet, CantorProduct>;

  static CompactSet segment(cplx a, cplx b) {
    if (!detail::finite(a) || !detail::finite(b)) throw InvalidSpec("segment endpoints must be finite");
    if (a == b) throw InvalidSpec("segment endpoints coincide");
    return CompactSet(Segment{a, b});
  }

  static CompactSet arc(cplx center, double radius, double angle_start, double angle_end) {
    if (!detail::finite(center)) throw InvalidSpec("arc center must be finite");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidSpec("arc radius must be positive");
    const double span = angle_end - angle_start;
    if (!(span > 0.0)) throw InvalidSpec("arc angle_end must exceed angle_start");
    if (!(span < two_pi)) throw InvalidSpec("arc must be strictly shorter than a full circle");
    return CompactSet(Arc{center, radius, angle_start, angle_end});
  }

  static CompactSet polyline(std::vector<cplx> vertices) {
    if (vertices.size() < 2) throw InvalidSpec("polyline needs at least two vertices");
    for (const cplx& v : vertices) {
      if (!detail::finite(v)) throw InvalidSpec("polyline vertices must be finite");
    }
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
      if (vertices[i] == vertices[i + 1]) throw InvalidSpec("polyline has duplicate consecutive vertices");
    }
    if (vertices.front() == vertices.back()) throw InvalidSpec("polyline is closed");
    const std::size_t edges = vertices.size() - 1;
    for (std::size_t i = 0; i < edges; ++i) {
      // Adjacent edges may only share their common vertex.
      if (i + 1 < edges) {
        const cplx u = vertices[i + 1] - vertices[i];
        const cplx v = vertices[i + 2] - vertices[i + 1];
        const double cross = u.real() * v.imag() - u.imag() * v.real();
        const double dot = u.real() * v.real() + u.imag() * v.imag();
        if (cross == 0.0 && dot < 0.0) throw InvalidSpec("polyline folds back on itself");
      }
      for (std::size_t j = i + 2; j < edges; ++j) {
        if (detail::segments_intersect(vertices[i], vertices[i + 1], vertices[j], vertices[j + 1])) {
          throw InvalidSpec("polyline is self-intersecting");
        }
      }
    }
    return CompactSet(Polyline{std::move(vertices)});
  }

  static CompactSet point_set(std::vector<cplx> points) {
    if (points.empty()) throw InvalidSpec("point set is empty");
    for (const cplx& p : points) {
      if (!detail::finite(p)) throw InvalidSpec("points must be finite");
    }
    return CompactSet(PointSet{std::move(points)});
  }

  static CompactSet cantor_product(std::vector<Interval> intervals, double y_lo, double y_hi,
                                   double scale = 1.0, cplx offset = {},
                                   FiberMode fibers = FiberMode::solid) {
    if (intervals.empty()) throw InvalidSpec("cantor product needs at least one interval");
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      const Interval& iv = intervals[i];
      if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi) {
        throw InvalidSpec("interval endpoints must be finite with lo <= hi");
      }
      if (i > 0 && !(intervals[i - 1].hi < iv.lo)) {
        throw InvalidSpec("intervals must be sorted and pairwise disjoint");
      }
    }
    if (!std::isfinite(y_lo) || !std::isfinite(y_hi) || y_lo > y_hi) {
      throw InvalidSpec("cantor product needs y_lo <= y_hi");
    }
    if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidSpec("placement scale must be positive");
    if (!detail::finite(offset)) throw InvalidSpec("placement offset must be finite");
    return CompactSet(CantorProduct{
        std::make_shared<const std::vector<Interval>>(std::move(intervals)), y_lo, y_hi, scale, offset,
        fibers});
  }

  const Shape& shape() const { return shape_; }

  std::string_view kind() const {
    static constexpr std::string_view names[] = {"segment", "arc", "polyline", "points", "cantor_product"};
    return names[shape_.index()];
  }

  /// Curves and finite point sets, plus edge-mode Cantor products.
  bool has_empty_interior() const {
    if (const auto* cp = std::get_if<CantorProduct>(&shape_)) {
      if (cp->fibers == FiberMode::edges || cp->y_lo == cp->y_hi) return true;
      return std::all_of(cp->spans().begin(), cp->spans().end(),
                         [](const Interval& iv) { return iv.lo == iv.hi; });
    }
    return true;
  }

 private:
  explicit CompactSet(Shape shape) : shape_(std::move(shape)) {}
  Shape shape_;
};

struct SampleGrid {
  std::vector<cplx> points;
  double covering_radius = 0.0;
  CompactSet source;

  std::size_t size() const { return points.size(); }
};

// ---------------------------------------------------------------------------
// distance

namespace detail {

/// Parameter in [0, 1] of the closest point of [a, b] to z.
inline double segment_foot(cplx a, cplx b, cplx z) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  const double t = ((z - a) * std::conj(d)).real() / len2;
  return std::clamp(t, 0.0, 1.0);
}

inline double segment_distance(cplx a, cplx b, cplx z) {
  return std::abs(z - (a + segment_foot(a, b, z) * (b - a)));
}

inline double arc_distance(const Arc& arc, cplx z) {
  const cplx d = z - arc.center;
  const double rho = std::abs(d);
  if (rho == 0.0) return arc.radius;
  if (arc.contains_angle(std::arg(d))) return std::abs(rho - arc.radius);
  return std::min(std::abs(z - arc.point(arc.angle_start)), std::abs(z - arc.point(arc.angle_end)));
}

/// Index of the first interval with lo > x.
inline std::size_t interval_upper(const std::vector<Interval>& spans, double x) {
  auto it = std::upper_bound(spans.begin(), spans.end(), x,
                             [](double v, const Interval& iv) { return v < iv.lo; });
  return static_cast<std::size_t>(it - spans.begin());
}

/// Horizontal distance (local units) from x to the union of intervals, or to
/// the nearest interval endpoint in edge mode.
inline double fiber_dx(const CantorProduct& cp, double x) {
  const auto& spans = cp.spans();
  const std::size_t up = interval_upper(spans, x);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k : {up - 1, up}) {
    if (k >= spans.size()) continue;
    const Interval& iv = spans[k];
    if (cp.fibers == FiberMode::edges) {
      best = std::min({best, std::abs(x - iv.lo), std::abs(x - iv.hi)});
    } else if (x < iv.lo) {
      best = std::min(best, iv.lo - x);
    } else if (x > iv.hi) {
      best = std::min(best, x - iv.hi);
    } else {
      return 0.0;
    }
  }
  return best;
}

inline double cantor_distance(const CantorProduct& cp, cplx z) {
  const cplx u = cp.to_local(z);
  const double dy = std::max({cp.y_lo - u.imag(), u.imag() - cp.y_hi, 0.0});
  return cp.scale * std::hypot(fiber_dx(cp, u.real()), dy);
}

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace detail

/// Euclidean distance from z to K; zero exactly on K (up to rounding).
inline double distance(const CompactSet& set, cplx z) {
  return std::visit(
      detail::overloaded{
          [&](const Segment& s) { return detail::segment_distance(s.a, s.b, z); },
          [&](const Arc& a) { return detail::arc_distance(a, z); },
          [&](const Polyline& p) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
              best = std::min(best, detail::segment_distance(p.vertices[i], p.vertices[i + 1], z));
            }
            return best;
          },
          [&](const PointSet& ps) {
            double best = std::numeric_limits<double>::infinity();
            for (const cplx& q : ps.points) best = std::min(best, std::abs(z - q));
            return best;
          },
          [&](const CantorProduct& cp) { return detail::cantor_distance(cp, z); },
      },
      set.shape());
}

/// max |z - center| over K.
inline double bounding_radius(const CompactSet& set, cplx center = {}) {
  return std::visit(
      detail::overloaded{
          [&](const Segment& s) { return std::max(std::abs(s.a - center), std::abs(s.b - center)); },
          [&](const Arc& a) {
            double r = std::max(std::abs(a.point(a.angle_start) - center), std::abs(a.point(a.angle_end) - center));
            const cplx d = a.center - center;
            if (d == cplx{}) return a.radius;
            if (a.contains_angle(std::arg(d))) r = std::max(r, std::abs(d) + a.radius);
            return r;
          },
          [&](const Polyline& p) {
            double r = 0.0;
            for (const cplx& v : p.vertices) r = std::max(r, std::abs(v - center));
            return r;
          },
          [&](const PointSet& ps) {
            double r = 0.0;
            for (const cplx& v : ps.points) r = std::max(r, std::abs(v - center));
            return r;
          },
          [&](const CantorProduct& cp) {
            double r = 0.0;
            for (double x : {cp.spans().front().lo, cp.spans().back().hi}) {
              for (double y : {cp.y_lo, cp.y_hi}) r = std::max(r, std::abs(cp.to_global(x, y) - center));
            }
            return r;
          },
      },
      set.shape());
}

/// Rounding noise of distance(K, z). Sample points of K are themselves
/// rounded, so distances below this do not separate z from K.
inline double distance_floor(const CompactSet& set, cplx z) {
  return 32.0 * std::numeric_limits<double>::epsilon() * (std::abs(z) + bounding_radius(set));
}

// ---------------------------------------------------------------------------
// discretize

namespace detail {

inline std::size_t pieces(double length, double h) {
  if (length <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(length / (2.0 * h)));
}

inline void check_cap(double required, std::size_t cap) {
  if (required > static_cast<double>(cap)) {
    throw BudgetExceeded(required >= 1.8e19 ? std::numeric_limits<std::size_t>::max()
                                            : static_cast<std::size_t>(required),
                         cap);
  }
}

}  // namespace detail

/// Samples on K with covering radius at most h_target. Curves are split by
/// arclength; Cantor rectangles get a lattice, Cantor edges a vertical split.
inline SampleGrid discretize(const CompactSet& set, double h_target, std::size_t cap = default_sample_cap) {
  if (!(h_target > 0.0)) throw InvalidArgument("discretize needs h_target > 0");
  SampleGrid grid{{}, 0.0, set};
  auto& pts = grid.points;
  std::visit(
      detail::overloaded{
          [&](const Segment& s) {
            const double len = std::abs(s.b - s.a);
            const std::size_t n = std::max<std::size_t>(1, detail::pieces(len, h_target));
            detail::check_cap(static_cast<double>(n) + 1.0, cap);
            pts.reserve(n + 1);
            for (std::size_t j = 0; j <= n; ++j) pts.push_back(s.a + (s.b - s.a) * (double(j) / double(n)));
            pts.back() = s.b;
            grid.covering_radius = len / (2.0 * double(n));
          },
          [&](const Arc& a) {
            const double len = a.radius * a.span();
            const std::size_t n = std::max<std::size_t>(1, detail::pieces(len, h_target));
            detail::check_cap(static_cast<double>(n) + 1.0, cap);
            pts.reserve(n + 1);
            for (std::size_t j = 0; j <= n; ++j) pts.push_back(a.point(a.angle_start + a.span() * double(j) / double(n)));
            grid.covering_radius = len / (2.0 * double(n));
          },
          [&](const Polyline& p) {
            double required = 1.0;
            for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
              required += double(std::max<std::size_t>(1, detail::pieces(std::abs(p.vertices[i + 1] - p.vertices[i]), h_target)));
            }
            detail::check_cap(required, cap);
            for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
              const cplx a = p.vertices[i];
              const cplx b = p.vertices[i + 1];
              const double len = std::abs(b - a);
              const std::size_t n = std::max<std::size_t>(1, detail::pieces(len, h_target));
              for (std::size_t j = 0; j < n; ++j) pts.push_back(a + (b - a) * (double(j) / double(n)));
              grid.covering_radius = std::max(grid.covering_radius, len / (2.0 * double(n)));
            }
            pts.push_back(p.vertices.back());
          },
          [&](const PointSet& ps) {
            detail::check_cap(double(ps.points.size()), cap);
            pts = ps.points;
            grid.covering_radius = 0.0;
          },
          [&](const CantorProduct& cp) {
            const double height = cp.y_hi - cp.y_lo;
            if (cp.fibers == FiberMode::edges) {
              const std::size_t ny = detail::pieces(height * cp.scale, h_target);
              double required = 0.0;
              for (const Interval& iv : cp.spans()) required += (iv.lo == iv.hi ? 1.0 : 2.0) * double(ny + 1);
              detail::check_cap(required, cap);
              pts.reserve(static_cast<std::size_t>(required));
              for (const Interval& iv : cp.spans()) {
                const int sides = iv.lo == iv.hi ? 1 : 2;
                for (int side = 0; side < sides; ++side) {
                  const double x = side == 0 ? iv.lo : iv.hi;
                  for (std::size_t j = 0; j <= ny; ++j) {
                    const double y = ny == 0 ? cp.y_lo : cp.y_lo + height * double(j) / double(ny);
                    pts.push_back(cp.to_global(x, y));
                  }
                }
              }
              grid.covering_radius = ny == 0 ? 0.0 : cp.scale * height / (2.0 * double(ny));
              return;
            }
            // Lattice with spacings sx, sy has covering radius hypot(sx, sy)/2.
            const double step = std::sqrt(2.0) * h_target;
            const auto count = [&](double extent) {
              return extent <= 0.0 ? std::size_t{0} : static_cast<std::size_t>(std::ceil(extent * cp.scale / step));
            };
            const std::size_t ny = count(height);
            double required = 0.0;
            for (const Interval& iv : cp.spans()) required += double(count(iv.length()) + 1) * double(ny + 1);
            detail::check_cap(required, cap);
            pts.reserve(static_cast<std::size_t>(required));
            for (const Interval& iv : cp.spans()) {
              const std::size_t nx = count(iv.length());
              for (std::size_t i = 0; i <= nx; ++i) {
                const double x = nx == 0 ? iv.lo : (i == nx ? iv.hi : iv.lo + iv.length() * double(i) / double(nx));
                for (std::size_t j = 0; j <= ny; ++j) {
                  const double y = ny == 0 ? cp.y_lo : (j == ny ? cp.y_hi : cp.y_lo + height * double(j) / double(ny));
                  pts.push_back(cp.to_global(x, y));
                }
              }
              const double sx = nx == 0 ? 0.0 : iv.length() / double(nx);
              const double sy = ny == 0 ? 0.0 : height / double(ny);
              grid.covering_radius = std::max(grid.covering_radius, cp.scale * std::hypot(sx, sy) / 2.0);
            }
          },
      },
      set.shape());
  return grid;
}

// ---------------------------------------------------------------------------
// nearest_exterior

namespace detail {

/// Outward unit direction at the closest point of [a, b] to z.
inline cplx segment_normal(cplx a, cplx b, cplx z) {
  const double t = segment_foot(a, b, z);
  const cplx foot = a + t * (b - a);
  const cplx off = z - foot;
  if (std::abs(off) > 0.0 && (t == 0.0 || t == 1.0)) return off / std::abs(off);
  cplx n = cplx(0.0, 1.0) * (b - a) / std::abs(b - a);
  if ((std::conj(n) * off).real() < 0.0) n = -n;
  return n;
}

/// First-choice exterior candidates: exact normal directions for curves,
/// shortest exits for Cantor rectangles.
inline std::vector<cplx> normal_candidates(const CompactSet& set, cplx z, double delta) {
  std::vector<cplx> out;
  std::visit(
      overloaded{
          [&](const Segment& s) { out.push_back(z + delta * segment_normal(s.a, s.b, z)); },
          [&](const Arc& a) {
            const cplx d = z - a.center;
            if (std::abs(d) == 0.0) return;
            const cplx dir = d / std::abs(d);
            out.push_back(z + delta * dir);
            out.push_back(z - delta * dir);
          },
          [&](const Polyline& p) {
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
              const double d = segment_distance(p.vertices[i], p.vertices[i + 1], z);
              if (d < best_d) best_d = d, best = i;
            }
            const cplx n = segment_normal(p.vertices[best], p.vertices[best + 1], z);
            out.push_back(z + delta * n);
            out.push_back(z - delta * n);
          },
          [&](const PointSet& ps) {
            cplx nearest = ps.points.front();
            for (const cplx& q : ps.points) {
              if (std::abs(z - q) < std::abs(z - nearest)) nearest = q;
            }
            const cplx off = z - nearest;
            out.push_back(z + delta * (std::abs(off) > 0.0 ? off / std::abs(off) : cplx(1.0, 0.0)));
          },
          [&](const CantorProduct& cp) {
            const cplx u = cp.to_local(z);
            const double x = u.real();
            const double y = u.imag();
            const double reach = delta / cp.scale;
            const auto& spans = cp.spans();
            const std::size_t up = interval_upper(spans, x);
            if (cp.fibers == FiberMode::edges) {
              out.push_back(cp.to_global(x + reach, y));
              out.push_back(cp.to_global(x - reach, y));
              return;
            }
            if (up == 0 || x > spans[up - 1].hi) return;
            const std::size_t k = up - 1;
            const Interval& iv = spans[k];
            const double inf = std::numeric_limits<double>::infinity();
            const double gap_left = k == 0 ? inf : iv.lo - spans[k - 1].hi;
            const double gap_right = k + 1 == spans.size() ? inf : spans[k + 1].lo - iv.hi;
            const auto exit = [&](double depth, double room) { return std::min(room / 2.0, reach - depth); };
            if (const double e = exit(x - iv.lo, gap_left); e > 0.0) out.push_back(cp.to_global(iv.lo - e, y));
            if (const double e = exit(iv.hi - x, gap_right); e > 0.0) out.push_back(cp.to_global(iv.hi + e, y));
            if (const double e = exit(cp.y_hi - y, inf); e > 0.0) out.push_back(cp.to_global(x, cp.y_hi + e));
            if (const double e = exit(y - cp.y_lo, inf); e > 0.0) out.push_back(cp.to_global(x, cp.y_lo - e));
          },
      },
      set.shape());
  return out;
}

}  // namespace detail

/// A point within delta of z that lies strictly outside K, verified by
/// distance(K, w) >= max(delta * 1e-6, 2 * distance_floor), with
/// |w - z| <= delta up to the rounding of z. Among the probes the one farthest
/// from K wins. Returns z itself when it is already at least delta from K.
inline cplx nearest_exterior(const CompactSet& set, cplx z, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidArgument("nearest_exterior needs delta > 0");
  const double margin = std::max(delta * 1e-6, 2.0 * distance_floor(set, z));
  if (distance(set, z) >= std::max(delta, margin)) return z;

  // z itself, the normal candidates and a ring of probes at radius delta.
  constexpr int directions = 16;
  const double reach = delta + 4.0 * std::numeric_limits<double>::epsilon() * (std::abs(z) + delta);
  std::vector<cplx> candidates = detail::normal_candidates(set, z, delta);
  candidates.push_back(z);
  for (int k = 0; k < directions; ++k) candidates.push_back(z + std::polar(delta, two_pi * k / directions));
  cplx best = z;
  double best_d = -1.0;
  for (const cplx& w : candidates) {
    if (std::abs(w - z) > reach) continue;
    const double d = distance(set, w);
    if (d >= margin && d > best_d) best = w, best_d = d;
  }
  if (best_d >= 0.0) return best;

  for (double radius = delta / 2.0; radius >= margin; radius /= 2.0) {
    for (int k = 0; k < directions; ++k) {
      const cplx w = z + std::polar(radius, two_pi * k / directions);
      const double d = distance(set, w);
      if (d >= margin && d > best_d) best = w, best_d = d;
    }
    if (best_d >= 0.0) return best;
  }
  throw ResolutionExhausted("no exterior point within delta of the probe");
}

// ---------------------------------------------------------------------------
// fat Cantor (Smith-Volterra) generator

/// Step n removes the open middle interval of length 4^-n from each of the
/// 2^(n-1) current intervals.
inline std::vector<Interval> fat_cantor(int depth) {
  if (depth < 0 || depth > 30) throw InvalidArgument("fat_cantor depth must be in [0, 30]");
  // 2^depth intervals are materialized, so the sample cap also bounds depth.
  detail::check_cap(std::ldexp(1.0, depth), default_sample_cap);
  std::vector<Interval> current{{0.0, 1.0}};
  for (int n = 1; n <= depth; ++n) {
    const double half_gap = std::ldexp(1.0, -2 * n - 1);
    std::vector<Interval> next;
    next.reserve(current.size() * 2);
    for (const Interval& iv : current) {
      const double mid = 0.5 * (iv.lo + iv.hi);
      next.push_back({iv.lo, mid - half_gap});
      next.push_back({mid + half_gap, iv.hi});
    }
    current = std::move(next);
  }
  return current;
}

inline double total_length(const std::vector<Interval>& intervals) {
  double sum = 0.0;
  for (const Interval& iv : intervals) sum += iv.length();
  return sum;
}

}  // namespace striplab
