#pragma once

// Riemann zeta by Euler-Maclaurin summation:
//
//   zeta(s) = sum_{n<N} n^-s + N^(1-s)/(s-1) + N^-s/2
//           + sum_{k=1..Kb} B_2k/(2k)! * s(s+1)...(s+2k-2) * N^(-s-2k+1)
//
// with N = max(min_terms, ceil(terms_per_unit_t * |Im s|)). The error
// estimate is twice the first omitted correction term.

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "striplab/error.hpp"
#include "striplab/geometry.hpp"

namespace striplab {

struct ZetaParams {
  double terms_per_unit_t = 2.0;
  int min_terms = 20;
  int bernoulli_terms = 12;

  void validate() const {
    if (!(terms_per_unit_t > 0.0) || !std::isfinite(terms_per_unit_t)) {
      throw InvalidArgument("terms_per_unit_t must be positive");
    }
    if (min_terms < 2) throw InvalidArgument("min_terms must be at least 2");
    if (bernoulli_terms < 1 || bernoulli_terms > 30) throw InvalidArgument("bernoulli_terms must be in [1, 30]");
  }

  ZetaParams quadrupled() const { return {terms_per_unit_t * 4.0, min_terms * 4, std::min(30, bernoulli_terms * 4)}; }
};

struct ZetaValue {
  cplx value;
  double error_estimate = 0.0;
};

inline constexpr double zeta_precision_limit = 1e-6;
inline constexpr double zeta_max_height = 1e8;

namespace detail {

inline constexpr int bernoulli_capacity = 31;  // one past the largest Kb, for the error term

struct BernoulliData {
  std::vector<double> even;       // B_2, B_4, ..., B_62
  std::vector<double> em_ratio;   // B_2k/(2k)! divided by B_2(k-1)/(2k-2)!, k >= 2
  double em_first = 0.0;          // B_2/2!
};

inline BernoulliData build_bernoulli() {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;
  const int top = 2 * bernoulli_capacity;
  std::vector<cpp_rational> b(top + 1);
  b[0] = 1;
  // sum_{j=0}^{m} C(m+1, j) B_j = 0
  for (int m = 1; m <= top; ++m) {
    cpp_rational acc = 0;
    cpp_int binom = 1;  // C(m+1, 0)
    for (int j = 0; j < m; ++j) {
      acc += cpp_rational(binom) * b[j];
      binom = binom * (m + 1 - j) / (j + 1);
    }
    b[m] = -acc / cpp_rational(m + 1);
  }
  BernoulliData out;
  cpp_int factorial = 1;
  std::vector<cpp_rational> em;
  for (int k = 1; k <= bernoulli_capacity; ++k) {
    factorial *= (2 * k - 1) * (2 * k);
    out.even.push_back(b[2 * k].convert_to<double>());
    em.push_back(b[2 * k] / cpp_rational(factorial));
  }
  out.em_first = em[0].convert_to<double>();
  for (int k = 1; k < bernoulli_capacity; ++k) out.em_ratio.push_back((em[k] / em[k - 1]).convert_to<double>());
  return out;
}

inline const BernoulliData& bernoulli_data() {
  static const BernoulliData data = build_bernoulli();
  return data;
}

inline constexpr long double two_pi_l = 6.283185307179586476925286766559005768L;

/// x mod 2*pi into (-pi, pi], carried out in extended precision.
inline double reduce_phase(long double x) { return static_cast<double>(x - two_pi_l * std::nearbyint(x / two_pi_l)); }

/// n^-s given log n in extended precision.
inline cplx power_term(long double log_n, double sigma, long double height) {
  return std::polar(std::exp(-sigma * static_cast<double>(log_n)), -reduce_phase(height * log_n));
}

inline std::size_t term_count(double height, const ZetaParams& params) {
  const double n = std::ceil(params.terms_per_unit_t * std::abs(height));
  return std::max<std::size_t>(static_cast<std::size_t>(params.min_terms), static_cast<std::size_t>(n));
}

/// Integral, half-term and Bernoulli corrections at cutoff N. `n_pow` is N^-s.
inline ZetaValue em_tail(cplx s, std::size_t N, cplx n_pow, int kb) {
  const auto& bern = bernoulli_data();
  const double n = static_cast<double>(N);
  cplx value = n * n_pow / (s - 1.0) + 0.5 * n_pow;
  // term_k = B_2k/(2k)! * poch_k * N^(-s-2k+1), advanced by ratios to stay in range.
  cplx term = bern.em_first * s * n_pow / n;
  const double inv_n2 = 1.0 / (n * n);
  for (int k = 1; k <= kb; ++k) {
    value += term;
    const double twok = 2.0 * k;
    term *= bern.em_ratio[k - 1] * (s + (twok - 1.0)) * (s + twok) * inv_n2;
  }
  return {value, 2.0 * std::abs(term)};
}

inline void check_argument(cplx s) {
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) throw InvalidArgument("zeta argument must be finite");
  if (std::abs(s - 1.0) < 1e-12) throw PoleAtOne();
  if (!(s.real() > -1.0)) throw InvalidArgument("zeta supports Re(s) > -1 only");
  if (std::abs(s.imag()) > zeta_max_height) throw InvalidArgument("zeta supports |Im(s)| <= 1e8 only");
}

inline ZetaValue zeta_fixed_cutoff(cplx s, std::size_t N, int kb) {
  const double sigma = s.real();
  const long double height = s.imag();
  cplx sum{};
  for (std::size_t n = 1; n < N; ++n) sum += power_term(std::log(static_cast<long double>(n)), sigma, height);
  const cplx n_pow = power_term(std::log(static_cast<long double>(N)), sigma, height);
  ZetaValue tail = em_tail(s, N, n_pow, kb);
  return {sum + tail.value, tail.error_estimate};
}

}  // namespace detail

/// B_2, B_4, ..., B_2n for n <= 30, from the exact rational recurrence.
inline std::vector<double> bernoulli_table(int n) {
  if (n < 0 || n > 30) throw InvalidArgument("bernoulli_table supports n <= 30");
  const auto& even = detail::bernoulli_data().even;
  return {even.begin(), even.begin() + n};
}

/// Doubles the cutoff up to twice when the estimate exceeds 1e-6.
inline ZetaValue zeta_em(cplx s, const ZetaParams& params = {}) {
  params.validate();
  detail::check_argument(s);
  std::size_t N = detail::term_count(s.imag(), params);
  ZetaValue out;
  for (int attempt = 0; attempt < 3; ++attempt, N *= 2) {
    out = detail::zeta_fixed_cutoff(s, N, params.bernoulli_terms);
    if (out.error_estimate <= zeta_precision_limit) return out;
  }
  throw PrecisionExhausted(out.error_estimate);
}

/// zeta(z_i + i t) for a fixed point set and many shifts t. Points sharing a
/// real part share one Dirichlet loop (common cutoff, one n^-sigma per n);
/// equally spaced vertical groups advance the phase by a per-n rotation.
/// Immutable after construction and safe to call from several threads.
class ShiftedZeta {
 public:
  ShiftedZeta(std::vector<cplx> points, ZetaParams params, double t_max = 0.0)
      : points_(std::move(points)), params_(params) {
    params_.validate();
    double max_im = 0.0;
    for (const cplx& z : points_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InvalidArgument("zeta grid points must be finite");
      max_im = std::max(max_im, std::abs(z.imag()));
    }
    build_groups();
    const std::size_t want = detail::term_count(std::abs(t_max) + max_im, params_);
    table_size_ = std::min<std::size_t>(want, log_table_limit);
    log_.resize(table_size_);
    for (std::size_t n = 1; n < table_size_; ++n) log_[n] = std::log(static_cast<long double>(n));
    if (groups_.size() * table_size_ <= group_table_limit) {
      for (Group& g : groups_) {
        g.amplitude.resize(table_size_);
        for (std::size_t n = 1; n < table_size_; ++n) g.amplitude[n] = std::exp(-g.sigma * static_cast<double>(log_[n]));
        if (g.uniform) {
          g.rotation.resize(table_size_);
          for (std::size_t n = 1; n < table_size_; ++n) g.rotation[n] = std::polar(1.0, -detail::reduce_phase(g.spacing * log_[n]));
        }
      }
    }
  }

  const std::vector<cplx>& points() const { return points_; }
  const ZetaParams& params() const { return params_; }

  /// Throws PrecisionExhausted carrying the offending grid index.
  std::vector<ZetaValue> operator()(double t) const {
    std::vector<ZetaValue> out(points_.size());
    std::vector<cplx> acc;
    for (const Group& g : groups_) {
      double top = 0.0;
      for (double im : g.im) top = std::max(top, std::abs(t + im));
      const std::size_t N = detail::term_count(top, params_);
      const std::size_t G = g.index.size();
      acc.assign(G, cplx{});
      const long double base = static_cast<long double>(t) + static_cast<long double>(g.im.front());
      for (std::size_t n = 1; n < N; ++n) {
        const bool cached = n < table_size_;
        const long double ln = cached ? log_[n] : std::log(static_cast<long double>(n));
        const double amp = cached && !g.amplitude.empty() ? g.amplitude[n] : std::exp(-g.sigma * static_cast<double>(ln));
        if (g.uniform) {
          cplx e = std::polar(amp, -detail::reduce_phase(base * ln));
          const cplx rot = cached && !g.rotation.empty() ? g.rotation[n]
                                                         : std::polar(1.0, -detail::reduce_phase(g.spacing * ln));
          for (std::size_t j = 0; j < G; ++j) {
            acc[j] += e;
            e *= rot;
          }
        } else {
          for (std::size_t j = 0; j < G; ++j) {
            const long double h = static_cast<long double>(t) + static_cast<long double>(g.im[j]);
            acc[j] += std::polar(amp, -detail::reduce_phase(h * ln));
          }
        }
      }
      const long double lnN = std::log(static_cast<long double>(N));
      for (std::size_t j = 0; j < G; ++j) {
        const std::size_t idx = g.index[j];
        const cplx s(g.sigma, t + g.im[j]);
        detail::check_argument(s);
        const long double h = static_cast<long double>(t) + static_cast<long double>(g.im[j]);
        const ZetaValue tail = detail::em_tail(s, N, detail::power_term(lnN, g.sigma, h), params_.bernoulli_terms);
        out[idx] = {acc[j] + tail.value, tail.error_estimate};
        if (out[idx].error_estimate > zeta_precision_limit) {
          try {
            out[idx] = zeta_em(s, params_);
          } catch (const PrecisionExhausted& e) {
            throw PrecisionExhausted(e.error_estimate, idx);
          }
        }
      }
    }
    return out;
  }

 private:
  static constexpr std::size_t log_table_limit = 10'000'000;
  static constexpr std::size_t group_table_limit = 4'000'000;

  struct Group {
    double sigma = 0.0;
    std::vector<std::size_t> index;  // into points_, sorted by imaginary part
    std::vector<double> im;
    bool uniform = false;
    double spacing = 0.0;
    std::vector<double> amplitude;
    std::vector<cplx> rotation;
  };

  void build_groups() {
    std::vector<std::size_t> order(points_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (points_[a].real() != points_[b].real()) return points_[a].real() < points_[b].real();
      return points_[a].imag() < points_[b].imag();
    });
    for (std::size_t i : order) {
      if (groups_.empty() || groups_.back().sigma != points_[i].real()) {
        groups_.emplace_back();
        groups_.back().sigma = points_[i].real();
      }
      groups_.back().index.push_back(i);
      groups_.back().im.push_back(points_[i].imag());
    }
    for (Group& g : groups_) {
      const std::size_t G = g.im.size();
      if (G < 3) continue;
      g.spacing = (g.im.back() - g.im.front()) / double(G - 1);
      if (!(g.spacing > 0.0)) continue;
      bool uniform = true;
      for (std::size_t j = 0; j < G && uniform; ++j) {
        const double expect = g.im.front() + g.spacing * double(j);
        uniform = std::abs(g.im[j] - expect) <= 1e-12 * std::max(1.0, std::abs(expect));
      }
      g.uniform = uniform;
    }
  }

  std::vector<cplx> points_;
  ZetaParams params_;
  std::vector<Group> groups_;
  std::size_t table_size_ = 0;
  std::vector<long double> log_;
};

inline std::vector<ZetaValue> zeta_shifted_grid(const SampleGrid& grid, double t, const ZetaParams& params = {}) {
  return ShiftedZeta(grid.points, params, t)(t);
}

}  // namespace striplab
