#pragma once

// Growth of entire functions: order and type from Maclaurin coefficients,
// mean type from arc integrals of log|f| in a half-plane.
//
// Coefficients are held as (log|a_n|, arg a_n). The interesting sequences
// (1/n!, 2^n/n!, 1/Gamma(n/2+1)) underflow a double long before n = 400.

#include <algorithm>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "warpband/error.hpp"
#include "warpband/grid.hpp"

namespace warpband::entire {

inline constexpr double euler_e = 2.71828182845904523536;
inline constexpr std::size_t min_series_length = 8;

/// Maclaurin coefficients a_0..a_{n_max}.
///
/// A *series* is a truncation of an infinite expansion and needs
/// n_max >= 8 so the tail window [n_max/2, n_max] is populated. An *exact
/// polynomial* has finitely many nonzero terms by construction and has order 0.
class CoefficientSequence {
 public:
  static CoefficientSequence from_values(std::span<const cplx> values) {
    auto [log_abs, arg] = split(values);
    return CoefficientSequence(std::move(log_abs), std::move(arg), false);
  }

  static CoefficientSequence from_values(std::initializer_list<cplx> values) {
    return from_values(std::span<const cplx>(values.begin(), values.size()));
  }

  /// log_abs[n] = log|a_n|; -inf marks a zero coefficient. Phases default to 0.
  static CoefficientSequence from_log_abs(std::vector<double> log_abs, std::vector<double> arg = {}) {
    if (arg.empty()) arg.assign(log_abs.size(), 0.0);
    if (arg.size() != log_abs.size()) fail(Errc::FormatError, "phase and magnitude lengths differ");
    return CoefficientSequence(std::move(log_abs), std::move(arg), false);
  }

  static CoefficientSequence polynomial(std::span<const cplx> values) {
    auto [log_abs, arg] = split(values);
    return CoefficientSequence(std::move(log_abs), std::move(arg), true);
  }

  static CoefficientSequence polynomial(std::initializer_list<cplx> values) {
    return polynomial(std::span<const cplx>(values.begin(), values.size()));
  }

  std::size_t n_max() const { return log_abs_.size() - 1; }
  bool exact_polynomial() const { return exact_polynomial_; }
  bool is_zero(std::size_t n) const { return !std::isfinite(log_abs_[n]); }
  double log_abs(std::size_t n) const { return log_abs_[n]; }
  double arg(std::size_t n) const { return arg_[n]; }
  cplx value(std::size_t n) const { return is_zero(n) ? cplx{} : std::polar(std::exp(log_abs_[n]), arg_[n]); }

  /// Tail window [n_max/2, n_max] standing in for the limsup.
  std::pair<std::size_t, std::size_t> tail_window() const { return {n_max() / 2, n_max()}; }

 private:
  // NaN and inf magnitudes pass through so the constructor rejects them.
  static std::pair<std::vector<double>, std::vector<double>> split(std::span<const cplx> values) {
    std::vector<double> log_abs(values.size());
    std::vector<double> arg(values.size());
    for (std::size_t n = 0; n < values.size(); ++n) {
      const double m = std::abs(values[n]);
      if (!std::isfinite(m))
        log_abs[n] = std::isnan(m) ? m : std::numeric_limits<double>::infinity();
      else
        log_abs[n] = m > 0.0 ? std::log(m) : -std::numeric_limits<double>::infinity();
      arg[n] = m > 0.0 && std::isfinite(m) ? std::arg(values[n]) : 0.0;
    }
    return {std::move(log_abs), std::move(arg)};
  }

  CoefficientSequence(std::vector<double> log_abs, std::vector<double> arg, bool exact_polynomial)
      : log_abs_(std::move(log_abs)), arg_(std::move(arg)), exact_polynomial_(exact_polynomial) {
    if (log_abs_.empty()) fail(Errc::AllZero, "empty coefficient list");
    for (double v : log_abs_)
      if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
        fail(Errc::NonFinite, "coefficient magnitude is not finite");
    const bool any = std::any_of(log_abs_.begin(), log_abs_.end(), [](double v) { return std::isfinite(v); });
    if (!any) fail(Errc::AllZero, "every coefficient is zero");
    if (!exact_polynomial_ && n_max() < min_series_length)
      fail(Errc::WindowEmpty, "series needs n_max >= 8 for a nonempty tail window");
  }

  std::vector<double> log_abs_;
  std::vector<double> arg_;
  bool exact_polynomial_;
};

struct GrowthEstimate {
  double order_rho = 0.0;
  double type_sigma = 0.0;  // +inf when the type is infinite
  std::size_t window_lo = 0;
  std::size_t window_hi = 0;
  double raw_order_ratio = 0.0;  // max of n log n / log(1/|a_n|) over the window
  std::optional<double> mean_type_upper;
  std::optional<double> mean_type_lower;

  bool type_infinite() const { return std::isinf(type_sigma); }
};

namespace detail {

inline std::vector<std::size_t> nonzero_tail(const CoefficientSequence& c) {
  const auto [lo, hi] = c.tail_window();
  std::vector<std::size_t> idx;
  for (std::size_t n = std::max<std::size_t>(lo, 2); n <= hi; ++n)
    if (!c.is_zero(n)) idx.push_back(n);
  return idx;
}

/// Vertices of the least concave majorant of n -> log|a_n| (nonzero
/// coefficients only). Dips from cancellation between coefficients, such as
/// an even/odd zig-zag, fall below the hull; concave sequences such as 1/n!
/// keep every point.
inline std::vector<std::size_t> concave_vertices(const CoefficientSequence& c) {
  std::vector<std::size_t> hull;
  for (std::size_t n = 0; n <= c.n_max(); ++n) {
    if (c.is_zero(n)) continue;
    while (hull.size() >= 2) {
      const std::size_t p = hull[hull.size() - 2], q = hull.back();
      const double lhs = (c.log_abs(q) - c.log_abs(p)) * static_cast<double>(n - p);
      const double rhs = (c.log_abs(n) - c.log_abs(p)) * static_cast<double>(q - p);
      if (lhs > rhs) break;
      hull.pop_back();
    }
    hull.push_back(n);
  }
  return hull;
}

/// Tail indices the order fit uses: hull vertices in the window, minus the
/// last coefficient (always a vertex, whatever its size). Falls back to every
/// nonzero tail coefficient when fewer than two vertices remain.
inline std::vector<std::size_t> order_fit_indices(const CoefficientSequence& c) {
  const auto [lo, hi] = c.tail_window();
  const auto hull = concave_vertices(c);
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k + 1 < hull.size(); ++k)
    if (hull[k] >= std::max<std::size_t>(lo, 2) && hull[k] <= hi) idx.push_back(hull[k]);
  return idx.size() >= 2 ? idx : nonzero_tail(c);
}

}  // namespace detail

/// Raw limsup ratio n log n / log(1/|a_n|), maximised over the tail window.
/// Converges like 1/log n, so it is reported but not used as the estimate.
inline double raw_order_ratio(const CoefficientSequence& c) {
  double best = 0.0;
  for (std::size_t n : detail::nonzero_tail(c)) {
    const double denom = -c.log_abs(n);
    if (denom <= 0.0) return std::numeric_limits<double>::infinity();
    best = std::max(best, static_cast<double>(n) * std::log(static_cast<double>(n)) / denom);
  }
  return best;
}

/// Order rho of the entire function with these Maclaurin coefficients.
///
/// For order rho and type sigma the coefficients behave like
/// K n^beta (e sigma rho / n)^{n/rho}, so y_n = log(1/|a_n|)/n is
/// (1/rho) log n + C + (D log n + E)/n. A least-squares fit of that model over
/// the nonzero coefficients in [n_max/2, n_max] gives rho = 1/slope. Returns
/// +inf when the slope is not positive (coefficients do not decay
/// superexponentially).
///
/// Only vertices of the concave majorant of log|a_n| enter the fit: order is a
/// limsup, and the low branch of an irregular sequence (Maclaurin
/// coefficients of a generic bandlimited signal, say) otherwise drags the
/// slope around.
inline double estimate_order(const CoefficientSequence& c) {
  if (c.exact_polynomial()) return 0.0;
  if (detail::nonzero_tail(c).size() < 2)
    fail(Errc::WindowEmpty, "fewer than two nonzero coefficients in the tail window");
  const auto idx = detail::order_fit_indices(c);

  const Eigen::Index rows = static_cast<Eigen::Index>(idx.size());
  const Eigen::Index cols = idx.size() >= 8 ? 4 : 2;
  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double n = static_cast<double>(idx[static_cast<std::size_t>(i)]);
    const double ln = std::log(n);
    design(i, 0) = ln;
    design(i, 1) = 1.0;
    if (cols == 4) {
      design(i, 2) = ln / n;
      design(i, 3) = 1.0 / n;
    }
    y(i) = -c.log_abs(idx[static_cast<std::size_t>(i)]) / n;
  }
  const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(y);
  const double slope = beta(0);
  if (!(slope > 0.0)) return std::numeric_limits<double>::infinity();
  return 1.0 / slope;
}

/// Type sigma = (1 / (rho e)) limsup n |a_n|^{rho/n}, limsup replaced by the
/// maximum over the tail window.
inline double estimate_type(const CoefficientSequence& c, double rho) {
  if (!(rho > 0.0)) fail(Errc::NonpositiveOrder, "type needs a positive order");
  if (c.exact_polynomial()) return 0.0;
  const auto idx = detail::nonzero_tail(c);
  if (idx.empty()) fail(Errc::WindowEmpty, "no nonzero coefficient in the tail window");
  double best_log = -std::numeric_limits<double>::infinity();
  for (std::size_t n : idx) {
    const double nd = static_cast<double>(n);
    best_log = std::max(best_log, std::log(nd) + rho / nd * c.log_abs(n));
  }
  return std::exp(best_log) / (rho * euler_e);
}

/// {a_n s^n}. Feeds the scale law: order unchanged, type multiplied by |s|^rho.
inline CoefficientSequence scale_coefficients(const CoefficientSequence& c, cplx scale) {
  const double log_s = std::log(std::abs(scale));
  const double arg_s = std::arg(scale);
  std::vector<double> log_abs(c.n_max() + 1);
  std::vector<double> arg(c.n_max() + 1);
  for (std::size_t n = 0; n <= c.n_max(); ++n) {
    const double nd = static_cast<double>(n);
    if (c.is_zero(n) || (scale == cplx{} && n > 0)) {
      log_abs[n] = -std::numeric_limits<double>::infinity();
      arg[n] = 0.0;
    } else {
      log_abs[n] = n == 0 ? c.log_abs(0) : c.log_abs(n) + nd * log_s;
      arg[n] = n == 0 ? c.arg(0) : std::remainder(c.arg(n) + nd * arg_s, two_pi);
    }
  }
  if (c.exact_polynomial()) {
    std::vector<cplx> values(log_abs.size());
    for (std::size_t n = 0; n < values.size(); ++n)
      values[n] = std::isfinite(log_abs[n]) ? std::polar(std::exp(log_abs[n]), arg[n]) : cplx{};
    return CoefficientSequence::polynomial(values);
  }
  return CoefficientSequence::from_log_abs(std::move(log_abs), std::move(arg));
}

/// Order, and type at `known_order` when given (else at the estimated order).
inline GrowthEstimate estimate_growth(const CoefficientSequence& c, std::optional<double> known_order = {}) {
  GrowthEstimate g;
  const auto [lo, hi] = c.tail_window();
  g.window_lo = lo;
  g.window_hi = hi;
  g.order_rho = estimate_order(c);
  g.raw_order_ratio = c.exact_polynomial() ? 0.0 : raw_order_ratio(c);
  const double rho = known_order.value_or(g.order_rho);
  if (c.exact_polynomial() || rho == 0.0)
    g.type_sigma = 0.0;
  else if (std::isinf(rho))
    g.type_sigma = std::numeric_limits<double>::infinity();
  else
    g.type_sigma = estimate_type(c, rho);
  return g;
}

// ---------------------------------------------------------------------------
// Mean type
// ---------------------------------------------------------------------------

enum class HalfPlane { upper, lower };

struct MeanTypeEstimate {
  double value = 0.0;        // estimate at the largest radius
  double convergence = 0.0;  // |h(r_last) - h(r_prev)|, 0 for a single radius
  std::vector<double> radii;
  std::vector<double> per_radius;
};

inline constexpr std::size_t mean_type_intervals = 2048;
inline constexpr double log_modulus_floor = -1.0e3;
inline const std::vector<double> default_mean_type_radii{25.0, 50.0, 100.0};

/// (2 / (pi r)) * int_0^pi log|f(r e^{+-i theta})| sin(theta) d theta by
/// composite Simpson; the lower half-plane uses e^{-i theta}.
template <class Fn>
double mean_type_at_radius(const Fn& f, HalfPlane half_plane, double r) {
  const std::size_t m = mean_type_intervals;
  const double h = pi / static_cast<double>(m);
  const double sign = half_plane == HalfPlane::upper ? 1.0 : -1.0;
  double sum = 0.0;
  for (std::size_t k = 0; k <= m; ++k) {
    const double theta = static_cast<double>(k) * h;
    const double s = std::sin(theta);
    if (k == 0 || k == m) continue;  // sin(theta) = 0 kills the endpoint terms
    const cplx z = std::polar(r, sign * theta);
    const cplx value = f(z);
    const double modulus = std::abs(value);
    if (!std::isfinite(modulus)) fail(Errc::NonFinite, "evaluator overflowed on the arc; shrink the radii");
    const double logm = modulus > 0.0 ? std::max(std::log(modulus), log_modulus_floor) : log_modulus_floor;
    const double weight = (k % 2 == 1) ? 4.0 : 2.0;
    sum += weight * logm * s;
  }
  const double integral = sum * h / 3.0;
  return 2.0 / (pi * r) * integral;
}

template <class Fn>
MeanTypeEstimate mean_type(const Fn& f, HalfPlane half_plane,
                           std::span<const double> radii = default_mean_type_radii) {
  if (radii.empty()) fail(Errc::InvalidGrid, "mean_type needs at least one radius");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) fail(Errc::InvalidGrid, "radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) fail(Errc::InvalidGrid, "radii must increase");
  }
  MeanTypeEstimate est;
  est.radii.assign(radii.begin(), radii.end());
  for (double r : radii) est.per_radius.push_back(mean_type_at_radius(f, half_plane, r));
  est.value = est.per_radius.back();
  if (est.per_radius.size() > 1)
    est.convergence = std::abs(est.per_radius.back() - est.per_radius[est.per_radius.size() - 2]);
  return est;
}

}  // namespace warpband::entire
