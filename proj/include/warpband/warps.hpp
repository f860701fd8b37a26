#pragma once

// Warp maps phi (real-coefficient polynomials, affine as the degree-1 case),
// their classification against Paley-Wiener invariance, and numerical
// certificates for the measure pull-back bound m(phi^-1(E)) <= c m(E).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "warpband/error.hpp"
#include "warpband/grid.hpp"
#include "warpband/paley_wiener.hpp"

namespace warpband::warps {

enum class WarpKind { affine, polynomial };

inline const char* to_string(WarpKind k) { return k == WarpKind::affine ? "affine" : "polynomial"; }

/// phi(z) = sum c_k z^k with real c_k, ascending degree, degree >= 1.
class Warp {
 public:
  /// phi(z) = c z + d.
  static Warp affine(double c, double d) {
    if (c == 0.0) fail(Errc::ConstantWarp, "affine warp needs c != 0");
    return Warp(WarpKind::affine, {d, c});
  }

  static Warp identity() { return affine(1.0, 0.0); }

  static Warp polynomial(std::vector<double> coefficients) {
    while (!coefficients.empty() && coefficients.back() == 0.0) coefficients.pop_back();
    if (coefficients.size() < 2) fail(Errc::ConstantWarp, "warp must be nonconstant");
    return Warp(WarpKind::polynomial, std::move(coefficients));
  }

  WarpKind kind() const { return kind_; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  std::size_t degree() const { return coeffs_.size() - 1; }
  bool is_affine() const { return degree() == 1; }
  double leading() const { return coeffs_.back(); }

  /// Dilation c for affine warps.
  double dilation() const { return coeffs_[1]; }

  double operator()(double x) const { return horner(coeffs_, x); }
  cplx operator()(cplx z) const {
    cplx acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  double derivative(double x) const { return horner(derivative_coeffs(coeffs_), x); }
  double second_derivative(double x) const { return horner(derivative_coeffs(derivative_coeffs(coeffs_)), x); }

  static double horner(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  static std::vector<double> derivative_coeffs(const std::vector<double>& c) {
    if (c.size() <= 1) return {0.0};
    std::vector<double> d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
    return d;
  }

 private:
  Warp(WarpKind kind, std::vector<double> coeffs) : kind_(kind), coeffs_(std::move(coeffs)) {
    for (double c : coeffs_)
      if (!std::isfinite(c)) fail(Errc::InvalidWarp, "warp coefficients must be finite reals");
  }

  WarpKind kind_;
  std::vector<double> coeffs_;
};

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

enum class WarpReason { affine_contractive, affine_expansive, non_affine };

inline const char* to_string(WarpReason r) {
  switch (r) {
    case WarpReason::affine_contractive: return "affine_contractive";
    case WarpReason::affine_expansive: return "affine_expansive";
    case WarpReason::non_affine: return "non_affine";
  }
  return "unknown";
}

struct WarpClassification {
  bool preserves_pw = false;
  std::optional<double> target_band_factor;  // |c| for affine warps
  WarpReason reason = WarpReason::non_affine;
};

/// Affine phi = cz + d maps B^2_a into B^2_{|c|a} and preserves B^2_a iff
/// 0 < |c| <= 1. Any other entire phi lands in no Paley-Wiener space.
inline WarpClassification classify(const Warp& w) {
  WarpClassification out;
  if (!w.is_affine()) return out;
  const double c = std::abs(w.dilation());
  out.target_band_factor = c;
  out.preserves_pw = c <= 1.0;
  out.reason = out.preserves_pw ? WarpReason::affine_contractive : WarpReason::affine_expansive;
  return out;
}

struct WeightedBand {
  pw::BandSpec target;
  Interval convolution_support;
};

/// Band of m * (f o phi) for phi = cz + d and a multiplier with spectral
/// support [r, s]: the product spectrum sits in [r - |c|a, s + |c|a] and
/// A = max(|r - |c|a|, |s + |c|a|).
inline WeightedBand weighted_target_band(pw::BandSpec band, double c, Interval multiplier_support) {
  if (c == 0.0) fail(Errc::ConstantWarp, "dilation must be nonzero");
  if (multiplier_support.lo > multiplier_support.hi) fail(Errc::EmptySupport, "multiplier support has r > s");
  const double spread = std::abs(c) * band.a;
  const Interval support{multiplier_support.lo - spread, multiplier_support.hi + spread};
  const double big_a = std::max(std::abs(support.lo), std::abs(support.hi));
  return {pw::BandSpec::make(big_a), support};
}

// ---------------------------------------------------------------------------
// Measure pull-back certificate
// ---------------------------------------------------------------------------

struct MeasureBoundReport {
  bool monotone = false;
  bool increasing = false;
  double inf_derivative = 0.0;  // inf over R of |phi'|
  std::optional<double> bound_c;
  bool mutual_abs_continuity = false;
  Interval search_window;
};

/// phi' = 3a x^2 + 2b x + c keeps one sign iff b^2 < 3ac.
inline bool cubic_criterion(double a, double b, double c) {
  if (a == 0.0) fail(Errc::DegenerateLeading, "cubic needs a nonzero leading coefficient");
  return b * b < 3.0 * a * c;
}

namespace detail {

inline double cauchy_root_bound(const std::vector<double>& c) {
  double m = 0.0;
  for (std::size_t k = 0; k + 1 < c.size(); ++k) m = std::max(m, std::abs(c[k] / c.back()));
  return 1.0 + m;
}

template <class F>
double bisect_root(F f, double lo, double hi) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  std::uintmax_t iters = 200;
  auto tol = [](double x, double y) { return std::abs(x - y) <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)); };
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (r.first + r.second);
}

inline MeasureBoundReport finish_report(MeasureBoundReport r) {
  if (r.monotone && r.inf_derivative > 0.0) {
    r.bound_c = 1.0 / r.inf_derivative;
    r.mutual_abs_continuity = true;
  }
  return r;
}

}  // namespace detail

inline const Interval default_probe_window{-50.0, 50.0};
inline constexpr double default_probe_spacing = 1e-3;

/// Monotonicity and inf |phi'| over the whole real line.
///
/// Degrees 1..3 are decided in closed form. For higher degrees phi' is
/// scanned on a grid over the probe window widened to the Cauchy bound of
/// the roots of phi''; outside that window phi' is monotone, so its infimum
/// in modulus is attained inside. Sign changes of phi'' are refined to the
/// critical points of phi' by bracketing.
inline MeasureBoundReport check_measure_bound(const Warp& w, Interval probe = default_probe_window,
                                              double spacing = default_probe_spacing) {
  if (!(spacing > 0.0) || !(probe.hi > probe.lo)) fail(Errc::InvalidGrid, "bad probe window or spacing");
  const auto& c = w.coefficients();
  MeasureBoundReport r;
  r.search_window = probe;
  switch (w.degree()) {
    case 1:
      r.monotone = true;
      r.increasing = c[1] > 0.0;
      r.inf_derivative = std::abs(c[1]);
      return detail::finish_report(r);
    case 2:
      r.monotone = false;
      r.inf_derivative = 0.0;
      return detail::finish_report(r);
    case 3: {
      const double a = c[3], b = c[2], cc = c[1];
      r.monotone = b * b <= 3.0 * a * cc;
      r.increasing = a > 0.0;
      r.inf_derivative = r.monotone ? std::abs(cc - b * b / (3.0 * a)) : 0.0;
      return detail::finish_report(r);
    }
    default: break;
  }

  // phi' has degree >= 3. Odd degree of phi' means opposite signs at +-inf.
  const auto d1 = Warp::derivative_coeffs(c);
  const auto d2 = Warp::derivative_coeffs(d1);
  if ((d1.size() - 1) % 2 == 1) {
    r.monotone = false;
    return detail::finish_report(r);
  }
  const double bound = detail::cauchy_root_bound(d2);
  Interval win{std::min(probe.lo, -bound), std::max(probe.hi, bound)};
  r.search_window = win;
  constexpr double max_points = 4.0e6;
  const double step = std::max(spacing, win.length() / max_points);
  const auto n = static_cast<std::size_t>(std::ceil(win.length() / step));

  auto p1 = [&](double x) { return Warp::horner(d1, x); };
  auto p2 = [&](double x) { return Warp::horner(d2, x); };
  const double lead_sign = d1.back() > 0.0 ? 1.0 : -1.0;
  bool sign_change = false;
  double inf_abs = std::numeric_limits<double>::infinity();
  double prev_x = win.lo;
  double prev_d2 = p2(prev_x);
  auto visit = [&](double x) {
    const double v = p1(x);
    if (v * lead_sign < 0.0) sign_change = true;
    inf_abs = std::min(inf_abs, std::abs(v));
  };
  visit(prev_x);
  for (std::size_t i = 1; i <= n; ++i) {
    const double x = std::min(win.hi, win.lo + static_cast<double>(i) * step);
    const double cur_d2 = p2(x);
    visit(x);
    if ((prev_d2 < 0.0) != (cur_d2 < 0.0)) visit(detail::bisect_root(p2, prev_x, x));
    prev_x = x;
    prev_d2 = cur_d2;
  }
  r.monotone = !sign_change;
  r.increasing = lead_sign > 0.0;
  r.inf_derivative = r.monotone ? inf_abs : 0.0;
  return detail::finish_report(r);
}

/// phi^{-1}([lo, hi]) for a strictly monotone warp, by root bracketing.
inline Interval preimage(const Warp& w, Interval e, bool increasing) {
  auto solve = [&](double target) {
    auto f = [&](double x) { return w(x) - target; };
    double lo = -1.0, hi = 1.0;
    auto below = [&](double x) { return increasing ? f(x) < 0.0 : f(x) > 0.0; };
    for (int i = 0; !below(lo); ++i) {
      if (i > 1000) fail(Errc::NonMonotoneWarp, "cannot bracket preimage");
      lo *= 2.0;
    }
    for (int i = 0; below(hi); ++i) {
      if (i > 1000) fail(Errc::NonMonotoneWarp, "cannot bracket preimage");
      hi *= 2.0;
    }
    return detail::bisect_root(f, lo, hi);
  };
  const double a = solve(e.lo);
  const double b = solve(e.hi);
  return increasing ? Interval{a, b} : Interval{b, a};
}

}  // namespace warpband::warps
