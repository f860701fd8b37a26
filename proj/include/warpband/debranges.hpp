#pragma once

// de Branges-Rovnyak spaces H(g): structure-function gate, the reproducing
// kernel (i/2)(g(z) conj g(w) - conj g(conj z) g(conj w)) / (pi (z - conj w)),
// the H(g) norm, the affine boundedness test |g(at+b)/g(t)| <= c and the
// pull-back check for d lambda = dt / |g(t)|^2.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "warpband/entire_analysis.hpp"
#include "warpband/error.hpp"
#include "warpband/grid.hpp"
#include "warpband/warps.hpp"

namespace warpband::dbr {

enum class StructureKind { exponential, poly_exp, custom };

inline const char* to_string(StructureKind k) {
  switch (k) {
    case StructureKind::exponential: return "exponential";
    case StructureKind::poly_exp: return "poly-exp";
    case StructureKind::custom: return "custom-unsupported";
  }
  return "unknown";
}

inline constexpr std::size_t dominance_samples = 200;
inline constexpr std::uint64_t dominance_seed = 0x5eedULL;

/// Entire g with |g(conj z)| < |g(z)| on the upper half-plane.
class StructureFunction {
 public:
  using Evaluator = std::function<cplx(cplx)>;

  /// g(z) = e^{-iaz}; H(g) = B^2_a.
  static StructureFunction exponential(double a) {
    if (!(a > 0.0)) fail(Errc::InadmissibleStructure, "exponential structure needs a > 0");
    return validated(StructureFunction(StructureKind::exponential, a, {}, {}, a));
  }

  /// g(z) = p(z) e^{-iaz}, p given by ascending coefficients.
  static StructureFunction poly_exp(std::vector<cplx> poly, double a) {
    while (!poly.empty() && poly.back() == cplx{}) poly.pop_back();
    if (poly.empty()) fail(Errc::InadmissibleStructure, "polynomial factor is zero");
    if (a < 0.0) fail(Errc::InadmissibleStructure, "exponential factor needs a >= 0");
    return validated(StructureFunction(StructureKind::poly_exp, a, std::move(poly), {}, a));
  }

  static StructureFunction custom(Evaluator g, std::optional<double> exponential_type = {}) {
    return validated(StructureFunction(StructureKind::custom, 0.0, {}, std::move(g), exponential_type));
  }

  cplx operator()(cplx z) const {
    switch (kind_) {
      case StructureKind::exponential: return std::exp(cplx{0.0, -a_} * z);
      case StructureKind::poly_exp: {
        cplx p{};
        for (auto it = poly_.rbegin(); it != poly_.rend(); ++it) p = p * z + *it;
        return p * std::exp(cplx{0.0, -a_} * z);
      }
      case StructureKind::custom: return custom_(z);
    }
    return {};
  }

  StructureKind kind() const { return kind_; }
  double a() const { return a_; }
  const std::vector<cplx>& poly() const { return poly_; }
  std::optional<double> exponential_type() const { return exponential_type_; }

  /// Degree of the polynomial factor (0 for pure exponentials).
  std::size_t poly_degree() const { return poly_.empty() ? 0 : poly_.size() - 1; }

 private:
  StructureFunction(StructureKind kind, double a, std::vector<cplx> poly, Evaluator custom,
                    std::optional<double> exponential_type)
      : kind_(kind), a_(a), poly_(std::move(poly)), custom_(std::move(custom)), exponential_type_(exponential_type) {}

  static StructureFunction validated(StructureFunction s) {
    std::mt19937_64 rng(dominance_seed);
    std::uniform_real_distribution<double> re(-10.0, 10.0);
    std::uniform_real_distribution<double> im(0.01, 10.0);
    for (std::size_t i = 0; i < dominance_samples; ++i) {
      const double x = re(rng);
      const double y = im(rng);
      const cplx z{x, y};
      if (!(std::abs(s(std::conj(z))) < std::abs(s(z))))
        fail(Errc::InadmissibleStructure, "dominance |g(conj z)| < |g(z)| fails at a sampled point");
    }
    const RealGrid probe = RealGrid::window(-100.0, 100.0, 0.05);
    for (std::size_t i = 0; i < probe.count; ++i)
      if (!(std::abs(s(cplx{probe.at(i), 0.0})) > 0.0))
        fail(Errc::InadmissibleStructure, "g vanishes on the real probe grid");
    return s;
  }

  StructureKind kind_;
  double a_;
  std::vector<cplx> poly_;
  Evaluator custom_;
  std::optional<double> exponential_type_;
};

// ---------------------------------------------------------------------------
// Kernel and norm
// ---------------------------------------------------------------------------

inline constexpr double kernel_singular_radius = 1e-6;
inline constexpr double kernel_fd_step = 1e-4;

inline cplx dbr_kernel(const StructureFunction& g, cplx z, cplx w) {
  const cplx wbar = std::conj(w);
  const cplx gw_conj = std::conj(g(w));
  const cplx g_wbar = g(wbar);
  auto numerator = [&](cplx zeta) { return g(zeta) * gw_conj - std::conj(g(std::conj(zeta))) * g_wbar; };
  const cplx d = z - wbar;
  cplx value;
  if (std::abs(d) < kernel_singular_radius) {
    const double h = kernel_fd_step;
    const cplx derivative = (numerator(wbar + h) - numerator(wbar - h)) / (2.0 * h);
    value = cplx{0.0, 1.0} / two_pi * derivative;
  } else {
    value = cplx{0.0, 0.5} * numerator(z) / (pi * d);
  }
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) fail(Errc::Overflow, "kernel overflowed");
  return value;
}

namespace detail {

// Trapezoid of samples over the index range [lo, hi].
inline double trapezoid(std::span<const double> v, std::size_t lo, std::size_t hi, double step) {
  if (hi <= lo) return 0.0;
  double s = 0.5 * (v[lo] + v[hi]);
  for (std::size_t i = lo + 1; i < hi; ++i) s += v[i];
  return s * step;
}

// Integrals over the full window and the nested windows of half, quarter and
// eighth width about the grid centre, innermost last.
inline std::array<double, 4> nested_integrals(std::span<const double> v, const RealGrid& grid) {
  std::array<double, 4> out{};
  const std::size_t n = grid.count;
  const std::size_t mid = (n - 1) / 2;
  std::size_t half = mid;
  for (std::size_t k = 0; k < 4; ++k) {
    out[k] = trapezoid(v, mid - std::min(half, mid), std::min(n - 1, mid + half), grid.step);
    half /= 2;
  }
  return out;
}

inline bool grows_without_flattening(const std::array<double, 4>& nested) {
  for (std::size_t k = 0; k < 3; ++k) {
    const double outer = nested[k];
    const double inner = nested[k + 1];
    if (inner <= 0.0) {
      if (outer <= 0.0) return false;
      continue;
    }
    if (outer / inner <= 1.05) return false;
  }
  return true;
}

}  // namespace detail

/// ||f||_{H(g)} = sqrt(int |f/g|^2 dt) over the grid window.
inline double hg_norm(const GridSamples& f, const StructureFunction& g) {
  if (f.values.size() != f.grid.count) fail(Errc::GridMismatch, "sample count differs from grid count");
  std::vector<double> q(f.values.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const cplx gv = g(cplx{f.grid.at(i), 0.0});
    if (std::abs(gv) == 0.0) fail(Errc::StructureZeroOnGrid, "g vanishes on the sample grid");
    q[i] = std::norm(f.values[i] / gv);
  }
  const auto nested = detail::nested_integrals(q, f.grid);
  if (detail::grows_without_flattening(nested)) fail(Errc::Diverging, "|f/g|^2 is not integrable on nested windows");
  return std::sqrt(nested[0]);
}

// ---------------------------------------------------------------------------
// Affine boundedness
// ---------------------------------------------------------------------------

inline const std::array<double, 3> boundedness_windows{25.0, 50.0, 100.0};

struct AffineBoundednessReport {
  bool bounded = false;
  double c_estimate = 0.0;
  std::array<double, 3> window_sups{};
  std::optional<double> asymptotic_limit;
};

inline RealGrid default_boundedness_probe() { return RealGrid::window(-100.0, 100.0, 0.01); }

/// sup_t |g(a t + b) / g(t)| over nested probe windows. Sufficient condition
/// for C_phi, phi = az + b, to be bounded on H(g); only reported, never used
/// to declare unboundedness.
inline AffineBoundednessReport affine_boundedness_test(const StructureFunction& g, double a, cplx b,
                                                       const RealGrid& probe = default_boundedness_probe()) {
  if (!(std::abs(a) > 0.0) || std::abs(a) > 1.0 || !std::isfinite(a))
    fail(Errc::HypothesisViolated, "affine coefficient must satisfy 0 < |a| <= 1");
  AffineBoundednessReport r;
  for (std::size_t i = 0; i < probe.count; ++i) {
    const double t = probe.at(i);
    const cplx denom = g(cplx{t, 0.0});
    const double ratio = std::abs(g(a * t + b)) / std::abs(denom);
    for (std::size_t w = 0; w < boundedness_windows.size(); ++w)
      if (std::abs(t) <= boundedness_windows[w]) r.window_sups[w] = std::max(r.window_sups[w], ratio);
  }
  if (g.kind() != StructureKind::custom) {
    const double tau = g.a();
    r.asymptotic_limit = std::pow(std::abs(a), static_cast<double>(g.poly_degree())) * std::exp(tau * b.imag());
  }
  const auto [lo, hi] = std::minmax_element(r.window_sups.begin(), r.window_sups.end());
  const bool finite = std::all_of(r.window_sups.begin(), r.window_sups.end(), [](double v) { return std::isfinite(v); });
  r.c_estimate = std::max(*hi, r.asymptotic_limit.value_or(0.0));
  r.bounded = finite && *lo > 0.0 && *hi <= 1.01 * *lo && std::isfinite(r.c_estimate);
  return r;
}

// ---------------------------------------------------------------------------
// The measure d lambda = dt / |g|^2
// ---------------------------------------------------------------------------

/// The measure dt/|g(t)|^2, admitted only when 1/g is square-integrable.
class DbrMeasure {
 public:
  static DbrMeasure make(const StructureFunction& g, const RealGrid& probe = RealGrid::window(-100.0, 100.0, 0.05),
                         double tolerance = 1e-12) {
    if (!(tolerance > 0.0)) fail(Errc::InvalidGrid, "quadrature tolerance must be positive");
    std::vector<double> w(probe.count);
    for (std::size_t i = 0; i < probe.count; ++i) w[i] = 1.0 / std::norm(g(cplx{probe.at(i), 0.0}));
    const auto nested = detail::nested_integrals(w, probe);
    if (detail::grows_without_flattening(nested) || !std::isfinite(nested[0]))
      fail(Errc::CaseTwoGate, "1/g is not square-integrable on the probe window");
    return DbrMeasure(g, nested[0], tolerance);
  }

  /// lambda([lo, hi]) by adaptive Gauss-Kronrod.
  double measure(Interval e) const {
    if (e.hi <= e.lo) return 0.0;
    auto density = [this](double t) { return 1.0 / std::norm(g_(cplx{t, 0.0})); };
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(density, e.lo, e.hi, 15, tol_, &err);
  }

  const StructureFunction& structure() const { return g_; }
  double probe_mass() const { return probe_mass_; }

 private:
  DbrMeasure(StructureFunction g, double mass, double tol) : g_(std::move(g)), probe_mass_(mass), tol_(tol) {}

  StructureFunction g_;
  double probe_mass_;
  double tol_;
};

struct MeasureBoundResult {
  double c_estimate = 0.0;
  std::size_t violations = 0;
  std::vector<double> ratios;
};

/// lambda(phi^-1(E)) / lambda(E) over the given intervals.
inline MeasureBoundResult dbr_measure_bound_check(const DbrMeasure& lambda, const warps::Warp& w,
                                                  std::span<const Interval> intervals,
                                                  std::optional<double> cap = {}) {
  const auto report = warps::check_measure_bound(w);
  if (!report.monotone) fail(Errc::NonMonotoneWarp, "warp is not monotone on the real line");
  MeasureBoundResult out;
  for (const Interval& e : intervals) {
    const double base = lambda.measure(e);
    const double pulled = lambda.measure(warps::preimage(w, e, report.increasing));
    const double ratio = base > 0.0 ? pulled / base : 0.0;
    out.ratios.push_back(ratio);
    out.c_estimate = std::max(out.c_estimate, ratio);
    if (cap && ratio > *cap) ++out.violations;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mean-type gate
// ---------------------------------------------------------------------------

inline constexpr double mean_type_tolerance = 0.05;

struct MeanTypeGate {
  bool ratio_upper_ok = false;
  bool reflected_ok = false;
  double ratio_mean_type = 0.0;      // mean type of f/g in the upper half-plane
  double reflected_mean_type = 0.0;  // mean type of conj(f(conj z))/g(z)
};

/// Finite-radius check that f/g and f#/g have nonpositive mean type in the
/// upper half-plane. Can refute, cannot certify.
template <class Fn>
MeanTypeGate mean_type_gate(const Fn& f, const StructureFunction& g,
                            std::span<const double> radii = entire::default_mean_type_radii) {
  auto ratio = [&](cplx z) { return f(z) / g(z); };
  auto reflected = [&](cplx z) { return std::conj(f(std::conj(z))) / g(z); };
  MeanTypeGate out;
  out.ratio_mean_type = entire::mean_type(ratio, entire::HalfPlane::upper, radii).value;
  out.reflected_mean_type = entire::mean_type(reflected, entire::HalfPlane::upper, radii).value;
  out.ratio_upper_ok = out.ratio_mean_type <= mean_type_tolerance;
  out.reflected_ok = out.reflected_mean_type <= mean_type_tolerance;
  return out;
}

}  // namespace warpband::dbr
