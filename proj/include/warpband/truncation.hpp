#pragma once

// Re-bandlimiting of warped signals: h = inverse of (indicator[-A, A] * fhat of f o phi).
//
// Everything lives on the time grid and its DFT-dual frequency grid, where
// forward and inverse transforms are exact inverses. With the periodic rule
// ||x||^2 = dt sum |x_j|^2 the Plancherel identity
//   ||f o phi - h||^2 = 2 pi * int_{|w| > A} |fhat|^2 dw
// then holds to rounding, not just to quadrature accuracy.

#include <cmath>
#include <vector>

#include "warpband/error.hpp"
#include "warpband/grid.hpp"
#include "warpband/paley_wiener.hpp"
#include "warpband/warps.hpp"

namespace warpband::trunc {

struct WarpedSignal {
  pw::BandlimitedSignal source;
  warps::Warp warp;
  GridSamples samples;
  warps::MeasureBoundReport hypothesis;

  /// The pull-back bound m(phi^-1 E) <= c m(E) holds (bound_c finite).
  bool hypothesis_satisfied() const { return hypothesis.bound_c.has_value(); }
};

struct TruncationResult {
  double A = 0.0;
  GridSamples h;
  double l2_error = 0.0;
  double tail_mass = 0.0;
  bool hypothesis_satisfied = true;
};

struct ErrorCurvePoint {
  double A = 0.0;
  double l2_error = 0.0;
  double tail_mass = 0.0;
};

/// Samples of f o phi on `grid`. A warp failing the measure bound is still
/// processed; the result carries the failed report.
inline WarpedSignal warp_signal(const pw::BandlimitedSignal& f, const warps::Warp& w, const RealGrid& grid) {
  std::vector<double> warped_points(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) warped_points[i] = w(grid.at(i));
  return {f, w, GridSamples{grid, pw::synthesize_at(f, warped_points)}, warps::check_measure_bound(w)};
}

/// sqrt(dt sum |x_j|^2): the periodic-trapezoid norm matching the DFT pair.
inline double periodic_norm(const GridSamples& x) {
  double s = 0.0;
  for (const auto& v : x.values) s += std::norm(v);
  return std::sqrt(s * x.grid.step);
}

namespace detail {

inline TruncationResult truncate_spectrum(const GridSamples& g, const GridSamples& spectrum, double A,
                                          bool hypothesis_satisfied) {
  if (!(A > 0.0)) fail(Errc::InvalidBand, "truncation band A must be positive");
  GridSamples kept = spectrum;
  double tail = 0.0;
  for (std::size_t k = 0; k < kept.values.size(); ++k) {
    // node at exactly +-A is kept
    if (std::abs(kept.grid.at(k)) > A) {
      tail += std::norm(kept.values[k]);
      kept.values[k] = {};
    }
  }
  TruncationResult r;
  r.A = A;
  r.tail_mass = tail * spectrum.grid.step;
  r.h = pw::inverse_transform(kept, g.grid);
  GridSamples diff = g;
  for (std::size_t j = 0; j < diff.values.size(); ++j) diff.values[j] -= r.h.values[j];
  r.l2_error = periodic_norm(diff);
  r.hypothesis_satisfied = hypothesis_satisfied;
  return r;
}

}  // namespace detail

/// Truncates arbitrary samples (not necessarily produced by warp_signal).
inline TruncationResult truncate_samples(const GridSamples& g, double A, bool hypothesis_satisfied = true) {
  const auto spectrum = pw::forward_transform(g).spectrum;
  return detail::truncate_spectrum(g, spectrum, A, hypothesis_satisfied);
}

inline TruncationResult truncate_to_band(const WarpedSignal& g, double A) {
  return truncate_samples(g.samples, A, g.hypothesis_satisfied());
}

/// Truncation error for each A (ascending). One transform serves the sweep.
inline std::vector<ErrorCurvePoint> error_curve(const GridSamples& g, std::span<const double> a_values) {
  if (a_values.empty()) fail(Errc::InvalidBandList, "error curve needs at least one A");
  for (std::size_t i = 0; i < a_values.size(); ++i) {
    if (!(a_values[i] > 0.0)) fail(Errc::InvalidBandList, "A values must be positive");
    if (i > 0 && a_values[i] < a_values[i - 1]) fail(Errc::InvalidBandList, "A values must be ascending");
  }
  const auto spectrum = pw::forward_transform(g).spectrum;
  std::vector<ErrorCurvePoint> out;
  out.reserve(a_values.size());
  for (double A : a_values) {
    const auto r = detail::truncate_spectrum(g, spectrum, A, true);
    out.push_back({A, r.l2_error, r.tail_mass});
  }
  return out;
}

inline std::vector<ErrorCurvePoint> error_curve(const WarpedSignal& g, std::span<const double> a_values) {
  return error_curve(g.samples, a_values);
}

}  // namespace warpband::trunc
