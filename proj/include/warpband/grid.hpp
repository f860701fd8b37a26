#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "warpband/error.hpp"

namespace warpband {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

/// Uniform grid start + i*step, i in [0, count).
struct RealGrid {
  double start = 0.0;
  double step = 1.0;
  std::size_t count = 2;

  static RealGrid make(double start, double step, std::size_t count) {
    if (!std::isfinite(start) || !std::isfinite(step) || step <= 0.0)
      fail(Errc::InvalidGrid, "grid step must be positive and finite");
    if (count < 2) fail(Errc::InvalidGrid, "grid needs at least two points");
    return RealGrid{start, step, count};
  }

  /// Grid covering [lo, hi] with the given step; hi is hit when (hi-lo)/step is integral.
  static RealGrid window(double lo, double hi, double step) {
    if (!(hi > lo)) fail(Errc::InvalidGrid, "window must satisfy lo < hi");
    const auto n = static_cast<std::size_t>(std::llround(std::floor((hi - lo) / step + 1e-9))) + 1;
    return make(lo, step, n);
  }

  double at(std::size_t i) const { return start + static_cast<double>(i) * step; }
  double back() const { return at(count - 1); }
  double length() const { return back() - start; }

  std::vector<double> points() const {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = at(i);
    return out;
  }

  friend bool operator==(const RealGrid&, const RealGrid&) = default;
};

/// Complex samples attached to a grid. Used for time signals and for sampled spectra.
struct GridSamples {
  RealGrid grid;
  std::vector<cplx> values;

  std::size_t size() const { return values.size(); }
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

inline void require_same_grid(const GridSamples& x, const GridSamples& y) {
  if (!(x.grid == y.grid) || x.values.size() != y.values.size() || x.values.size() != x.grid.count)
    fail(Errc::GridMismatch, "sample sets live on different grids");
}

}  // namespace warpband
