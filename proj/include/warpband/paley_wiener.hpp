#pragma once

// Bandlimited signals f(t) = int_{-a}^{a} fhat(w) e^{-itw} dw, their sinc
// reproducing kernel, L2 pairings and the time/frequency transforms.
//
// Fourier convention: synthesis carries no constant, analysis carries 1/(2 pi):
//   fhat(w) = (1/2pi) int f(t) e^{iwt} dt,   ||f||^2 = 2 pi ||fhat||^2.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <fftw3.h>

#include "warpband/error.hpp"
#include "warpband/grid.hpp"

namespace warpband::pw {

inline constexpr double exponent_cap = 700.0;
inline constexpr std::size_t min_spectrum_nodes = 16;
inline constexpr std::size_t default_spectrum_nodes = 257;

struct BandSpec {
  double a = 1.0;

  static BandSpec make(double a) {
    if (!std::isfinite(a) || !(a > 0.0)) fail(Errc::InvalidBand, "bandwidth must be positive");
    return BandSpec{a};
  }

  friend bool operator==(const BandSpec&, const BandSpec&) = default;
};

/// Samples of fhat on the uniform grid of `count` nodes covering [-a, a].
/// Between nodes the spectrum is Simpson's piecewise quadratic interpolant
/// (a final linear piece when the node count is even).
class Spectrum {
 public:
  static Spectrum make(BandSpec band, std::vector<cplx> values) {
    BandSpec::make(band.a);
    if (values.size() < min_spectrum_nodes) fail(Errc::InvalidSpectrum, "spectrum needs at least 16 nodes");
    for (const cplx& v : values)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        fail(Errc::InvalidSpectrum, "spectrum samples must be finite");
    return Spectrum(band, std::move(values));
  }

  BandSpec band() const { return band_; }
  std::size_t count() const { return values_.size(); }
  double step() const { return 2.0 * band_.a / static_cast<double>(values_.size() - 1); }
  double node(std::size_t k) const { return -band_.a + static_cast<double>(k) * step(); }
  RealGrid grid() const { return RealGrid{-band_.a, step(), values_.size()}; }
  const std::vector<cplx>& values() const { return values_; }

 private:
  Spectrum(BandSpec band, std::vector<cplx> values) : band_(band), values_(std::move(values)) {}

  BandSpec band_;
  std::vector<cplx> values_;
};

struct BandlimitedSignal {
  Spectrum spectrum;
  std::string label;

  BandSpec band() const { return spectrum.band(); }
};

namespace detail {

// int_{-1}^{1} u^m e^{-i theta u} du for m = 0, 1, 2.
inline std::array<cplx, 3> filon_moments(cplx theta) {
  if (std::abs(theta) < 1.0) {
    std::array<cplx, 3> m{};
    cplx term{1.0, 0.0};  // (-i theta)^n / n!
    const cplx step = cplx{0.0, -1.0} * theta;
    for (int n = 0; n < 32; ++n) {
      for (int j = 0; j < 3; ++j)
        if ((j + n) % 2 == 0) m[static_cast<std::size_t>(j)] += term * (2.0 / static_cast<double>(j + n + 1));
      term *= step / static_cast<double>(n + 1);
    }
    return m;
  }
  const cplx s = std::sin(theta);
  const cplx c = std::cos(theta);
  const cplx t2 = theta * theta;
  return {2.0 * s / theta, cplx{0.0, -2.0} * (s - theta * c) / t2, 2.0 * ((t2 - 2.0) * s + 2.0 * theta * c) / (t2 * theta)};
}

}  // namespace detail

/// f(z) by Filon-Simpson quadrature: Simpson's interpolant of fhat, with the
/// factor e^{-izw} integrated exactly on each panel. Exact for flat spectra.
inline cplx synthesize(const BandlimitedSignal& f, cplx z) {
  const Spectrum& s = f.spectrum;
  const double a = s.band().a;
  if (std::abs(z.imag()) * a > exponent_cap) fail(Errc::Overflow, "|Im z| * a exceeds the exponent cap");
  const auto& v = s.values();
  const std::size_t m = v.size();
  const double h = s.step();
  const std::size_t panels = (m - 1) / 2;
  const cplx minus_i_z = cplx{0.0, -1.0} * z;

  cplx sum{};
  if (panels > 0) {
    const auto mom = detail::filon_moments(z * h);
    for (std::size_t p = 0; p < panels; ++p) {
      const cplx f0 = v[2 * p], f1 = v[2 * p + 1], f2 = v[2 * p + 2];
      const double centre = -a + static_cast<double>(2 * p + 1) * h;
      const cplx poly = f1 * mom[0] + 0.5 * (f2 - f0) * mom[1] + 0.5 * (f2 - 2.0 * f1 + f0) * mom[2];
      sum += std::exp(minus_i_z * centre) * poly;
    }
    sum *= h;
  }
  if ((m - 1) % 2 == 1) {
    const auto mom = detail::filon_moments(z * (0.5 * h));
    const cplx f0 = v[m - 2], f1 = v[m - 1];
    const double centre = a - 0.5 * h;
    sum += 0.5 * h * std::exp(minus_i_z * centre) * (0.5 * (f0 + f1) * mom[0] + 0.5 * (f1 - f0) * mom[1]);
  }
  return sum;
}

inline std::vector<cplx> synthesize_at(const BandlimitedSignal& f, std::span<const double> points) {
  std::vector<cplx> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = synthesize(f, cplx{points[i], 0.0});
  return out;
}

inline GridSamples synthesize_on_grid(const BandlimitedSignal& f, const RealGrid& grid) {
  const auto pts = grid.points();
  return GridSamples{grid, synthesize_at(f, pts)};
}

/// k_w(z) = sin(a (z - conj w)) / (pi (z - conj w)).
inline cplx pw_kernel(BandSpec band, cplx z, cplx w) {
  const double a = band.a;
  const cplx d = z - std::conj(w);
  if (std::abs(d) < 1e-6) {
    const cplx x = a * d;
    const cplx x2 = x * x;
    return a / pi * (1.0 - x2 / 6.0 + x2 * x2 / 120.0);
  }
  return std::sin(a * d) / (pi * d);
}

/// Trapezoidal int x conj(y) dt over the common grid.
inline cplx l2_inner(const GridSamples& x, const GridSamples& y) {
  require_same_grid(x, y);
  const std::size_t n = x.values.size();
  cplx sum{};
  for (std::size_t i = 1; i + 1 < n; ++i) sum += x.values[i] * std::conj(y.values[i]);
  sum += 0.5 * (x.values.front() * std::conj(y.values.front()) + x.values.back() * std::conj(y.values.back()));
  return sum * x.grid.step;
}

inline double l2_norm(const GridSamples& x) { return std::sqrt(std::max(0.0, l2_inner(x, x).real())); }

/// int |fhat|^2 dw by Simpson on the nodes (trapezoid on a trailing odd interval).
inline double spectrum_energy(const Spectrum& s) {
  const auto& v = s.values();
  const std::size_t m = v.size();
  const double h = s.step();
  const std::size_t panels = (m - 1) / 2;
  double sum = 0.0;
  for (std::size_t p = 0; p < panels; ++p)
    sum += (std::norm(v[2 * p]) + 4.0 * std::norm(v[2 * p + 1]) + std::norm(v[2 * p + 2])) * h / 3.0;
  if ((m - 1) % 2 == 1) sum += 0.5 * h * (std::norm(v[m - 2]) + std::norm(v[m - 1]));
  return sum;
}

// ---------------------------------------------------------------------------
// Signal factories
// ---------------------------------------------------------------------------

/// Flat spectrum 1/(2 pi) on [-a, a]: f(t) = sin(at)/(pi t), f(0) = a/pi.
inline BandlimitedSignal sinc_signal(BandSpec band, std::size_t nodes = default_spectrum_nodes) {
  return {Spectrum::make(band, std::vector<cplx>(nodes, cplx{1.0 / two_pi, 0.0})), "sinc"};
}

/// Shifted sinc: fhat(w) = e^{i w shift} / (2 pi), so f(t) = sinc(t - shift).
inline BandlimitedSignal shifted_sinc_signal(BandSpec band, double shift, std::size_t nodes = default_spectrum_nodes) {
  std::vector<cplx> v(nodes);
  const double h = 2.0 * band.a / static_cast<double>(nodes - 1);
  for (std::size_t k = 0; k < nodes; ++k) v[k] = std::polar(1.0 / two_pi, (-band.a + static_cast<double>(k) * h) * shift);
  return {Spectrum::make(band, std::move(v)), "sinc-shifted"};
}

/// I.i.d. standard complex Gaussian samples at every node.
inline BandlimitedSignal iid_gaussian_signal(BandSpec band, std::uint64_t seed,
                                             std::size_t nodes = default_spectrum_nodes) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  std::vector<cplx> v(nodes);
  for (auto& x : v) {
    const double re = normal(rng);
    const double im = normal(rng);
    x = {re, im};
  }
  return {Spectrum::make(band, std::move(v)), "random-spectrum"};
}

/// Smooth random member of B^2_a: a Hann-tapered random trigonometric
/// polynomial in w. The taper vanishes to first order at +-a, so f decays
/// like 1/t^3 and window truncation is negligible at the default grids.
inline BandlimitedSignal tapered_random_signal(BandSpec band, std::uint64_t seed, std::size_t modes = 4,
                                               std::size_t nodes = default_spectrum_nodes) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t terms = 2 * modes + 1;
  std::vector<cplx> coeff(terms);
  for (auto& c : coeff) {
    const double re = normal(rng);
    const double im = normal(rng);
    c = {re, im};
  }
  const double a = band.a;
  const double h = 2.0 * a / static_cast<double>(nodes - 1);
  std::vector<cplx> v(nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    const double w = -a + static_cast<double>(k) * h;
    const double taper = std::pow(std::cos(pi * w / (2.0 * a)), 2);
    cplx acc{};
    for (std::size_t j = 0; j < terms; ++j) {
      const double freq = (static_cast<double>(j) - static_cast<double>(modes)) * pi / (2.0 * a);
      acc += coeff[j] * std::polar(1.0, freq * w);
    }
    v[k] = taper * acc / (two_pi * std::sqrt(static_cast<double>(terms)));
  }
  return {Spectrum::make(band, std::move(v)), "random-tapered"};
}

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

struct GridDefaults {
  double time_lo = -200.0;
  double time_hi = 200.0;
  double time_step = 0.05;
  double oversampling = 4.0;
};

inline RealGrid default_time_grid(const GridDefaults& d = {}) {
  return RealGrid::window(d.time_lo, d.time_hi, d.time_step);
}

/// Frequency grid dual to `time` under the DFT: N nodes at spacing
/// 2 pi / (N dt), index -floor(N/2) .. N - 1 - floor(N/2).
inline RealGrid dual_frequency_grid(const RealGrid& time) {
  const double n = static_cast<double>(time.count);
  const double dw = two_pi / (n * time.step);
  return RealGrid{-std::floor(n / 2.0) * dw, dw, time.count};
}

/// Symmetric grid on [-oversampling a, oversampling a] at the dual spacing.
inline RealGrid default_frequency_grid(const RealGrid& time, BandSpec band, double oversampling = 4.0) {
  const double dw = dual_frequency_grid(time).step;
  const double half = oversampling * band.a;
  const auto k = static_cast<std::size_t>(std::ceil(half / dw));
  const double step = half / static_cast<double>(k);
  return RealGrid{-half, step, 2 * k + 1};
}

inline bool is_dual_grid(const RealGrid& time, const RealGrid& freq) {
  const RealGrid d = dual_frequency_grid(time);
  return d.count == freq.count && std::abs(d.step - freq.step) <= 1e-12 * d.step &&
         std::abs(d.start - freq.start) <= 1e-12 * std::abs(d.start) + 1e-300;
}

inline constexpr double decay_warning_level = 1e-6;
inline constexpr double decay_failure_level = 1e-2;

struct TransformResult {
  GridSamples spectrum;
  double endpoint_ratio = 0.0;  // max endpoint magnitude over peak magnitude
  bool decay_warning = false;
};

namespace detail {

class FftwPlan {
 public:
  FftwPlan(std::size_t n, int sign) : n_(n) {
    static std::mutex planner_mutex;
    std::lock_guard lock(planner_mutex);
    buffer_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), buffer_, buffer_, sign, FFTW_ESTIMATE);
  }
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;
  ~FftwPlan() {
    fftw_destroy_plan(plan_);
    fftw_free(buffer_);
  }

  cplx* data() { return reinterpret_cast<cplx*>(buffer_); }
  void execute() { fftw_execute(plan_); }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  fftw_complex* buffer_ = nullptr;
  fftw_plan plan_ = nullptr;
};

// e^{i * 2 pi * (num mod n) / n}, reduced with integers so large j stay exact.
inline cplx unit_root(long long num, long long n) {
  long long r = num % n;
  if (r < 0) r += n;
  return std::polar(1.0, two_pi * static_cast<double>(r) / static_cast<double>(n));
}

inline double endpoint_ratio(const GridSamples& x) {
  double peak = 0.0;
  for (const auto& v : x.values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  return std::max(std::abs(x.values.front()), std::abs(x.values.back())) / peak;
}

}  // namespace detail

/// fhat(w_k) = (dt / 2 pi) sum_j x_j e^{i w_k t_j} (periodic trapezoid).
/// On the dual grid this is an exact inverse of inverse_transform and is
/// computed by FFT; on any other grid by direct summation.
inline TransformResult forward_transform(const GridSamples& x, const RealGrid& freq) {
  if (x.values.size() != x.grid.count) fail(Errc::GridMismatch, "sample count differs from grid count");
  TransformResult out;
  out.endpoint_ratio = detail::endpoint_ratio(x);
  if (out.endpoint_ratio > decay_failure_level)
    fail(Errc::WindowTooShort, "signal has not decayed at the window ends");
  out.decay_warning = out.endpoint_ratio > decay_warning_level;
  out.spectrum.grid = freq;
  out.spectrum.values.assign(freq.count, cplx{});

  const double t0 = x.grid.start;
  const double dt = x.grid.step;
  const double scale = dt / two_pi;
  if (is_dual_grid(x.grid, freq)) {
    const auto n = static_cast<long long>(x.grid.count);
    const long long k0 = -(n / 2);
    detail::FftwPlan plan(x.grid.count, FFTW_BACKWARD);
    cplx* buf = plan.data();
    for (long long j = 0; j < n; ++j) buf[j] = x.values[static_cast<std::size_t>(j)] * detail::unit_root(k0 * j, n);
    plan.execute();
    for (long long k = 0; k < n; ++k) {
      const double w = freq.at(static_cast<std::size_t>(k));
      out.spectrum.values[static_cast<std::size_t>(k)] = scale * std::polar(1.0, w * t0) * buf[k];
    }
    return out;
  }
  for (std::size_t k = 0; k < freq.count; ++k) {
    const double w = freq.at(k);
    const cplx rot = std::polar(1.0, w * dt);
    cplx phase = std::polar(1.0, w * t0);
    cplx acc{};
    for (std::size_t j = 0; j < x.values.size(); ++j) {
      acc += x.values[j] * phase;
      phase *= rot;
    }
    out.spectrum.values[k] = scale * acc;
  }
  return out;
}

inline TransformResult forward_transform(const GridSamples& x) {
  return forward_transform(x, dual_frequency_grid(x.grid));
}

/// x(t_j) = dw sum_k fhat_k e^{-i w_k t_j}.
inline GridSamples inverse_transform(const GridSamples& spectrum, const RealGrid& time) {
  if (spectrum.values.size() != spectrum.grid.count) fail(Errc::GridMismatch, "sample count differs from grid count");
  GridSamples out{time, std::vector<cplx>(time.count)};
  const RealGrid& freq = spectrum.grid;
  const double dw = freq.step;
  if (is_dual_grid(time, freq)) {
    const auto n = static_cast<long long>(time.count);
    const long long k0 = -(n / 2);
    detail::FftwPlan plan(time.count, FFTW_FORWARD);
    cplx* buf = plan.data();
    for (long long k = 0; k < n; ++k)
      buf[k] = spectrum.values[static_cast<std::size_t>(k)] * std::polar(1.0, -freq.at(static_cast<std::size_t>(k)) * time.start);
    plan.execute();
    for (long long j = 0; j < n; ++j) out.values[static_cast<std::size_t>(j)] = dw * detail::unit_root(-k0 * j, n) * buf[j];
    return out;
  }
  for (std::size_t j = 0; j < time.count; ++j) {
    const double t = time.at(j);
    const cplx rot = std::polar(1.0, -dw * t);
    cplx phase = std::polar(1.0, -freq.start * t);
    cplx acc{};
    for (std::size_t k = 0; k < freq.count; ++k) {
      acc += spectrum.values[k] * phase;
      phase *= rot;
    }
    out.values[j] = dw * acc;
  }
  return out;
}

/// Reads sampled spectrum on a symmetric grid [-W, W] as a B^2_W signal.
inline BandlimitedSignal to_signal(const GridSamples& spectrum, std::string label = "transformed") {
  const RealGrid& g = spectrum.grid;
  const double half = -g.start;
  if (!(half > 0.0) || std::abs(g.back() - half) > 1e-9 * half)
    fail(Errc::InvalidSpectrum, "spectrum grid must be symmetric about zero");
  return {Spectrum::make(BandSpec::make(half), spectrum.values), std::move(label)};
}

}  // namespace warpband::pw
