#pragma once

// Versioned exchange formats:
//   warpband-signal/1     spectrum or time samples
//   warpband-warp/1       warp coefficients (ascending degree)
//   warpband-gram/1       Gram matrix
//   warpband-coeffs/1     kernel expansion coefficients
//   warpband-structure/1  de Branges-Rovnyak structure function descriptor
// plus the "A,l2_error,tail_mass" error-curve CSV.
//
// Doubles are written with 17 significant digits so a write/read cycle is
// bit-exact.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "warpband/debranges.hpp"
#include "warpband/error.hpp"
#include "warpband/grid.hpp"
#include "warpband/paley_wiener.hpp"
#include "warpband/range_rkhs.hpp"
#include "warpband/truncation.hpp"
#include "warpband/warps.hpp"

namespace warpband::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* signal_format = "warpband-signal/1";
inline constexpr const char* warp_format = "warpband-warp/1";
inline constexpr const char* gram_format = "warpband-gram/1";
inline constexpr const char* coeffs_format = "warpband-coeffs/1";
inline constexpr const char* structure_format = "warpband-structure/1";
inline constexpr const char* config_format = "warpband-config/1";

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void emit(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        emit(it.value(), out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        emit(j[i], out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: out += format_double(j.get<double>()); break;
    default: out += j.dump(); break;
  }
}

}  // namespace detail

/// Compact JSON text with doubles at 17 significant digits.
inline std::string dump(const Json& j) {
  std::string out;
  detail::emit(j, out);
  out += '\n';
  return out;
}

inline Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::FormatError, std::string("malformed JSON: ") + e.what());
  }
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json read_json(const std::filesystem::path& path) { return parse(read_text(path)); }

/// Writes to a sibling temporary and renames, so a failed run leaves no partial file.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::IoError, "cannot write " + tmp);
    out << content;
    if (!out) fail(Errc::IoError, "write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(Errc::IoError, "rename failed for " + path.string() + ": " + ec.message());
}

// ---------------------------------------------------------------------------
// Field helpers
// ---------------------------------------------------------------------------

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(Errc::FormatError, std::string("missing field '") + key + "'");
  return j.at(key);
}

inline double number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) fail(Errc::FormatError, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

inline void expect_format(const Json& j, const char* format) {
  const Json& f = field(j, "format");
  if (!f.is_string() || f.get<std::string>() != format)
    fail(Errc::FormatError, std::string("expected format ") + format);
}

inline Json complex_array(std::span<const cplx> v) {
  Json arr = Json::array();
  for (const cplx& x : v) arr.push_back(Json::array({x.real(), x.imag()}));
  return arr;
}

inline std::vector<cplx> read_complex_array(const Json& arr) {
  if (!arr.is_array()) fail(Errc::FormatError, "expected an array of [re, im] pairs");
  std::vector<cplx> out;
  out.reserve(arr.size());
  for (const auto& p : arr) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      fail(Errc::FormatError, "complex values must be [re, im] number pairs");
    out.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return out;
}

inline std::vector<double> read_real_array(const Json& arr) {
  if (!arr.is_array()) fail(Errc::FormatError, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : arr) {
    if (!v.is_number()) fail(Errc::FormatError, "expected a number");
    out.push_back(v.get<double>());
  }
  return out;
}

inline Json grid_json(const RealGrid& g) {
  return Json{{"start", g.start}, {"step", g.step}, {"count", g.count}};
}

inline RealGrid read_grid(const Json& j) {
  const Json& c = field(j, "count");
  if (!c.is_number_integer() && !c.is_number_unsigned()) fail(Errc::FormatError, "grid count must be an integer");
  return RealGrid::make(number(j, "start"), number(j, "step"), c.get<std::size_t>());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Signals
// ---------------------------------------------------------------------------

enum class SignalKind { spectrum, time_samples };

struct SignalFile {
  SignalKind kind = SignalKind::spectrum;
  double band = 1.0;
  GridSamples samples;
  std::string label;
  Json extra = Json::object();  // additional top-level fields, e.g. a measure report
};

inline Json signal_json(const SignalFile& s) {
  Json j;
  j["format"] = signal_format;
  j["kind"] = s.kind == SignalKind::spectrum ? "spectrum" : "time-samples";
  j["band"] = s.band;
  j["grid"] = detail::grid_json(s.samples.grid);
  j["values"] = detail::complex_array(s.samples.values);
  if (!s.label.empty()) j["label"] = s.label;
  for (auto it = s.extra.begin(); it != s.extra.end(); ++it) j[it.key()] = it.value();
  return j;
}

inline SignalFile from_signal(const pw::BandlimitedSignal& f) {
  return {SignalKind::spectrum, f.band().a, GridSamples{f.spectrum.grid(), f.spectrum.values()}, f.label, Json::object()};
}

inline SignalFile read_signal(const Json& j) {
  detail::expect_format(j, signal_format);
  SignalFile s;
  const auto kind = detail::field(j, "kind").get<std::string>();
  if (kind == "spectrum")
    s.kind = SignalKind::spectrum;
  else if (kind == "time-samples")
    s.kind = SignalKind::time_samples;
  else
    fail(Errc::FormatError, "unknown signal kind '" + kind + "'");
  s.band = detail::number(j, "band");
  s.samples.grid = detail::read_grid(detail::field(j, "grid"));
  s.samples.values = detail::read_complex_array(detail::field(j, "values"));
  if (s.samples.values.size() != s.samples.grid.count) fail(Errc::FormatError, "value count differs from grid count");
  if (j.contains("label") && j["label"].is_string()) s.label = j["label"].get<std::string>();
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& k = it.key();
    if (k != "format" && k != "kind" && k != "band" && k != "grid" && k != "values" && k != "label")
      s.extra[k] = it.value();
  }
  return s;
}

/// Spectrum files become signals; the grid must span [-band, band].
inline pw::BandlimitedSignal to_bandlimited(const SignalFile& s) {
  if (s.kind != SignalKind::spectrum) fail(Errc::FormatError, "expected a spectrum file");
  const auto band = pw::BandSpec::make(s.band);
  auto spectrum = pw::Spectrum::make(band, s.samples.values);
  const RealGrid g = spectrum.grid();
  if (std::abs(g.start - s.samples.grid.start) > 1e-12 * band.a || std::abs(g.step - s.samples.grid.step) > 1e-12 * g.step)
    fail(Errc::FormatError, "spectrum grid does not cover [-band, band]");
  return {std::move(spectrum), s.label};
}

// ---------------------------------------------------------------------------
// Warps
// ---------------------------------------------------------------------------

inline Json warp_json(const warps::Warp& w) {
  return Json{{"format", warp_format}, {"kind", warps::to_string(w.kind())}, {"coefficients", w.coefficients()}};
}

inline warps::Warp read_warp(const Json& j) {
  detail::expect_format(j, warp_format);
  const auto kind = detail::field(j, "kind").get<std::string>();
  const auto coeffs = detail::read_real_array(detail::field(j, "coefficients"));
  if (kind == "affine") {
    if (coeffs.size() != 2) fail(Errc::FormatError, "affine warp needs coefficients [d, c]");
    return warps::Warp::affine(coeffs[1], coeffs[0]);
  }
  if (kind == "polynomial") return warps::Warp::polynomial(coeffs);
  fail(Errc::FormatError, "unknown warp kind '" + kind + "'");
}

inline Json measure_report_json(const warps::MeasureBoundReport& r) {
  Json j;
  j["monotone"] = r.monotone;
  j["inf_derivative"] = r.inf_derivative;
  j["bound_c"] = r.bound_c ? Json(*r.bound_c) : Json(nullptr);
  j["mutual_abs_continuity"] = r.mutual_abs_continuity;
  return j;
}

// ---------------------------------------------------------------------------
// Gram and coefficients
// ---------------------------------------------------------------------------

inline Json gram_json(const rkhs::GramSystem& g) {
  Json rows = Json::array();
  const auto& m = g.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return Json{{"format", gram_format}, {"nodes", g.nodes()}, {"ridge", g.ridge()}, {"matrix", std::move(rows)}};
}

inline rkhs::GramSystem read_gram(const Json& j) {
  detail::expect_format(j, gram_format);
  auto nodes = detail::read_real_array(detail::field(j, "nodes"));
  const double ridge = detail::number(j, "ridge");
  const Json& rows = detail::field(j, "matrix");
  if (!rows.is_array() || rows.size() != nodes.size()) fail(Errc::FormatError, "matrix row count differs from nodes");
  const auto n = static_cast<Eigen::Index>(nodes.size());
  rkhs::Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto row = detail::read_complex_array(rows[static_cast<std::size_t>(i)]);
    if (row.size() != nodes.size()) fail(Errc::FormatError, "matrix is not square");
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = row[static_cast<std::size_t>(k)];
  }
  return rkhs::GramSystem(std::move(nodes), std::move(m), ridge);
}

inline Json coeffs_json(const rkhs::ExpansionCoefficients& c) {
  return Json{{"format", coeffs_format}, {"nodes", c.nodes}, {"coeffs", detail::complex_array(c.coeffs)}};
}

inline rkhs::ExpansionCoefficients read_coeffs(const Json& j) {
  detail::expect_format(j, coeffs_format);
  rkhs::ExpansionCoefficients c;
  c.nodes = detail::read_real_array(detail::field(j, "nodes"));
  c.coeffs = detail::read_complex_array(detail::field(j, "coeffs"));
  if (c.nodes.size() != c.coeffs.size()) fail(Errc::FormatError, "node and coefficient counts differ");
  return c;
}

// ---------------------------------------------------------------------------
// Structure functions
// ---------------------------------------------------------------------------

inline Json structure_json(const dbr::StructureFunction& g) {
  Json j{{"format", structure_format}, {"kind", dbr::to_string(g.kind())}, {"a", g.a()}};
  j["poly"] = detail::complex_array(g.poly());
  return j;
}

/// "poly" entries may be plain numbers or [re, im] pairs.
inline dbr::StructureFunction read_structure(const Json& j) {
  detail::expect_format(j, structure_format);
  const auto kind = detail::field(j, "kind").get<std::string>();
  const double a = detail::number(j, "a");
  if (kind == "exponential") return dbr::StructureFunction::exponential(a);
  if (kind == "poly-exp") {
    std::vector<cplx> poly;
    for (const auto& p : detail::field(j, "poly")) {
      if (p.is_number())
        poly.emplace_back(p.get<double>(), 0.0);
      else
        poly.push_back(detail::read_complex_array(Json::array({p}))[0]);
    }
    return dbr::StructureFunction::poly_exp(std::move(poly), a);
  }
  if (kind == "custom-unsupported") fail(Errc::FormatError, "custom structure functions are in-process only");
  fail(Errc::FormatError, "unknown structure kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string error_curve_csv(std::span<const trunc::ErrorCurvePoint> curve) {
  std::string out = "A,l2_error,tail_mass\n";
  for (const auto& p : curve) {
    out += format_double(p.A);
    out += ',';
    out += format_double(p.l2_error);
    out += ',';
    out += format_double(p.tail_mass);
    out += '\n';
  }
  return out;
}

}  // namespace warpband::io
