#include "warpband_cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <ostream>
#include <random>
#include <utility>

#include <CLI11.hpp>
#include <openssl/evp.h>

namespace warpband::cli {

namespace fs = std::filesystem;
using io::Json;

void RunConfig::validate() const {
  if (!(time_step > 0.0) || !(time_hi > time_lo)) fail(Errc::InvalidGrid, "time window needs lo < hi and step > 0");
  if (!(oversampling >= 1.0)) fail(Errc::InvalidGrid, "oversampling must be >= 1");
  if (!(quadrature_tol > 0.0)) fail(Errc::InvalidGrid, "quadrature tolerance must be positive");
  if (!(ridge > 0.0)) fail(Errc::InvalidGrid, "ridge must be positive");
  if (out.empty()) fail(Errc::Usage, "output directory is empty");
}

RunConfig apply_config(const Json& j, RunConfig c) {
  io::detail::expect_format(j, io::config_format);
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& k = it.key();
    const Json& v = it.value();
    auto num = [&] {
      if (!v.is_number()) fail(Errc::FormatError, "config field '" + k + "' must be a number");
      return v.get<double>();
    };
    if (k == "format") continue;
    if (k == "time_lo") c.time_lo = num();
    else if (k == "time_hi") c.time_hi = num();
    else if (k == "time_step") c.time_step = num();
    else if (k == "oversampling") c.oversampling = num();
    else if (k == "quadrature_tol") c.quadrature_tol = num();
    else if (k == "ridge") c.ridge = num();
    else if (k == "out") {
      if (!v.is_string()) fail(Errc::FormatError, "config field 'out' must be a string");
      c.out = v.get<std::string>();
    } else if (k == "seed") {
      if (!v.is_number_unsigned() && !v.is_number_integer()) fail(Errc::FormatError, "config seed must be an integer");
      c.seed = v.get<std::uint64_t>();
    } else {
      fail(Errc::FormatError, "unknown config field '" + k + "'");
    }
  }
  return c;
}

Json config_json(const RunConfig& c) {
  return Json{{"time_lo", c.time_lo},       {"time_hi", c.time_hi},
              {"time_step", c.time_step},   {"oversampling", c.oversampling},
              {"quadrature_tol", c.quadrature_tol}, {"ridge", c.ridge},
              {"seed", c.seed}};
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    fail(Errc::IoError, "SHA-256 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage: return 1;
    case ErrorKind::numerical: return 3;
    case ErrorKind::validation:
    case ErrorKind::io: return 2;
  }
  return 2;
}

namespace {

// Collects outputs in memory; nothing touches the output directory until the
// command has succeeded.
class Run {
 public:
  Run(const RunConfig& cfg, std::string command) : cfg_(cfg), command_(std::move(command)) {}

  std::string read_input(const std::string& path) {
    std::string text = io::read_text(path);
    inputs_.push_back(Json{{"name", fs::path(path).filename().string()}, {"sha256", sha256_hex(text)}});
    return text;
  }

  Json read_json(const std::string& path) { return io::parse(read_input(path)); }

  void emit(std::string name, std::string content) { files_.emplace(std::move(name), std::move(content)); }
  void emit_json(std::string name, const Json& j) { emit(std::move(name), io::dump(j)); }

  void commit(const Json& arguments) {
    Json manifest;
    manifest["format"] = "warpband-manifest/1";
    manifest["version"] = warpband::version;
    manifest["command"] = command_;
    manifest["arguments"] = arguments;
    manifest["config"] = config_json(cfg_);
    manifest["inputs"] = inputs_;
    Json outputs = Json::array();
    for (const auto& [name, content] : files_)
      outputs.push_back(Json{{"name", name}, {"sha256", sha256_hex(content)}});
    manifest["outputs"] = outputs;
    const fs::path dir(cfg_.out);
    for (const auto& [name, content] : files_) io::atomic_write(dir / name, content);
    io::atomic_write(dir / "manifest.json", io::dump(manifest));
  }

 private:
  const RunConfig& cfg_;
  std::string command_;
  Json inputs_ = Json::array();
  std::map<std::string, std::string> files_;
};

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string kind;
  double band = 1.0;
  std::size_t nodes = pw::default_spectrum_nodes;
};

void cmd_gen(const RunConfig& cfg, const GenArgs& a, std::ostream& out) {
  Run run(cfg, "gen");
  const auto band = pw::BandSpec::make(a.band);
  const auto f = a.kind == "sinc" ? pw::sinc_signal(band, a.nodes) : pw::iid_gaussian_signal(band, cfg.seed, a.nodes);
  run.emit_json("signal.json", io::signal_json(io::from_signal(f)));
  run.commit(Json{{"kind", a.kind}, {"band", a.band}, {"nodes", a.nodes}});
  out << "signal: " << a.kind << " band " << io::format_double(a.band) << "\n";
}

struct WarpArgs {
  std::string signal;
  std::string warp;
};

/// Smallest |w| bound holding 99.9% of the sampled spectral energy.
double effective_band(const GridSamples& spectrum) {
  double total = 0.0;
  for (const auto& v : spectrum.values) total += std::norm(v);
  if (total == 0.0) return 0.0;
  std::vector<std::pair<double, double>> by_freq;
  for (std::size_t k = 0; k < spectrum.values.size(); ++k)
    by_freq.emplace_back(std::abs(spectrum.grid.at(k)), std::norm(spectrum.values[k]));
  std::sort(by_freq.begin(), by_freq.end());
  double acc = 0.0;
  for (const auto& [w, e] : by_freq) {
    acc += e;
    if (acc >= 0.999 * total) return w;
  }
  return by_freq.back().first;
}

void cmd_warp(const RunConfig& cfg, const WarpArgs& a, std::ostream& out) {
  Run run(cfg, "warp");
  const auto f = io::to_bandlimited(io::read_signal(run.read_json(a.signal)));
  const auto w = io::read_warp(run.read_json(a.warp));
  const auto g = trunc::warp_signal(f, w, cfg.time_grid());

  io::SignalFile file{io::SignalKind::time_samples, f.band().a, g.samples, "warped " + f.label, Json::object()};
  file.extra["warp"] = io::warp_json(w)["coefficients"];
  file.extra["measure_report"] = io::measure_report_json(g.hypothesis);
  Json check;
  const double window = cfg.oversampling * f.band().a;
  check["frequency_window"] = window;
  try {
    const auto t = pw::forward_transform(g.samples, pw::default_frequency_grid(g.samples.grid, f.band(), cfg.oversampling));
    check["endpoint_ratio"] = t.endpoint_ratio;
    check["decay_warning"] = t.decay_warning;
    check["effective_band"] = effective_band(t.spectrum);
  } catch (const Error& e) {
    if (e.code() != Errc::WindowTooShort) throw;
    check["endpoint_ratio"] = nullptr;
    check["decay_warning"] = true;
    check["effective_band"] = nullptr;
  }
  file.extra["spectrum_check"] = check;
  run.emit_json("warped.json", io::signal_json(file));
  run.commit(Json{{"signal", fs::path(a.signal).filename().string()}, {"warp", fs::path(a.warp).filename().string()}});
  out << "warped samples: " << g.samples.size() << "\n";
  out << "measure bound: " << (g.hypothesis_satisfied() ? io::format_double(*g.hypothesis.bound_c) : "none") << "\n";
}

struct TruncateArgs {
  std::string input;
  std::vector<double> a_values;
};

void cmd_truncate(const RunConfig& cfg, const TruncateArgs& a, std::ostream& out) {
  if (a.a_values.empty()) fail(Errc::Usage, "truncate needs a nonempty --A list");
  Run run(cfg, "truncate");
  const auto in = io::read_signal(run.read_json(a.input));
  if (in.kind != io::SignalKind::time_samples) fail(Errc::FormatError, "truncate expects a time-samples file");
  bool hypothesis = true;
  if (in.extra.contains("measure_report")) {
    const Json& r = in.extra["measure_report"];
    hypothesis = r.contains("bound_c") && r["bound_c"].is_number();
  }
  const auto curve = trunc::error_curve(in.samples, a.a_values);
  run.emit("error_curve.csv", io::error_curve_csv(curve));

  const auto spectrum = pw::forward_transform(in.samples).spectrum;
  for (std::size_t i = 0; i < a.a_values.size(); ++i) {
    const auto r = trunc::detail::truncate_spectrum(in.samples, spectrum, a.a_values[i], hypothesis);
    io::SignalFile f{io::SignalKind::time_samples, r.A, r.h, "truncated", Json::object()};
    f.extra["l2_error"] = r.l2_error;
    f.extra["tail_mass"] = r.tail_mass;
    f.extra["hypothesis_satisfied"] = r.hypothesis_satisfied;
    char name[32];
    std::snprintf(name, sizeof name, "truncated_%02zu.json", i);
    run.emit_json(name, io::signal_json(f));
  }
  run.commit(Json{{"input", fs::path(a.input).filename().string()}, {"A", a.a_values}});
  for (const auto& p : curve) out << "A " << io::format_double(p.A) << " l2_error " << io::format_double(p.l2_error) << "\n";
  if (!hypothesis) out << "warning: measure pull-back hypothesis not certified for this warp\n";
}

struct ClassifyArgs {
  std::string warp;
  std::vector<double> affine;
};

warps::Warp load_warp_or_affine(Run& run, const std::string& path, const std::vector<double>& affine) {
  if (!path.empty() && !affine.empty()) fail(Errc::Usage, "give either --warp or --affine, not both");
  if (!path.empty()) return io::read_warp(run.read_json(path));
  if (affine.empty()) return warps::Warp::identity();
  if (affine.size() > 2) fail(Errc::Usage, "--affine takes c[,d]");
  return warps::Warp::affine(affine[0], affine.size() == 2 ? affine[1] : 0.0);
}

void cmd_classify(const RunConfig& cfg, const ClassifyArgs& a, std::ostream& out) {
  if (a.warp.empty() && a.affine.empty()) fail(Errc::Usage, "classify needs --warp or --affine");
  Run run(cfg, "classify");
  const auto w = load_warp_or_affine(run, a.warp, a.affine);
  const auto c = warps::classify(w);
  const auto m = warps::check_measure_bound(w);
  Json j;
  j["warp"] = io::warp_json(w);
  j["preserves_pw"] = c.preserves_pw;
  j["target_band_factor"] = c.target_band_factor ? Json(*c.target_band_factor) : Json(nullptr);
  j["reason"] = warps::to_string(c.reason);
  j["measure_report"] = io::measure_report_json(m);
  run.emit_json("classification.json", j);
  run.commit(Json{{"warp", a.warp.empty() ? Json(nullptr) : Json(fs::path(a.warp).filename().string())},
                  {"affine", a.affine}});
  out << "preserves: " << (c.preserves_pw ? "true" : "false") << "\n";
  out << "reason: " << warps::to_string(c.reason) << "\n";
  if (c.target_band_factor) out << "target_band_factor: " << io::format_double(*c.target_band_factor) << "\n";
}

struct GramArgs {
  std::string warp;
  std::vector<double> affine;
  double band = 1.0;
  int half_width = 10;
};

void cmd_gram(const RunConfig& cfg, const GramArgs& a, std::ostream& out) {
  Run run(cfg, "gram");
  const auto w = load_warp_or_affine(run, a.warp, a.affine);
  const rkhs::WarpedKernel k{pw::BandSpec::make(a.band), w};
  const auto g = rkhs::build_gram(k, a.half_width, cfg.ridge);
  const auto ev = g.eigenvalues();
  Json report{{"size", g.size()},
              {"hermitian_defect", g.hermitian_defect()},
              {"orthonormality_defect", g.orthonormality_defect()},
              {"min_eigenvalue", ev.minCoeff()},
              {"max_eigenvalue", ev.maxCoeff()},
              {"cholesky_ok", g.cholesky_ok()}};
  run.emit_json("gram.json", io::gram_json(g));
  run.emit_json("gram_report.json", report);
  run.commit(Json{{"band", a.band}, {"N", a.half_width}, {"warp", io::warp_json(w)["coefficients"]}});
  out << "orthonormality_defect: " << io::format_double(g.orthonormality_defect()) << "\n";
  out << "min_eigenvalue: " << io::format_double(ev.minCoeff()) << "\n";
}

struct ProjectArgs {
  std::string signal;
  std::string warp;
  std::vector<double> affine;
  int half_width = 10;
};

void cmd_project(const RunConfig& cfg, const ProjectArgs& a, std::ostream& out) {
  Run run(cfg, "project");
  const auto f = io::to_bandlimited(io::read_signal(run.read_json(a.signal)));
  const auto w = load_warp_or_affine(run, a.warp, a.affine);
  const rkhs::WarpedKernel k{f.band(), w};
  const auto g = rkhs::build_gram(k, a.half_width, cfg.ridge);
  std::vector<cplx> target(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) target[i] = pw::synthesize(f, cplx{w(g.nodes()[i]), 0.0});
  const auto p = rkhs::project_onto_kernels(g, target);
  const double range_norm =
      std::sqrt(std::max(0.0, rkhs::range_inner_product(g, p.coefficients, p.coefficients).real()));
  run.emit_json("coeffs.json", io::coeffs_json(p.coefficients));
  run.emit_json("projection.json", Json{{"residual_norm", p.residual_norm}, {"range_norm", range_norm}});
  run.commit(Json{{"signal", fs::path(a.signal).filename().string()},
                  {"N", a.half_width},
                  {"warp", io::warp_json(w)["coefficients"]}});
  out << "residual_norm: " << io::format_double(p.residual_norm) << "\n";
  out << "range_norm: " << io::format_double(range_norm) << "\n";
}

struct DbrArgs {
  std::string structure;
  double a = 1.0;
  std::size_t pairs = 500;
  double dilation = 1.0;
  double shift_re = 0.0;
  double shift_im = 0.0;
  std::string warp;
  std::size_t intervals = 200;
};

dbr::StructureFunction load_structure(Run& run, const DbrArgs& a) {
  if (!a.structure.empty()) return io::read_structure(run.read_json(a.structure));
  return dbr::StructureFunction::exponential(a.a);
}

Json structure_summary(const dbr::StructureFunction& g) {
  Json j = io::structure_json(g);
  j.erase("format");
  return j;
}

void cmd_dbr_kernel_check(const RunConfig& cfg, const DbrArgs& a, std::ostream& out) {
  Run run(cfg, "dbr kernel-check");
  const auto g = load_structure(run, a);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> re(-5.0, 5.0);
  std::uniform_real_distribution<double> im(-2.0, 2.0);
  const bool exponential = g.kind() == dbr::StructureKind::exponential;
  double max_reduction = 0.0;
  double max_hermitian = 0.0;
  for (std::size_t i = 0; i < a.pairs; ++i) {
    const double zr = re(rng), zi = im(rng), wr = re(rng), wi = im(rng);
    const cplx z{zr, zi}, w{wr, wi};
    const cplx kzw = dbr::dbr_kernel(g, z, w);
    const cplx kwz = dbr::dbr_kernel(g, w, z);
    max_hermitian = std::max(max_hermitian, std::abs(kzw - std::conj(kwz)) / std::max(std::abs(kzw), 1e-300));
    if (exponential) {
      const cplx ref = pw::pw_kernel(pw::BandSpec{g.a()}, z, w);
      max_reduction = std::max(max_reduction, std::abs(kzw - ref) / std::max(std::abs(ref), 1e-300));
    }
  }
  Json j{{"structure", structure_summary(g)}, {"pairs", a.pairs}, {"max_hermitian_defect", max_hermitian}};
  j["max_pw_reduction_error"] = exponential ? Json(max_reduction) : Json(nullptr);
  run.emit_json("kernel_check.json", j);
  run.commit(Json{{"subcommand", "kernel-check"}, {"pairs", a.pairs}});
  if (exponential) out << "max_pw_reduction_error: " << io::format_double(max_reduction) << "\n";
  out << "max_hermitian_defect: " << io::format_double(max_hermitian) << "\n";
}

void cmd_dbr_affine(const RunConfig& cfg, const DbrArgs& a, std::ostream& out) {
  Run run(cfg, "dbr affine");
  const auto g = load_structure(run, a);
  const auto r = dbr::affine_boundedness_test(g, a.dilation, cplx{a.shift_re, a.shift_im});
  Json j{{"structure", structure_summary(g)},
         {"dilation", a.dilation},
         {"shift", Json::array({a.shift_re, a.shift_im})},
         {"bounded", r.bounded},
         {"c_estimate", r.c_estimate},
         {"window_sups", r.window_sups}};
  j["asymptotic_limit"] = r.asymptotic_limit ? Json(*r.asymptotic_limit) : Json(nullptr);
  run.emit_json("affine_report.json", j);
  run.commit(Json{{"subcommand", "affine"}, {"dilation", a.dilation}, {"shift", Json::array({a.shift_re, a.shift_im})}});
  out << "bounded: " << (r.bounded ? "true" : "false") << "\n";
  out << "c_estimate: " << io::format_double(r.c_estimate) << "\n";
}

void cmd_dbr_measure(const RunConfig& cfg, const DbrArgs& a, std::ostream& out) {
  if (a.warp.empty()) fail(Errc::Usage, "dbr measure needs --warp");
  Run run(cfg, "dbr measure");
  const auto g = load_structure(run, a);
  const auto w = io::read_warp(run.read_json(a.warp));
  const auto lambda = dbr::DbrMeasure::make(g, RealGrid::window(-100.0, 100.0, 0.05), cfg.quadrature_tol);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> centre(-5.0, 5.0);
  std::uniform_real_distribution<double> length(0.01, 2.0);
  std::vector<Interval> intervals;
  for (std::size_t i = 0; i < a.intervals; ++i) {
    const double c = centre(rng);
    const double l = length(rng);
    intervals.push_back({c - 0.5 * l, c + 0.5 * l});
  }
  const auto r = dbr::dbr_measure_bound_check(lambda, w, intervals);
  run.emit_json("measure_check.json", Json{{"structure", structure_summary(g)},
                                          {"warp", io::warp_json(w)["coefficients"]},
                                          {"intervals", a.intervals},
                                          {"c_estimate", r.c_estimate},
                                          {"violations", r.violations},
                                          {"ratios", r.ratios}});
  run.commit(Json{{"subcommand", "measure"}, {"intervals", a.intervals}});
  out << "c_estimate: " << io::format_double(r.c_estimate) << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bandlimited signals under warps: generation, truncation, kernels, dBR checks", "warpband"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  RunConfig flags;
  auto* o_out = app.add_option("--out", flags.out, "Output directory");
  auto* o_seed = app.add_option("--seed", flags.seed, "Random seed");
  app.add_option("--config", config_path, "warpband-config/1 file (fallback: $WARPBAND_CONFIG)");
  auto* o_tlo = app.add_option("--time-lo", flags.time_lo, "Time window start");
  auto* o_thi = app.add_option("--time-hi", flags.time_hi, "Time window end");
  auto* o_tstep = app.add_option("--time-step", flags.time_step, "Time step");
  auto* o_over = app.add_option("--oversampling", flags.oversampling, "Frequency window factor");
  auto* o_ridge = app.add_option("--ridge", flags.ridge, "Gram ridge");
  auto* o_qtol = app.add_option("--quad-tol", flags.quadrature_tol, "Quadrature tolerance");

  GenArgs gen;
  auto* s_gen = app.add_subcommand("gen", "Generate a signal file");
  s_gen->add_option("kind", gen.kind, "sinc | random-spectrum")
      ->required()
      ->check(CLI::IsMember({"sinc", "random-spectrum"}));
  s_gen->add_option("--band", gen.band, "Bandwidth a");
  s_gen->add_option("--nodes", gen.nodes, "Spectrum nodes");

  WarpArgs warp;
  auto* s_warp = app.add_subcommand("warp", "Sample f o phi on the time grid");
  s_warp->add_option("--signal", warp.signal, "Spectrum signal file")->required();
  s_warp->add_option("--warp", warp.warp, "Warp file")->required();

  TruncateArgs tr;
  auto* s_tr = app.add_subcommand("truncate", "Re-bandlimit warped samples");
  s_tr->add_option("--input", tr.input, "Time-samples file")->required();
  s_tr->add_option("--A", tr.a_values, "Comma-separated ascending bands")->delimiter(',')->required();

  ClassifyArgs cl;
  auto* s_cl = app.add_subcommand("classify", "Classify a warp");
  s_cl->add_option("--warp", cl.warp, "Warp file");
  s_cl->add_option("--affine", cl.affine, "c[,d] for phi = cz + d")->delimiter(',');

  GramArgs gram;
  auto* s_gram = app.add_subcommand("gram", "Gram matrix of the warped kernel at integer nodes");
  s_gram->add_option("--warp", gram.warp, "Warp file (default identity)");
  s_gram->add_option("--affine", gram.affine, "c[,d]")->delimiter(',');
  s_gram->add_option("--band", gram.band, "Bandwidth a");
  s_gram->add_option("--N", gram.half_width, "Nodes -N..N");

  ProjectArgs proj;
  auto* s_proj = app.add_subcommand("project", "Expand f o phi in the warped kernels");
  s_proj->add_option("--signal", proj.signal, "Spectrum signal file")->required();
  s_proj->add_option("--warp", proj.warp, "Warp file (default identity)");
  s_proj->add_option("--affine", proj.affine, "c[,d]")->delimiter(',');
  s_proj->add_option("--N", proj.half_width, "Nodes -N..N");

  DbrArgs d;
  auto* s_dbr = app.add_subcommand("dbr", "de Branges-Rovnyak checks");
  s_dbr->require_subcommand(1);
  s_dbr->add_option("--structure", d.structure, "warpband-structure/1 file (default exponential)");
  s_dbr->add_option("--a", d.a, "a for the default g = exp(-iaz)");
  auto* s_kc = s_dbr->add_subcommand("kernel-check", "Compare the dBR kernel with its reductions");
  s_kc->add_option("--pairs", d.pairs, "Random point pairs");
  auto* s_aff = s_dbr->add_subcommand("affine", "Boundedness test for phi = az + b");
  s_aff->add_option("--dilation", d.dilation, "a");
  s_aff->add_option("--shift-re", d.shift_re, "Re b");
  s_aff->add_option("--shift-im", d.shift_im, "Im b");
  auto* s_meas = s_dbr->add_subcommand("measure", "Pull-back check for dt/|g|^2");
  s_meas->add_option("--warp", d.warp, "Warp file")->required();
  s_meas->add_option("--intervals", d.intervals, "Random intervals");

  std::vector<const char*> argv{"warpband"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    RunConfig cfg;
    if (config_path.empty())
      if (const char* env = std::getenv("WARPBAND_CONFIG"); env && *env) config_path = env;
    if (!config_path.empty()) cfg = apply_config(io::read_json(config_path), cfg);
    if (o_out->count()) cfg.out = flags.out;
    if (o_seed->count()) cfg.seed = flags.seed;
    if (o_tlo->count()) cfg.time_lo = flags.time_lo;
    if (o_thi->count()) cfg.time_hi = flags.time_hi;
    if (o_tstep->count()) cfg.time_step = flags.time_step;
    if (o_over->count()) cfg.oversampling = flags.oversampling;
    if (o_ridge->count()) cfg.ridge = flags.ridge;
    if (o_qtol->count()) cfg.quadrature_tol = flags.quadrature_tol;
    cfg.validate();

    if (s_gen->parsed()) cmd_gen(cfg, gen, out);
    else if (s_warp->parsed()) cmd_warp(cfg, warp, out);
    else if (s_tr->parsed()) cmd_truncate(cfg, tr, out);
    else if (s_cl->parsed()) cmd_classify(cfg, cl, out);
    else if (s_gram->parsed()) cmd_gram(cfg, gram, out);
    else if (s_proj->parsed()) cmd_project(cfg, proj, out);
    else if (s_kc->parsed()) cmd_dbr_kernel_check(cfg, d, out);
    else if (s_aff->parsed()) cmd_dbr_affine(cfg, d, out);
    else if (s_meas->parsed()) cmd_dbr_measure(cfg, d, out);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace warpband::cli
