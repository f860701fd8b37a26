#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "warpband_cli.hpp"

using namespace warpband;
using io::Json;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("warpband_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

std::map<std::string, std::string> tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = io::read_text(e.path());
  return files;
}

const char* cubic_warp = R"({"format":"warpband-warp/1","kind":"polynomial","coefficients":[0,1,0,1]})";

// short window keeps the warp runs quick
const std::vector<std::string> small_grid{"--time-lo", "-50", "--time-hi", "50", "--time-step", "0.05"};

std::vector<std::string> with(std::vector<std::string> head, const std::vector<std::string>& tail) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

}  // namespace

TEST_CASE("gen writes a signal and a manifest", "[cli]") {
  const auto dir = scratch("gen");
  const auto r = invoke({"--out", dir.string(), "gen", "sinc", "--band", "3.14159"});
  REQUIRE(r.code == 0);
  const auto f = io::to_bandlimited(io::read_signal(io::read_json(dir / "signal.json")));
  CHECK_THAT(pw::synthesize(f, 0.0).real(), WithinAbs(3.14159 / pi, 1e-12));

  const auto m = io::read_json(dir / "manifest.json");
  CHECK(m["format"] == "warpband-manifest/1");
  CHECK(m["command"] == "gen");
  CHECK(m["version"] == warpband::version);
  CHECK(m["config"]["seed"] == 0);
  CHECK_FALSE(m["config"].contains("out"));
  REQUIRE(m["outputs"].size() == 1);
  CHECK(m["outputs"][0]["name"] == "signal.json");
  CHECK(m["outputs"][0]["sha256"] == cli::sha256_hex(io::read_text(dir / "signal.json")));
}

TEST_CASE("sha256", "[cli]") {
  CHECK(cli::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("seeded generation is reproducible", "[cli]") {
  const auto a = scratch("seed_a"), b = scratch("seed_b"), c = scratch("seed_c");
  REQUIRE(invoke({"--out", a.string(), "--seed", "7", "gen", "random-spectrum", "--band", "2"}).code == 0);
  REQUIRE(invoke({"--out", b.string(), "--seed", "7", "gen", "random-spectrum", "--band", "2"}).code == 0);
  REQUIRE(invoke({"--out", c.string(), "--seed", "8", "gen", "random-spectrum", "--band", "2"}).code == 0);
  CHECK(tree(a) == tree(b));
  CHECK(io::read_text(a / "signal.json") != io::read_text(c / "signal.json"));
}

TEST_CASE("validation failures write nothing", "[cli]") {
  const auto dir = scratch("invalid");
  const auto out = dir / "out";
  const auto r = invoke({"--out", out.string(), "gen", "sinc", "--band", "-1"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
  CHECK_FALSE(fs::exists(out));

  CHECK(invoke({"--out", out.string(), "--time-step", "0", "gen", "sinc"}).code == 2);
  CHECK(invoke({"--out", out.string(), "gen", "triangle"}).code == 1);
  CHECK(invoke({"--out", out.string(), "frobnicate"}).code == 1);
  CHECK_FALSE(fs::exists(out));
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("malformed inputs", "[cli]") {
  const auto dir = scratch("malformed");
  write(dir / "bad.json", "{\"format\": \"warpband-signal/1\", ");
  write(dir / "warp.json", cubic_warp);
  const auto out = dir / "out";
  CHECK(invoke({"--out", out.string(), "warp", "--signal", (dir / "bad.json").string(), "--warp",
                (dir / "warp.json").string()})
            .code == 2);
  CHECK(invoke({"--out", out.string(), "warp", "--signal", (dir / "missing.json").string(), "--warp",
                (dir / "warp.json").string()})
            .code == 2);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("warp command matches the library", "[cli]") {
  const auto dir = scratch("warp");
  REQUIRE(invoke({"--out", dir.string(), "gen", "sinc", "--band", "1"}).code == 0);
  write(dir / "cubic.json", cubic_warp);
  write(dir / "id.json", R"({"format":"warpband-warp/1","kind":"polynomial","coefficients":[0,1]})");
  const auto sig = (dir / "signal.json").string();
  const auto f = io::to_bandlimited(io::read_signal(io::read_json(sig)));
  const RealGrid grid = RealGrid::window(-50.0, 50.0, 0.05);

  SECTION("identity warp reproduces the plain samples") {
    const auto out = dir / "id_out";
    REQUIRE(invoke(with(small_grid, {"--out", out.string(), "warp", "--signal", sig, "--warp",
                                     (dir / "id.json").string()}))
                .code == 0);
    const auto w = io::read_signal(io::read_json(out / "warped.json"));
    CHECK(w.kind == io::SignalKind::time_samples);
    CHECK(w.samples.values == pw::synthesize_on_grid(f, grid).values);
  }
  SECTION("cubic warp") {
    const auto out = dir / "cubic_out";
    const auto r = invoke(with(small_grid, {"--out", out.string(), "warp", "--signal", sig, "--warp",
                                            (dir / "cubic.json").string()}));
    REQUIRE(r.code == 0);
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("measure bound: 1"));
    const auto w = io::read_signal(io::read_json(out / "warped.json"));
    const auto direct = trunc::warp_signal(f, warps::Warp::polynomial({0.0, 1.0, 0.0, 1.0}), grid);
    CHECK(w.samples.values == direct.samples.values);
    CHECK(w.extra["measure_report"]["bound_c"] == 1.0);
    CHECK(w.extra["spectrum_check"].contains("effective_band"));
    const auto m = io::read_json(out / "manifest.json");
    REQUIRE(m["inputs"].size() == 2);
    CHECK(m["inputs"][0]["sha256"] == cli::sha256_hex(io::read_text(sig)));
  }
}

TEST_CASE("truncate command", "[cli]") {
  const auto dir = scratch("truncate");
  REQUIRE(invoke({"--out", dir.string(), "gen", "sinc", "--band", "1"}).code == 0);
  write(dir / "cubic.json", cubic_warp);
  const auto wdir = dir / "warped";
  REQUIRE(invoke(with(small_grid, {"--out", wdir.string(), "warp", "--signal", (dir / "signal.json").string(),
                                   "--warp", (dir / "cubic.json").string()}))
              .code == 0);
  const auto in = (wdir / "warped.json").string();

  const auto out = dir / "t";
  const auto r = invoke({"--out", out.string(), "truncate", "--input", in, "--A", "1,2,4,8"});
  REQUIRE(r.code == 0);
  const auto csv = io::read_text(out / "error_curve.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "A,l2_error,tail_mass");
  std::vector<double> errs;
  while (std::getline(lines, line)) errs.push_back(std::stod(line.substr(line.find(',') + 1)));
  REQUIRE(errs.size() == 4);
  for (std::size_t i = 1; i < errs.size(); ++i) CHECK(errs[i] < errs[i - 1]);
  for (int i = 0; i < 4; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "truncated_%02d.json", i);
    CHECK(fs::exists(out / name));
  }

  const auto samples = io::read_signal(io::read_json(in)).samples;
  const auto single = trunc::truncate_samples(samples, 4.0);
  CHECK(errs[2] == single.l2_error);
  CHECK(io::read_signal(io::read_json(out / "truncated_02.json")).samples.values == single.h.values);

  const auto bad = dir / "bad";
  CHECK(invoke({"--out", bad.string(), "truncate", "--input", in}).code == 1);
  CHECK(invoke({"--out", bad.string(), "truncate", "--input", in, "--A", "2,1"}).code == 2);
  CHECK(invoke({"--out", bad.string(), "truncate", "--input", (dir / "signal.json").string(), "--A", "1"}).code == 2);
  CHECK_FALSE(fs::exists(bad));
}

TEST_CASE("classify command", "[cli]") {
  const auto dir = scratch("classify");
  auto r = invoke({"--out", dir.string(), "classify", "--affine", "0.5"});
  REQUIRE(r.code == 0);
  CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("preserves: true"));
  CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("target_band_factor: 0.5"));
  CHECK(io::read_json(dir / "classification.json")["preserves_pw"] == true);

  write(dir / "cubic.json", cubic_warp);
  r = invoke({"--out", dir.string(), "classify", "--warp", (dir / "cubic.json").string()});
  REQUIRE(r.code == 0);
  CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("preserves: false"));
  CHECK(invoke({"--out", dir.string(), "classify"}).code == 1);
  CHECK(invoke({"--out", dir.string(), "classify", "--affine", "0"}).code == 2);
}

TEST_CASE("gram and project commands", "[cli]") {
  const auto dir = scratch("gram");
  auto r = invoke({"--out", dir.string(), "gram", "--band", "3.141592653589793", "--N", "10"});
  REQUIRE(r.code == 0);
  const auto g = io::read_gram(io::read_json(dir / "gram.json"));
  REQUIRE(g.size() == 21);
  CHECK((g.matrix() - rkhs::Matrix::Identity(21, 21)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(io::read_json(dir / "gram_report.json")["orthonormality_defect"].get<double>() < 1e-12);

  const auto pdir = scratch("project");
  REQUIRE(invoke({"--out", pdir.string(), "gen", "sinc", "--band", "3.141592653589793"}).code == 0);
  r = invoke({"--out", pdir.string(), "project", "--signal", (pdir / "signal.json").string(), "--N", "5"});
  REQUIRE(r.code == 0);
  // Shannon: the coefficients are f(n) = delta_{n0}
  const auto c = io::read_coeffs(io::read_json(pdir / "coeffs.json"));
  for (std::size_t i = 0; i < c.coeffs.size(); ++i) CHECK(std::abs(c.coeffs[i] - (i == 5 ? 1.0 : 0.0)) < 1e-6);
}

TEST_CASE("dbr commands", "[cli]") {
  const auto dir = scratch("dbr");
  auto r = invoke({"--out", dir.string(), "dbr", "--a", "1", "kernel-check", "--pairs", "200"});
  REQUIRE(r.code == 0);
  const auto kc = io::read_json(dir / "kernel_check.json");
  CHECK(kc["max_pw_reduction_error"].get<double>() < 1e-12);

  r = invoke({"--out", dir.string(), "dbr", "--a", "1", "affine", "--dilation", "0.5", "--shift-re", "1"});
  REQUIRE(r.code == 0);
  CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("bounded: true"));
  CHECK_THAT(io::read_json(dir / "affine_report.json")["c_estimate"].get<double>(), WithinAbs(1.0, 1e-12));

  write(dir / "g.json", R"({"format":"warpband-structure/1","kind":"poly-exp","a":0,"poly":[[0,1],1]})");
  write(dir / "cubic.json", cubic_warp);
  r = invoke({"--out", dir.string(), "dbr", "--structure", (dir / "g.json").string(), "measure", "--warp",
              (dir / "cubic.json").string(), "--intervals", "50"});
  REQUIRE(r.code == 0);
  const auto mc = io::read_json(dir / "measure_check.json");
  CHECK(mc["violations"] == 0);

  // the exponential structure has no finite dt/|g|^2 measure
  CHECK(invoke({"--out", dir.string(), "dbr", "measure", "--warp", (dir / "cubic.json").string()}).code == 2);
}

TEST_CASE("configuration precedence", "[cli]") {
  const auto dir = scratch("config");
  write(dir / "cfg.json", R"({"format":"warpband-config/1","seed":11,"ridge":1e-8})");
  write(dir / "env.json", R"({"format":"warpband-config/1","seed":12})");
  write(dir / "bad.json", R"({"format":"warpband-config/1","colour":"blue"})");
  const auto out = (dir / "o").string();
  auto seed_of = [&] { return io::read_json(dir / "o" / "manifest.json")["config"]["seed"].get<int>(); };

  REQUIRE(invoke({"--out", out, "--config", (dir / "cfg.json").string(), "gen", "sinc"}).code == 0);
  CHECK(seed_of() == 11);
  CHECK(io::read_json(dir / "o" / "manifest.json")["config"]["ridge"] == 1e-8);
  REQUIRE(invoke({"--out", out, "--config", (dir / "cfg.json").string(), "--seed", "3", "gen", "sinc"}).code == 0);
  CHECK(seed_of() == 3);

  ::setenv("WARPBAND_CONFIG", (dir / "env.json").string().c_str(), 1);
  REQUIRE(invoke({"--out", out, "gen", "sinc"}).code == 0);
  CHECK(seed_of() == 12);
  REQUIRE(invoke({"--out", out, "--config", (dir / "cfg.json").string(), "gen", "sinc"}).code == 0);
  CHECK(seed_of() == 11);
  ::unsetenv("WARPBAND_CONFIG");

  CHECK(invoke({"--out", out, "--config", (dir / "bad.json").string(), "gen", "sinc"}).code == 2);
  CHECK(cli::apply_config(Json{{"format", "warpband-config/1"}, {"out", "x"}}).out == "x");
}
