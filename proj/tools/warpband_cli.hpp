#pragma once

// Front end for the `warpband` executable. `run` is the whole program minus
// main(), so tests can drive it in-process.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "warpband/warpband.hpp"

namespace warpband::cli {

struct RunConfig {
  double time_lo = -200.0;
  double time_hi = 200.0;
  double time_step = 0.05;
  double oversampling = 4.0;
  double quadrature_tol = 1e-12;
  double ridge = rkhs::default_ridge;
  std::string out = "warpband-out";
  std::uint64_t seed = 0;

  void validate() const;
  RealGrid time_grid() const { return RealGrid::window(time_lo, time_hi, time_step); }
};

/// Reads a warpband-config/1 document on top of `base`. Unknown keys are rejected.
RunConfig apply_config(const io::Json& j, RunConfig base = {});

/// Everything except the output directory, which must not leak into artifacts.
io::Json config_json(const RunConfig& c);

std::string sha256_hex(std::string_view data);

/// 1 usage, 2 validation (and I/O), 3 numerical.
int exit_code(ErrorKind kind);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace warpband::cli
