#pragma once

#include "warpband/error.hpp"
#include "warpband/grid.hpp"
#include "warpband/entire_analysis.hpp"
#include "warpband/paley_wiener.hpp"
#include "warpband/warps.hpp"
#include "warpband/truncation.hpp"
#include "warpband/range_rkhs.hpp"
#include "warpband/debranges.hpp"
#include "warpband/io.hpp"

namespace warpband {
inline constexpr const char* version = "0.1.0";
}
