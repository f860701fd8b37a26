#pragma once

#include <stdexcept>
#include <string>

namespace warpband {

enum class Errc {
  // entire_analysis
  AllZero,
  WindowEmpty,
  NonpositiveOrder,
  NonFinite,
  // paley_wiener
  InvalidBand,
  InvalidSpectrum,
  InvalidGrid,
  Overflow,
  GridMismatch,
  WindowTooShort,
  // warps
  ConstantWarp,
  InvalidWarp,
  EmptySupport,
  DegenerateLeading,
  NonMonotoneWarp,
  // truncation_approx
  InvalidBandList,
  // range_rkhs
  FactorizationFailure,
  NodeMismatch,
  HypothesisFailed,
  IndistinguishableInputs,
  DenseBudgetExceeded,
  // debranges
  InadmissibleStructure,
  StructureZeroOnGrid,
  Diverging,
  HypothesisViolated,
  CaseTwoGate,
  // io / cli
  FormatError,
  IoError,
  Usage,
};

enum class ErrorKind { usage, validation, numerical, io };

constexpr const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::AllZero: return "AllZero";
    case Errc::WindowEmpty: return "WindowEmpty";
    case Errc::NonpositiveOrder: return "NonpositiveOrder";
    case Errc::NonFinite: return "NonFinite";
    case Errc::InvalidBand: return "InvalidBand";
    case Errc::InvalidSpectrum: return "InvalidSpectrum";
    case Errc::InvalidGrid: return "InvalidGrid";
    case Errc::Overflow: return "Overflow";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::WindowTooShort: return "WindowTooShort";
    case Errc::ConstantWarp: return "ConstantWarp";
    case Errc::InvalidWarp: return "InvalidWarp";
    case Errc::EmptySupport: return "EmptySupport";
    case Errc::DegenerateLeading: return "DegenerateLeading";
    case Errc::NonMonotoneWarp: return "NonMonotoneWarp";
    case Errc::InvalidBandList: return "InvalidBandList";
    case Errc::FactorizationFailure: return "FactorizationFailure";
    case Errc::NodeMismatch: return "NodeMismatch";
    case Errc::HypothesisFailed: return "HypothesisFailed";
    case Errc::IndistinguishableInputs: return "IndistinguishableInputs";
    case Errc::DenseBudgetExceeded: return "DenseBudgetExceeded";
    case Errc::InadmissibleStructure: return "InadmissibleStructure";
    case Errc::StructureZeroOnGrid: return "StructureZeroOnGrid";
    case Errc::Diverging: return "Diverging";
    case Errc::HypothesisViolated: return "HypothesisViolated";
    case Errc::CaseTwoGate: return "CaseTwoGate";
    case Errc::FormatError: return "FormatError";
    case Errc::IoError: return "IoError";
    case Errc::Usage: return "Usage";
  }
  return "Unknown";
}

/// Numerical failures are the ones a caller can sometimes cure by changing
/// grids or radii; everything else is a contract violation on the inputs.
constexpr ErrorKind kind_of(Errc code) noexcept {
  switch (code) {
    case Errc::NonFinite:
    case Errc::Overflow:
    case Errc::WindowTooShort:
    case Errc::FactorizationFailure:
    case Errc::Diverging:
      return ErrorKind::numerical;
    case Errc::IoError:
      return ErrorKind::io;
    case Errc::Usage:
      return ErrorKind::usage;
    default:
      return ErrorKind::validation;
  }
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }
  ErrorKind kind() const noexcept { return kind_of(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace warpband
