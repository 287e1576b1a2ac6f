#pragma once

#include <stdexcept>
#include <string>

namespace crcurv {

// Failure categories surfaced by the library. The CLI maps each category to a
// distinct process exit code, so additions here must stay in sync with
// tools/crcurv_cli.cpp.
enum class Errc {
  input,          // malformed user input (expressions, data files, config)
  calibration,    // convention calibration failed its residual validation
  c0_violation,   // degenerate critical point or ambiguous membership margin
  c1_violation,   // an interaction matrix eigenvalue is too close to zero
  consistency,    // two independent computations of the same quantity disagree
  quadrature,     // quadrature failed to converge within its refinement budget
  domain,         // point outside a chart, singular kernel argument, etc.
  internal,       // invariant broken inside the library
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace crcurv
