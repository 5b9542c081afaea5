#pragma once

#include <stdexcept>
#include <string>

namespace telex {

enum class Errc {
  InvalidParameter,
  OutOfDomain,
  NotNilpotent,
  NotRank1Recurrent,
  DegenerateSymmetric,
  InvalidScale,
  QuadratureFailure,
  EmptySample,
  SimulationDiverged,
};

const char* to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above; the
/// CLI maps them onto its exit statuses.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace telex
