#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace metric_energy {

enum class ErrorCode {
  NotSquare,
  NotSymmetric,
  NoConvergence,
  NonzeroDiagonal,
  NonpositiveOffDiagonal,
  TriangleViolation,
  BadRange,
  BadParameter,
  DuplicatePoints,
  SpaceMismatch,
  NotMassZero,
  NotMassOne,
  PositiveEnergy,
  ZeroDistance,
  NotQuasihypermetric,
  InconsistentClassification,
  NotFinite,
  WrongStatus,
  Parse,
  Io,
  UnknownExperiment,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library. `indices` and `values` carry the
// offending point indices and quantities (e.g. the three distances of a
// triangle violation) so callers can report them without parsing what().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::vector<std::size_t> indices = {}, std::vector<double> values = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        indices_(std::move(indices)),
        values_(std::move(values)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  ErrorCode code_;
  std::vector<std::size_t> indices_;
  std::vector<double> values_;
};

}  // namespace metric_energy
