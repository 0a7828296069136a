#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace speclift {

enum class ErrorCode {
  InvalidInput,
  DimensionMismatch,
  NonConvergence,
  Singular,
  BranchFailure,
  AmbiguousClustering,
  InconsistentRanks,
  StructureFailure,
  BaseMismatch,
  NodeCollision,
  DomainViolation,
  NotSimilar,
  NoInvertibleSolution,
  NotCyclic,
};

std::string_view to_string(ErrorCode code) noexcept;

// Validation errors come from malformed or out-of-domain input; everything
// else is a numerical failure.
bool is_validation_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace speclift
