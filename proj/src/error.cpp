#include "speclift/error.hpp"

namespace speclift {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::BranchFailure: return "BranchFailure";
    case ErrorCode::AmbiguousClustering: return "AmbiguousClustering";
    case ErrorCode::InconsistentRanks: return "InconsistentRanks";
    case ErrorCode::StructureFailure: return "StructureFailure";
    case ErrorCode::BaseMismatch: return "BaseMismatch";
    case ErrorCode::NodeCollision: return "NodeCollision";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::NotSimilar: return "NotSimilar";
    case ErrorCode::NoInvertibleSolution: return "NoInvertibleSolution";
    case ErrorCode::NotCyclic: return "NotCyclic";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::BaseMismatch:
    case ErrorCode::NodeCollision:
    case ErrorCode::DomainViolation:
    case ErrorCode::NotSimilar:
    case ErrorCode::NotCyclic:
      return true;
    default:
      return false;
  }
}

}  // namespace speclift
