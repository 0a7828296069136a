#pragma once

#include <cstddef>
#include <vector>

#include "speclift/matrix_core.hpp"
#include "speclift/projection.hpp"

namespace speclift {

/// Nodes a_j in the unit disc, targets A_j in the spectral ball, and the
/// components of f as ascending polynomial coefficients in v.
struct LiftInstance {
  std::vector<Complex> nodes;
  std::vector<ComplexMatrix> matrices;
  std::vector<std::vector<Complex>> f;

  std::size_t dim() const noexcept { return f.size(); }
  SymPoint f_at(Complex v) const;

  /// Shape checks, node distinctness (NodeCollision), membership of nodes
  /// and matrices (DomainViolation), and f(a_j) = pi(A_j) (InvalidInput).
  void validate(const ToleranceConfig& tol = {}) const;
};

inline constexpr std::size_t kMaxPolynomialDegree = 64;

/// Quasi-uniform points of the disc |v| <= radius (Vogel spiral).
std::vector<Complex> disc_samples(std::size_t count, double radius);

/// max_i |pi(A)_i - y_i| relative to max(1, |y|_inf).
double consistency_residual(const SymPoint& expected, const SymPoint& actual);

}  // namespace speclift
