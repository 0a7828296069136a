#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "speclift/matrix_core.hpp"

namespace speclift {

/// Point (pi_1, ..., pi_n) of C^n; its associated monic polynomial is
/// x^n + sum_j (-1)^j y_j x^(n-j).
struct SymPoint {
  std::vector<Complex> y;

  std::size_t dim() const noexcept { return y.size(); }
  PolyCoeffs polynomial() const;
  static SymPoint from_polynomial(const PolyCoeffs& p);
};

struct Membership {
  bool inside = false;
  double margin = 0.0;     // 1 - (spectral radius or max root modulus)
  bool boundary = false;   // |margin| <= kBoundaryBand, classified outside
};

inline constexpr double kBoundaryBand = 1e-10;

SymPoint project(const ComplexMatrix& a);
SymPoint sigma(std::span<const Complex> values);

Membership in_spectral_ball(const ComplexMatrix& a);
Membership in_symmetrized_polydisc(const SymPoint& y);

/// Companion matrix: subdiagonal of ones, coefficients in the last column.
ComplexMatrix companion(const SymPoint& y);

/// True iff `a` is not cyclic.
bool is_branch_point(const ComplexMatrix& a, const ToleranceConfig& tol = {});

double distance_inf(const SymPoint& a, const SymPoint& b);

}  // namespace speclift
