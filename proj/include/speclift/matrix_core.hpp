#pragma once

// Dense complex matrix kernels for small dimensions (n <= 8).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "speclift/error.hpp"

namespace speclift {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct ToleranceConfig {
  double rank_tol = 1e-8;       // relative to the largest singular value
  double cluster_tol = 1e-6;    // root clustering, coefficient-space scale
  double verify_tol = 1e-8;     // interpolation / consistency checks
  double vanishing_tol = 1e-9;  // jet noise floor, relative

  void validate() const;
};

/// Monic polynomial c_0 + c_1 x + ... + c_n x^n with c_n == 1, ascending order.
class PolyCoeffs {
 public:
  PolyCoeffs() : coeffs_{Complex{1.0}} {}

  /// Takes all n+1 coefficients; throws InvalidInput unless the last is exactly 1.
  explicit PolyCoeffs(std::vector<Complex> coeffs);

  /// Monic polynomial from its n lower coefficients.
  static PolyCoeffs from_lower(std::span<const Complex> lower);

  /// prod (x - r) over the multiset.
  static PolyCoeffs from_roots(std::span<const Complex> roots);

  std::size_t degree() const noexcept { return coeffs_.size() - 1; }
  const std::vector<Complex>& coeffs() const noexcept { return coeffs_; }
  Complex operator[](std::size_t i) const { return coeffs_.at(i); }

  Complex evaluate(Complex x) const noexcept;
  /// sum |c_i| |x|^i, the scale used for relative backward errors.
  double magnitude_at(Complex x) const noexcept;

 private:
  std::vector<Complex> coeffs_;
};

void require_finite(const ComplexMatrix& a, const char* what);
void require_square(const ComplexMatrix& a, const char* what);

/// Max-row-sum norm.
double norm_inf(const ComplexMatrix& a);

/// Characteristic polynomial det(xI - A).
PolyCoeffs char_poly(const ComplexMatrix& a);

/// All roots with multiplicity (Aberth-Ehrlich). Throws NonConvergence.
std::vector<Complex> poly_roots(const PolyCoeffs& p);

std::vector<double> singular_values(const ComplexMatrix& a);

/// Number of singular values above tol * sigma_max.
std::size_t rank_tol(const ComplexMatrix& a, double tol);

ComplexMatrix mat_exp(const ComplexMatrix& a);

/// Some logarithm of an invertible matrix; the branch cut is the ray farthest
/// from every eigenvalue argument. Throws Singular or BranchFailure.
ComplexMatrix mat_log(const ComplexMatrix& t, double rank_tol = 1e-8);

/// [A, C] = AC - CA.
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& c);

double spectral_radius(const ComplexMatrix& a);

/// Ratio sigma_min / sigma_max (0 for the zero matrix).
double reciprocal_condition(const ComplexMatrix& a);

}  // namespace speclift
