#pragma once

// Truncated power series sum_i c_i (v - p)^i, i < order.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "speclift/matrix_core.hpp"

namespace speclift {

class Jet {
 public:
  Jet(Complex base, std::size_t order);
  Jet(Complex base, std::vector<Complex> coeffs);

  Complex base() const noexcept { return base_; }
  std::size_t order() const noexcept { return coeffs_.size(); }
  const std::vector<Complex>& coeffs() const noexcept { return coeffs_; }
  Complex& operator[](std::size_t i) { return coeffs_.at(i); }
  Complex operator[](std::size_t i) const { return coeffs_.at(i); }

  Complex evaluate(Complex v) const noexcept;
  double max_abs() const noexcept;

 private:
  Complex base_;
  std::vector<Complex> coeffs_;
};

/// Throw BaseMismatch unless base points and orders agree.
Jet jet_add(const Jet& a, const Jet& b);
Jet jet_mul(const Jet& a, const Jet& b);
Jet jet_scale(Complex s, const Jet& a);

/// Smallest i with |c_i| > eps * scale; nullopt means "vanishes to at least
/// the truncation order". `scale` defaults to the jet's largest coefficient.
std::optional<std::size_t> vanishing_order(const Jet& a, double eps, std::optional<double> scale = std::nullopt);

/// Taylor coefficients of sum_k coeffs[k] v^k about v = p, truncated.
Jet from_polynomial(std::span<const Complex> coeffs, Complex p, std::size_t order);

/// Direct Horner evaluation of an ascending coefficient vector.
Complex eval_polynomial(std::span<const Complex> coeffs, Complex v) noexcept;

}  // namespace speclift
