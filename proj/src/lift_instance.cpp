#include "speclift/lift_instance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "speclift/jets.hpp"

namespace speclift {

SymPoint LiftInstance::f_at(Complex v) const {
  SymPoint y;
  y.y.reserve(f.size());
  for (const auto& component : f) y.y.push_back(eval_polynomial(component, v));
  return y;
}

void LiftInstance::validate(const ToleranceConfig& tol) const {
  tol.validate();
  const std::size_t n = dim();
  if (n < 1) throw Error(ErrorCode::InvalidInput, "f must have at least one component");
  if (nodes.empty()) throw Error(ErrorCode::InvalidInput, "at least one interpolation node is required");
  if (nodes.size() != matrices.size()) throw Error(ErrorCode::InvalidInput, "node and matrix counts differ");
  for (const auto& component : f) {
    if (component.empty() || component.size() > kMaxPolynomialDegree + 1) {
      throw Error(ErrorCode::InvalidInput, "f components need 1 to 65 coefficients");
    }
  }
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (!(std::abs(nodes[j]) < 1.0)) throw Error(ErrorCode::DomainViolation, "node " + std::to_string(j) + " is outside the unit disc");
    for (std::size_t i = 0; i < j; ++i) {
      if (nodes[i] == nodes[j]) {
        throw Error(ErrorCode::NodeCollision, "nodes " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      }
    }
    const auto& a = matrices[j];
    if (a.rows() != static_cast<Eigen::Index>(n) || a.cols() != static_cast<Eigen::Index>(n)) {
      throw Error(ErrorCode::DimensionMismatch, "matrix " + std::to_string(j) + " is not n x n");
    }
    require_finite(a, "matrix");
    if (!in_spectral_ball(a).inside) {
      throw Error(ErrorCode::DomainViolation, "matrix " + std::to_string(j) + " is not in the spectral ball");
    }
    if (consistency_residual(project(a), f_at(nodes[j])) > tol.verify_tol) {
      throw Error(ErrorCode::InvalidInput, "f(a_" + std::to_string(j) + ") differs from pi(A_" + std::to_string(j) + ")");
    }
  }
}

std::vector<Complex> disc_samples(std::size_t count, double radius) {
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Complex> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double r = radius * std::sqrt((static_cast<double>(i) + 0.5) / static_cast<double>(count));
    out.push_back(std::polar(r, golden * static_cast<double>(i)));
  }
  return out;
}

double consistency_residual(const SymPoint& expected, const SymPoint& actual) {
  double scale = 1.0;
  for (const Complex& c : expected.y) scale = std::max(scale, std::abs(c));
  return distance_inf(expected, actual) / scale;
}

}  // namespace speclift
