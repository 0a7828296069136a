#include "speclift/projection.hpp"

#include <algorithm>
#include <cmath>

#include "speclift/jordan_structure.hpp"

namespace speclift {

namespace {

Membership classify(double radius) {
  Membership m;
  m.margin = 1.0 - radius;
  m.boundary = std::abs(m.margin) <= kBoundaryBand;
  m.inside = m.margin > kBoundaryBand;
  return m;
}

}  // namespace

PolyCoeffs SymPoint::polynomial() const {
  const std::size_t n = y.size();
  std::vector<Complex> c(n + 1);
  c[n] = 1.0;
  for (std::size_t j = 1; j <= n; ++j) c[n - j] = (j % 2 == 0 ? 1.0 : -1.0) * y[j - 1];
  return PolyCoeffs(std::move(c));
}

SymPoint SymPoint::from_polynomial(const PolyCoeffs& p) {
  const std::size_t n = p.degree();
  SymPoint s;
  s.y.resize(n);
  for (std::size_t j = 1; j <= n; ++j) s.y[j - 1] = (j % 2 == 0 ? 1.0 : -1.0) * p[n - j];
  return s;
}

SymPoint project(const ComplexMatrix& a) { return SymPoint::from_polynomial(char_poly(a)); }

SymPoint sigma(std::span<const Complex> values) {
  // e[k] after processing each value is sigma_k of the values seen so far.
  std::vector<Complex> e(values.size() + 1, Complex{0.0});
  e[0] = 1.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t k = i + 1; k > 0; --k) e[k] += values[i] * e[k - 1];
  }
  return SymPoint{std::vector<Complex>(e.begin() + 1, e.end())};
}

Membership in_spectral_ball(const ComplexMatrix& a) { return classify(spectral_radius(a)); }

Membership in_symmetrized_polydisc(const SymPoint& y) {
  double radius = 0.0;
  for (const Complex& r : poly_roots(y.polynomial())) radius = std::max(radius, std::abs(r));
  return classify(radius);
}

ComplexMatrix companion(const SymPoint& y) {
  const auto n = static_cast<Eigen::Index>(y.dim());
  if (n < 1) throw Error(ErrorCode::InvalidInput, "companion of an empty point");
  const PolyCoeffs p = y.polynomial();
  ComplexMatrix c = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) c(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) c(i, n - 1) = -p[static_cast<std::size_t>(i)];
  return c;
}

bool is_branch_point(const ComplexMatrix& a, const ToleranceConfig& tol) { return !is_cyclic(a, tol); }

double distance_inf(const SymPoint& a, const SymPoint& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "points of different dimension");
  double d = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) d = std::max(d, std::abs(a.y[i] - b.y[i]));
  return d;
}

}  // namespace speclift
