#include "speclift/jets.hpp"

#include <algorithm>
#include <cmath>

namespace speclift {

namespace {

void require_aligned(const Jet& a, const Jet& b) {
  if (a.base() != b.base() || a.order() != b.order()) {
    throw Error(ErrorCode::BaseMismatch, "jets differ in base point or truncation order");
  }
}

}  // namespace

Jet::Jet(Complex base, std::size_t order) : base_(base), coeffs_(order, Complex{0.0}) {
  if (order < 1) throw Error(ErrorCode::InvalidInput, "jet order must be at least 1");
}

Jet::Jet(Complex base, std::vector<Complex> coeffs) : base_(base), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw Error(ErrorCode::InvalidInput, "jet order must be at least 1");
  for (const Complex& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw Error(ErrorCode::InvalidInput, "non-finite jet coefficient");
  }
}

Complex Jet::evaluate(Complex v) const noexcept { return eval_polynomial(coeffs_, v - base_); }

double Jet::max_abs() const noexcept {
  double m = 0.0;
  for (const Complex& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

Jet jet_add(const Jet& a, const Jet& b) {
  require_aligned(a, b);
  Jet out = a;
  for (std::size_t i = 0; i < out.order(); ++i) out[i] += b[i];
  return out;
}

Jet jet_mul(const Jet& a, const Jet& b) {
  require_aligned(a, b);
  Jet out(a.base(), a.order());
  for (std::size_t i = 0; i < a.order(); ++i) {
    if (a[i] == Complex{0.0}) continue;
    for (std::size_t j = 0; i + j < a.order(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Jet jet_scale(Complex s, const Jet& a) {
  Jet out = a;
  for (std::size_t i = 0; i < out.order(); ++i) out[i] *= s;
  return out;
}

std::optional<std::size_t> vanishing_order(const Jet& a, double eps, std::optional<double> scale) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidInput, "vanishing threshold must be positive");
  const double threshold = eps * scale.value_or(a.max_abs());
  for (std::size_t i = 0; i < a.order(); ++i) {
    if (std::abs(a[i]) > threshold) return i;
  }
  return std::nullopt;
}

Jet from_polynomial(std::span<const Complex> coeffs, Complex p, std::size_t order) {
  // Repeated synthetic division by (v - p) yields the Taylor coefficients.
  std::vector<Complex> work(coeffs.begin(), coeffs.end());
  Jet out(p, order);
  for (std::size_t i = 0; i < order && !work.empty(); ++i) {
    Complex rem = work.back();
    for (std::size_t k = work.size() - 1; k-- > 0;) {
      const Complex next = work[k] + rem * p;
      work[k] = rem;
      rem = next;
    }
    out[i] = rem;
    work.pop_back();
  }
  return out;
}

Complex eval_polynomial(std::span<const Complex> coeffs, Complex v) noexcept {
  Complex acc{0.0};
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * v + coeffs[i];
  return acc;
}

}  // namespace speclift
