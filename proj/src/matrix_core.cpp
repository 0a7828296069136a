#include "speclift/matrix_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/SVD>

namespace speclift {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.partialPivLu().solve(b);
}

// Horner for p and p' together.
void horner(const std::vector<Complex>& c, Complex x, Complex& p, Complex& dp) {
  p = c.back();
  dp = 0.0;
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    dp = dp * x + p;
    p = p * x + c[i];
  }
}

// Gauss-Legendre nodes and weights on [0, 1].
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

Quadrature gauss_legendre(int m) {
  Quadrature q;
  for (int i = 1; i <= m; ++i) {
    double x = std::cos(std::numbers::pi * (i - 0.25) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    q.nodes.push_back(0.5 * (x + 1.0));
    q.weights.push_back(1.0 / ((1.0 - x * x) * dp * dp));
  }
  return q;
}

// Product-form Denman-Beavers iteration with determinant scaling.
ComplexMatrix principal_sqrt(const ComplexMatrix& a) {
  const auto n = a.rows();
  const ComplexMatrix id = identity(n);
  ComplexMatrix m = a;
  ComplexMatrix y = a;
  for (int it = 0; it < 100; ++it) {
    const ComplexMatrix m_inv = m.inverse();
    double mu = 1.0;
    if (it < 10) {
      const double det_abs = std::abs(m.determinant());
      if (det_abs > 0.0 && std::isfinite(det_abs)) mu = std::pow(det_abs, -1.0 / (2.0 * static_cast<double>(n)));
    }
    y = mu * y * (id + m_inv / (mu * mu)) * 0.5;
    m = 0.5 * (id + (mu * mu * m + m_inv / (mu * mu)) * 0.5);
    if (norm_inf(m - id) <= 10.0 * kEps * static_cast<double>(n)) return y;
  }
  // Accept the last iterate; callers re-verify through mat_exp.
  return y;
}

// log(I + X) for small X via Gauss-Legendre quadrature of the integral form.
ComplexMatrix log_near_identity(const ComplexMatrix& x) {
  static const Quadrature q = gauss_legendre(12);
  const ComplexMatrix id = identity(x.rows());
  ComplexMatrix result = ComplexMatrix::Zero(x.rows(), x.cols());
  for (std::size_t j = 0; j < q.nodes.size(); ++j) {
    result += q.weights[j] * solve(id + q.nodes[j] * x, x);
  }
  return result;
}

ComplexMatrix principal_log(const ComplexMatrix& a) {
  const ComplexMatrix id = identity(a.rows());
  ComplexMatrix r = a;
  int squarings = 0;
  while (norm_inf(r - id) > 0.25) {
    if (++squarings > 64) throw Error(ErrorCode::BranchFailure, "square-root cascade did not approach the identity");
    r = principal_sqrt(r);
    if (!r.allFinite()) throw Error(ErrorCode::BranchFailure, "square root diverged");
  }
  return std::ldexp(1.0, squarings) * log_near_identity(r - id);
}

}  // namespace

void ToleranceConfig::validate() const {
  for (double v : {rank_tol, cluster_tol, verify_tol, vanishing_tol}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "tolerances must be finite and strictly positive");
  }
}

PolyCoeffs::PolyCoeffs(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty() || coeffs_.back() != Complex{1.0}) {
    throw Error(ErrorCode::InvalidInput, "polynomial must be monic");
  }
  for (const auto& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw Error(ErrorCode::InvalidInput, "non-finite coefficient");
  }
}

PolyCoeffs PolyCoeffs::from_lower(std::span<const Complex> lower) {
  std::vector<Complex> c(lower.begin(), lower.end());
  c.emplace_back(1.0);
  return PolyCoeffs(std::move(c));
}

PolyCoeffs PolyCoeffs::from_roots(std::span<const Complex> roots) {
  std::vector<Complex> c{Complex{1.0}};
  for (const Complex& r : roots) {
    c.emplace_back(0.0);
    for (std::size_t i = c.size() - 1; i > 0; --i) c[i] = c[i - 1] - r * c[i];
    c[0] = -r * c[0];
  }
  return PolyCoeffs(std::move(c));
}

Complex PolyCoeffs::evaluate(Complex x) const noexcept {
  Complex p = coeffs_.back();
  for (std::size_t i = coeffs_.size() - 1; i-- > 0;) p = p * x + coeffs_[i];
  return p;
}

double PolyCoeffs::magnitude_at(Complex x) const noexcept {
  const double ax = std::abs(x);
  double p = std::abs(coeffs_.back());
  for (std::size_t i = coeffs_.size() - 1; i-- > 0;) p = p * ax + std::abs(coeffs_[i]);
  return p;
}

void require_finite(const ComplexMatrix& a, const char* what) {
  if (!a.allFinite()) throw Error(ErrorCode::InvalidInput, std::string(what) + " has non-finite entries");
}

void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " must be square with n >= 1");
  }
}

double norm_inf(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().rowwise().sum().maxCoeff();
}

PolyCoeffs char_poly(const ComplexMatrix& a) {
  require_square(a, "matrix");
  require_finite(a, "matrix");
  const auto n = static_cast<std::size_t>(a.rows());

  ComplexMatrix h = a;
  if (n > 2) h = Eigen::HessenbergDecomposition<ComplexMatrix>(a).matrixH();

  // La Budde recurrence on the upper Hessenberg form; p[k] = det(xI - H_k).
  std::vector<std::vector<Complex>> p(n + 1);
  p[0] = {Complex{1.0}};
  for (std::size_t k = 1; k <= n; ++k) {
    const auto kk = static_cast<Eigen::Index>(k - 1);
    std::vector<Complex> next(k + 1, Complex{0.0});
    for (std::size_t i = 0; i < k; ++i) {
      next[i + 1] += p[k - 1][i];
      next[i] -= h(kk, kk) * p[k - 1][i];
    }
    Complex subdiag_product{1.0};
    for (std::size_t i = k - 1; i-- > 0;) {
      const auto ii = static_cast<Eigen::Index>(i);
      subdiag_product *= h(ii + 1, ii);
      const Complex w = h(ii, kk) * subdiag_product;
      for (std::size_t j = 0; j < p[i].size(); ++j) next[j] -= w * p[i][j];
    }
    p[k] = std::move(next);
  }
  p[n].back() = Complex{1.0};
  return PolyCoeffs(std::move(p[n]));
}

std::vector<Complex> poly_roots(const PolyCoeffs& poly) {
  const auto& full = poly.coeffs();
  std::vector<Complex> roots;

  // Exact zero roots first.
  std::size_t zeros = 0;
  while (zeros + 1 < full.size() && full[zeros] == Complex{0.0}) ++zeros;
  roots.assign(zeros, Complex{0.0});
  const std::vector<Complex> c(full.begin() + static_cast<std::ptrdiff_t>(zeros), full.end());
  const std::size_t n = c.size() - 1;
  if (n == 0) return roots;
  if (n == 1) {
    roots.push_back(-c[0]);
    return roots;
  }

  // Start on a circle whose radius is the geometric root-size estimate.
  double radius = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    radius = std::max(radius, std::pow(std::abs(c[i]), 1.0 / static_cast<double>(n - i)));
  }
  radius = std::max(radius, std::pow(std::abs(c[0]), 1.0 / static_cast<double>(n)));
  std::vector<Complex> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
    z[k] = std::polar(radius, angle);
  }

  const PolyCoeffs reduced(c);
  std::vector<bool> done(n, false);
  constexpr int kMaxIterations = 2000;
  for (int it = 0; it < kMaxIterations; ++it) {
    bool all_done = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      Complex p, dp;
      horner(c, z[i], p, dp);
      if (std::abs(p) <= 4.0 * kEps * reduced.magnitude_at(z[i])) {
        done[i] = true;
        continue;
      }
      all_done = false;
      const Complex ratio = p / dp;
      Complex repulsion{0.0};
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) repulsion += 1.0 / (z[i] - z[j]);
      }
      const Complex step = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
        // Coincident iterates; nudge apart.
        z[i] += std::polar(1e-8 * std::max(radius, 1.0), 0.7 * static_cast<double>(i + 1));
        continue;
      }
      z[i] -= step;
      if (std::abs(step) <= kEps * std::abs(z[i])) done[i] = true;
    }
    if (all_done) break;
  }

  for (const Complex& r : z) {
    if (std::abs(reduced.evaluate(r)) > 1e-10 * reduced.magnitude_at(r)) {
      throw Error(ErrorCode::NonConvergence, "root iteration cap reached without backward-stable roots");
    }
  }
  roots.insert(roots.end(), z.begin(), z.end());
  return roots;
}

std::vector<double> singular_values(const ComplexMatrix& a) {
  if (a.size() == 0) return {};
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

std::size_t rank_tol(const ComplexMatrix& a, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidInput, "rank tolerance must be positive");
  const auto s = singular_values(a);
  if (s.empty() || s.front() == 0.0) return 0;
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [&](double v) { return v > tol * s.front(); }));
}

double reciprocal_condition(const ComplexMatrix& a) {
  const auto s = singular_values(a);
  if (s.empty() || s.front() == 0.0) return 0.0;
  return s.back() / s.front();
}

ComplexMatrix mat_exp(const ComplexMatrix& a) {
  require_square(a, "matrix");
  require_finite(a, "matrix");
  // Pade [13/13] with scaling and squaring.
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0, 129060195264000.0,
      10559470521600.0,    670442572800.0,      33522128640.0,      1323241920.0,       40840800.0,
      960960.0,            16380.0,             182.0,              1.0};
  constexpr double theta13 = 5.371920351148152;

  const auto n = a.rows();
  const double norm = norm_inf(a);
  int s = 0;
  if (norm > theta13) s = static_cast<int>(std::ceil(std::log2(norm / theta13)));
  const ComplexMatrix x = a / std::ldexp(1.0, s);

  const ComplexMatrix id = identity(n);
  const ComplexMatrix x2 = x * x;
  const ComplexMatrix x4 = x2 * x2;
  const ComplexMatrix x6 = x4 * x2;
  const ComplexMatrix u =
      x * (x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2) + b[7] * x6 + b[5] * x4 + b[3] * x2 + b[1] * id);
  const ComplexMatrix v = x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2) + b[6] * x6 + b[4] * x4 + b[2] * x2 + b[0] * id;
  ComplexMatrix r = solve(v - u, v + u);
  for (int i = 0; i < s; ++i) r = r * r;
  return r;
}

ComplexMatrix mat_log(const ComplexMatrix& t, double tol) {
  require_square(t, "matrix");
  require_finite(t, "matrix");
  if (reciprocal_condition(t) <= tol) throw Error(ErrorCode::Singular, "matrix logarithm of a singular matrix");

  std::vector<double> args;
  for (const Complex& r : poly_roots(char_poly(t))) args.push_back(std::arg(r));
  std::sort(args.begin(), args.end());

  // Largest angular gap between consecutive eigenvalue arguments.
  double best_gap = 2.0 * std::numbers::pi - (args.back() - args.front());
  double cut = args.back() + 0.5 * best_gap;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const double gap = args[i] - args[i - 1];
    if (gap > best_gap) {
      best_gap = gap;
      cut = args[i - 1] + 0.5 * gap;
    }
  }
  if (0.5 * best_gap < 1e-3) throw Error(ErrorCode::BranchFailure, "eigenvalue arguments leave no room for a branch cut");

  // Rotate so the chosen cut lands on the negative real axis.
  const double phi = cut - std::numbers::pi;
  const Complex rotation = std::polar(1.0, -phi);
  ComplexMatrix log = principal_log(rotation * t);
  log.diagonal().array() += Complex{0.0, phi};
  return log;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& c) {
  require_square(a, "left operand");
  require_square(c, "right operand");
  if (a.rows() != c.rows()) throw Error(ErrorCode::DimensionMismatch, "commutator operands differ in dimension");
  return a * c - c * a;
}

double spectral_radius(const ComplexMatrix& a) {
  double rho = 0.0;
  for (const Complex& r : poly_roots(char_poly(a))) rho = std::max(rho, std::abs(r));
  return rho;
}

}  // namespace speclift
