#pragma once

// Constructive liftings through the eigenvalue projection for cyclic data,
// conjugation sprays, and shear paths inside similarity orbits.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "speclift/jets.hpp"
#include "speclift/jordan_structure.hpp"
#include "speclift/lift_instance.hpp"
#include "speclift/matrix_core.hpp"

namespace speclift {

/// exp(B) A exp(-B).
ComplexMatrix spray(const ComplexMatrix& b, const ComplexMatrix& a);

/// d/dt spray(tC, A) at t = 0, which is [C, A].
ComplexMatrix spray_derivative(const ComplexMatrix& a, const ComplexMatrix& c);

/// Invertible T with T B T^-1 = C, drawn from the solution space of
/// C X - X B = 0. Throws NotSimilar or NoInvertibleSolution.
ComplexMatrix similarity_transform(const ComplexMatrix& b, const ComplexMatrix& c, const ToleranceConfig& tol = {},
                                   std::uint64_t seed = 0);

/// Dimension of the centralizer, sum over eigenvalues of sum_i (2i - 1) m_i.
std::size_t centralizer_dimension(const JordanStructure& s);

/// Matrix-valued barycentric Lagrange interpolant.
class MatrixInterpolant {
 public:
  MatrixInterpolant(std::vector<Complex> nodes, std::vector<ComplexMatrix> values);

  ComplexMatrix operator()(Complex v) const;
  const std::vector<Complex>& nodes() const noexcept { return nodes_; }
  const std::vector<ComplexMatrix>& values() const noexcept { return values_; }

 private:
  std::vector<Complex> nodes_;
  std::vector<ComplexMatrix> values_;
  std::vector<Complex> weights_;
};

/// Entries are polynomials: F(v) = sum_k coeffs[k] v^k.
struct PolynomialMatrix {
  std::vector<ComplexMatrix> coeffs;
};

/// v -> S companion(f(v)) S^-1 with fixed S.
struct ConstantConjugator {
  ComplexMatrix s;
  ComplexMatrix s_inv;
};

/// v -> exp(G(v)) companion(f(v)) exp(-G(v)), G interpolating logarithms.
struct ExpConjugator {
  MatrixInterpolant generator;
};

struct ConjugatedCompanion {
  Complex center{0.0};                     // f components are polynomials in (v - center)
  std::vector<std::vector<Complex>> f;
  std::variant<ConstantConjugator, ExpConjugator> conjugator;
};

using HoloMatrixMap = std::variant<PolynomialMatrix, ConjugatedCompanion>;

ComplexMatrix evaluate(const HoloMatrixMap& map, Complex v);

LiftInstance single_node_instance(const ComplexMatrix& m, const std::vector<Jet>& fjets, Complex p);

/// F with F(p) = M and pi o F = f for cyclic M. Throws NotCyclic.
HoloMatrixMap local_cyclic_lift(const ComplexMatrix& m, const std::vector<Jet>& fjets, Complex p,
                                const ToleranceConfig& tol = {}, std::uint64_t seed = 0);

/// F with F(a_j) = A_j and pi o F = f when every A_j is cyclic.
HoloMatrixMap global_cyclic_lift(const LiftInstance& instance, const ToleranceConfig& tol = {}, std::uint64_t seed = 0);

/// Warnings about interpolation conditioning (node separation below 1e-3).
std::vector<std::string> interpolation_warnings(std::span<const Complex> nodes);

/// exp(N_s) ... exp(N_1) = T / mu with each N_i a single off-diagonal entry.
struct LinePath {
  Complex mu{1.0};
  std::vector<ComplexMatrix> factors;  // N_1 .. N_s

  /// exp(t_s N_s)...exp(t_1 N_1) B exp(-t_1 N_1)...exp(-t_s N_s).
  ComplexMatrix apply(const ComplexMatrix& b, std::span<const double> t) const;
  ComplexMatrix endpoint(const ComplexMatrix& b) const;
  /// exp(N_s)...exp(N_1).
  ComplexMatrix product() const;
};

LinePath transvection_factorization(const ComplexMatrix& t, double rank_tol = 1e-8);

/// Path whose endpoint conjugation carries B to C.
LinePath connect_similar(const ComplexMatrix& b, const ComplexMatrix& c, const ToleranceConfig& tol = {},
                         std::uint64_t seed = 0);

/// True iff N^n == 0 in exact floating arithmetic.
bool exactly_nilpotent(const ComplexMatrix& n);

struct LiftVerification {
  double node_residual = 0.0;        // max_j |F(a_j) - A_j|_inf / max(1, |A_j|_inf)
  double projection_residual = 0.0;  // max over samples of |pi(F(v)) - f(v)| relative
  double min_ball_margin = 1.0;      // min over samples of 1 - rho(F(v))
  bool all_in_ball = true;
  std::size_t samples = 0;
  double sample_radius = 0.0;
  double tol = 0.0;
  bool pass = false;
};

inline constexpr double kDefaultSampleRadius = 0.95;

LiftVerification verify_lift(const HoloMatrixMap& map, const LiftInstance& instance, std::size_t samples, double tol,
                             double radius = kDefaultSampleRadius);

}  // namespace speclift
