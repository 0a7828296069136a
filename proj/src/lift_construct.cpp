#include "speclift/lift_construct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/SVD>

#include "speclift/jordan_structure.hpp"
#include "speclift/projection.hpp"

namespace speclift {

namespace {

void require_same_square(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "left operand");
  require_square(b, "right operand");
  if (a.rows() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "operands differ in dimension");
}

// Pairs clusters of `b` with clusters of `c` by nearest centroid and demands
// identical block partitions.
void require_same_structure(const JordanStructure& sb, const JordanStructure& sc) {
  if (sb.clusters.size() != sc.clusters.size()) throw Error(ErrorCode::NotSimilar, "different numbers of eigenvalues");
  std::vector<bool> used(sc.clusters.size(), false);
  for (const auto& cb : sb.clusters) {
    std::size_t best = sc.clusters.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sc.clusters.size(); ++i) {
      const double d = std::abs(cb.cluster.value - sc.clusters[i].cluster.value);
      if (!used[i] && d < best_d) {
        best_d = d;
        best = i;
      }
    }
    if (best == sc.clusters.size() || best_d > 1e-6 * std::max(1.0, std::abs(cb.cluster.value))) {
      throw Error(ErrorCode::NotSimilar, "eigenvalues differ");
    }
    if (sc.clusters[best].partition != cb.partition) throw Error(ErrorCode::NotSimilar, "Jordan partitions differ");
    used[best] = true;
  }
}

ComplexMatrix companion_at(const ConjugatedCompanion& map, Complex v) {
  SymPoint y;
  for (const auto& component : map.f) y.y.push_back(eval_polynomial(component, v - map.center));
  return companion(y);
}

// S Z with Z a polynomial in C (so S Z still conjugates C to the same
// target) chosen to bring S Z closest to the identity in Frobenius norm.
// Keeps the logarithms of conjugators small.
ComplexMatrix nearest_to_identity(const ComplexMatrix& s, const ComplexMatrix& c, double rank_tol) {
  const auto n = s.rows();
  ComplexMatrix system(n * n, n);
  ComplexMatrix power = ComplexMatrix::Identity(n, n);
  std::vector<ComplexMatrix> powers;
  for (Eigen::Index k = 0; k < n; ++k) {
    system.col(k) = (s * power).reshaped();
    powers.push_back(power);
    power = power * c;
  }
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexVector z = system.colPivHouseholderQr().solve(ComplexVector(id.reshaped()));
  ComplexMatrix zc = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) zc += z(k) * powers[static_cast<std::size_t>(k)];
  const ComplexMatrix t = s * zc;
  if (!t.allFinite() || reciprocal_condition(t) <= rank_tol) return s;
  return t;
}

}  // namespace

ComplexMatrix spray(const ComplexMatrix& b, const ComplexMatrix& a) {
  require_same_square(b, a);
  return mat_exp(b) * a * mat_exp(-b);
}

ComplexMatrix spray_derivative(const ComplexMatrix& a, const ComplexMatrix& c) {
  require_same_square(a, c);
  return commutator(c, a);
}

std::size_t centralizer_dimension(const JordanStructure& s) {
  std::size_t dim = 0;
  for (const auto& c : s.clusters) {
    for (std::size_t i = 0; i < c.partition.size(); ++i) dim += (2 * i + 1) * c.partition[i];
  }
  return dim;
}

ComplexMatrix similarity_transform(const ComplexMatrix& b, const ComplexMatrix& c, const ToleranceConfig& tol,
                                   std::uint64_t seed) {
  require_same_square(b, c);
  require_finite(b, "matrix");
  require_finite(c, "matrix");
  const auto n = b.rows();
  if (b == c) return ComplexMatrix::Identity(n, n);

  const JordanStructure sb = jordan_structure(b, tol);
  require_same_structure(sb, jordan_structure(c, tol));
  const auto null_dim = static_cast<Eigen::Index>(centralizer_dimension(sb));

  // Column-major vec: vec(C X - X B) = (I (x) C - B^T (x) I) vec X.
  const auto nn = n * n;
  ComplexMatrix op = ComplexMatrix::Zero(nn, nn);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = 0; k < n; ++k) {
        op(i + n * j, k + n * j) += c(i, k);
        op(i + n * j, i + n * k) -= b(k, j);
      }
    }
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(op, Eigen::ComputeFullV);
  const ComplexMatrix basis = svd.matrixV().rightCols(null_dim);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ComplexMatrix best;
  double best_rcond = 0.0;
  constexpr int kMaxDraws = 64;
  constexpr int kMinDraws = 16;
  for (int draw = 0; draw < kMaxDraws; ++draw) {
    ComplexVector weights(null_dim);
    for (auto& w : weights) w = Complex{normal(rng), normal(rng)};
    const ComplexVector x = basis * weights;
    const ComplexMatrix candidate = Eigen::Map<const ComplexMatrix>(x.data(), n, n);
    const double rcond = reciprocal_condition(candidate);
    if (rcond > best_rcond) {
      best_rcond = rcond;
      best = candidate;
    }
    if (draw + 1 >= kMinDraws && best_rcond > tol.rank_tol) break;
  }
  if (best_rcond <= tol.rank_tol) throw Error(ErrorCode::NoInvertibleSolution, "no invertible solution among random draws");
  return best;
}

MatrixInterpolant::MatrixInterpolant(std::vector<Complex> nodes, std::vector<ComplexMatrix> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  if (nodes_.empty() || nodes_.size() != values_.size()) throw Error(ErrorCode::InvalidInput, "interpolation data mismatch");
  weights_.assign(nodes_.size(), Complex{1.0});
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      if (k == j) continue;
      if (nodes_[j] == nodes_[k]) throw Error(ErrorCode::NodeCollision, "interpolation nodes coincide");
      weights_[j] /= nodes_[j] - nodes_[k];
    }
  }
}

ComplexMatrix MatrixInterpolant::operator()(Complex v) const {
  ComplexMatrix num = ComplexMatrix::Zero(values_.front().rows(), values_.front().cols());
  Complex den{0.0};
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    if (v == nodes_[j]) return values_[j];
    const Complex w = weights_[j] / (v - nodes_[j]);
    num += w * values_[j];
    den += w;
  }
  return num / den;
}

ComplexMatrix evaluate(const HoloMatrixMap& map, Complex v) {
  if (const auto* poly = std::get_if<PolynomialMatrix>(&map)) {
    if (poly->coeffs.empty()) throw Error(ErrorCode::InvalidInput, "empty polynomial matrix");
    ComplexMatrix acc = poly->coeffs.back();
    for (std::size_t k = poly->coeffs.size() - 1; k-- > 0;) acc = acc * v + poly->coeffs[k];
    return acc;
  }
  const auto& cc = std::get<ConjugatedCompanion>(map);
  const ComplexMatrix comp = companion_at(cc, v);
  if (const auto* fixed = std::get_if<ConstantConjugator>(&cc.conjugator)) return fixed->s * comp * fixed->s_inv;
  const ComplexMatrix g = std::get<ExpConjugator>(cc.conjugator).generator(v);
  return mat_exp(g) * comp * mat_exp(-g);
}

LiftInstance single_node_instance(const ComplexMatrix& m, const std::vector<Jet>& fjets, Complex p) {
  LiftInstance inst;
  inst.nodes = {p};
  inst.matrices = {m};
  for (const Jet& j : fjets) {
    // Expand sum c_i (v - p)^i into ascending powers of v.
    std::vector<Complex> coeffs(j.order(), Complex{0.0});
    std::vector<Complex> power{Complex{1.0}};
    for (std::size_t i = 0; i < j.order(); ++i) {
      for (std::size_t k = 0; k < power.size(); ++k) coeffs[k] += j[i] * power[k];
      std::vector<Complex> next(power.size() + 1, Complex{0.0});
      for (std::size_t k = 0; k < power.size(); ++k) {
        next[k + 1] += power[k];
        next[k] -= p * power[k];
      }
      power = std::move(next);
    }
    inst.f.push_back(std::move(coeffs));
  }
  return inst;
}

HoloMatrixMap local_cyclic_lift(const ComplexMatrix& m, const std::vector<Jet>& fjets, Complex p,
                                const ToleranceConfig& tol, std::uint64_t seed) {
  tol.validate();
  require_square(m, "target matrix");
  if (fjets.size() != static_cast<std::size_t>(m.rows())) throw Error(ErrorCode::DimensionMismatch, "jet count differs from n");
  for (const Jet& j : fjets) {
    if (j.base() != p) throw Error(ErrorCode::BaseMismatch, "jets must be centered at the node");
  }
  if (!is_cyclic(m, tol)) throw Error(ErrorCode::NotCyclic, "target matrix is not cyclic");

  const SymPoint pi_m = project(m);
  SymPoint constants;
  for (const Jet& j : fjets) constants.y.push_back(j[0]);
  if (consistency_residual(pi_m, constants) > tol.verify_tol) {
    throw Error(ErrorCode::InvalidInput, "jet constants differ from pi(M)");
  }

  ConjugatedCompanion map;
  map.center = p;
  for (const Jet& j : fjets) map.f.push_back(j.coeffs());
  const ComplexMatrix c = companion(pi_m);
  const ComplexMatrix s = nearest_to_identity(similarity_transform(c, m, tol, seed), c, tol.rank_tol);
  map.conjugator = ConstantConjugator{s, s.inverse()};
  return map;
}

HoloMatrixMap global_cyclic_lift(const LiftInstance& instance, const ToleranceConfig& tol, std::uint64_t seed) {
  instance.validate(tol);
  const auto n = static_cast<Eigen::Index>(instance.dim());
  std::vector<ComplexMatrix> logs;
  for (std::size_t j = 0; j < instance.nodes.size(); ++j) {
    const ComplexMatrix& target = instance.matrices[j];
    if (!is_cyclic(target, tol)) throw Error(ErrorCode::NotCyclic, "matrix " + std::to_string(j) + " is not cyclic");
    const ComplexMatrix c = companion(instance.f_at(instance.nodes[j]));
    const ComplexMatrix t = nearest_to_identity(similarity_transform(c, target, tol, seed + j), c, tol.rank_tol);
    ComplexMatrix g = mat_log(t, tol.rank_tol);
    // Scalar parts act trivially by conjugation.
    g.diagonal().array() -= g.trace() / static_cast<double>(n);
    logs.push_back(std::move(g));
  }
  ConjugatedCompanion map;
  map.f = instance.f;
  map.conjugator = ExpConjugator{MatrixInterpolant(instance.nodes, std::move(logs))};
  return map;
}

std::vector<std::string> interpolation_warnings(std::span<const Complex> nodes) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (std::abs(nodes[i] - nodes[j]) < 1e-3) {
        out.push_back("nodes " + std::to_string(i) + " and " + std::to_string(j) +
                      " are closer than 1e-3; interpolated conjugator may be ill-conditioned");
      }
    }
  }
  return out;
}

ComplexMatrix LinePath::apply(const ComplexMatrix& b, std::span<const double> t) const {
  if (t.size() != factors.size()) throw Error(ErrorCode::DimensionMismatch, "one time parameter per factor");
  const auto n = b.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  ComplexMatrix p = b;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    p = (id + t[i] * factors[i]) * p * (id - t[i] * factors[i]);
  }
  return p;
}

ComplexMatrix LinePath::endpoint(const ComplexMatrix& b) const {
  const std::vector<double> ones(factors.size(), 1.0);
  return apply(b, ones);
}

ComplexMatrix LinePath::product() const {
  if (factors.empty()) return ComplexMatrix::Identity(1, 1);
  const auto n = factors.front().rows();
  ComplexMatrix acc = ComplexMatrix::Identity(n, n);
  for (const auto& f : factors) acc = (ComplexMatrix::Identity(n, n) + f) * acc;
  return acc;
}

LinePath transvection_factorization(const ComplexMatrix& t, double rank_tol) {
  require_square(t, "matrix");
  require_finite(t, "matrix");
  if (reciprocal_condition(t) <= rank_tol) throw Error(ErrorCode::Singular, "shear factorization of a singular matrix");
  const auto n = t.rows();

  LinePath path;
  const Complex det = t.determinant();
  path.mu = std::polar(std::pow(std::abs(det), 1.0 / static_cast<double>(n)), std::arg(det) / static_cast<double>(n));
  ComplexMatrix s = t / path.mu;

  // Row shears row_i += c row_j reduce s to the identity; their inverses,
  // in reverse, rebuild it.
  struct Shear {
    Eigen::Index row, col;
    Complex c;
  };
  std::vector<Shear> ops;
  auto apply = [&](Eigen::Index i, Eigen::Index j, Complex c) {
    s.row(i) += c * s.row(j);
    ops.push_back({i, j, c});
  };

  for (Eigen::Index k = 0; k < n; ++k) {
    if (k + 1 < n && s(k, k) != Complex{1.0}) {
      Eigen::Index r = k + 1;
      for (Eigen::Index i = k + 2; i < n; ++i) {
        if (std::abs(s(i, k)) > std::abs(s(r, k))) r = i;
      }
      if (s(r, k) == Complex{0.0}) apply(r, k, 1.0);
      apply(k, r, (1.0 - s(k, k)) / s(r, k));
    }
    // det s = 1 fixes the last pivot; rounding is absorbed here.
    s(k, k) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == k || s(i, k) == Complex{0.0}) continue;
      apply(i, k, -s(i, k));
      s(i, k) = 0.0;
    }
  }

  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    ComplexMatrix factor = ComplexMatrix::Zero(n, n);
    factor(it->row, it->col) = -it->c;
    path.factors.push_back(std::move(factor));
  }
  return path;
}

LinePath connect_similar(const ComplexMatrix& b, const ComplexMatrix& c, const ToleranceConfig& tol, std::uint64_t seed) {
  const ComplexMatrix t = similarity_transform(b, c, tol, seed);
  return transvection_factorization(t, tol.rank_tol);
}

bool exactly_nilpotent(const ComplexMatrix& n) {
  ComplexMatrix p = n;
  for (Eigen::Index i = 1; i < n.rows(); ++i) p = p * n;
  return (p.array() == Complex{0.0}).all();
}

LiftVerification verify_lift(const HoloMatrixMap& map, const LiftInstance& instance, std::size_t samples, double tol,
                             double radius) {
  LiftVerification out;
  out.samples = samples;
  out.sample_radius = radius;
  out.tol = tol;
  for (std::size_t j = 0; j < instance.nodes.size(); ++j) {
    const ComplexMatrix& a = instance.matrices[j];
    const ComplexMatrix f = evaluate(map, instance.nodes[j]);
    if (f.rows() != a.rows() || f.cols() != a.cols()) {
      out.node_residual = std::numeric_limits<double>::infinity();
      continue;
    }
    out.node_residual = std::max(out.node_residual, norm_inf(f - a) / std::max(1.0, norm_inf(a)));
  }
  for (const Complex& v : disc_samples(samples, radius)) {
    const ComplexMatrix f = evaluate(map, v);
    out.projection_residual = std::max(out.projection_residual, consistency_residual(instance.f_at(v), project(f)));
    const Membership m = in_spectral_ball(f);
    out.min_ball_margin = std::min(out.min_ball_margin, m.margin);
    out.all_in_ball = out.all_in_ball && m.inside;
  }
  out.pass = out.node_residual <= tol && out.projection_residual <= tol && out.all_in_ball;
  return out;
}

}  // namespace speclift
