#include "speclift/local_lift_check.hpp"

#include <algorithm>
#include <cmath>

namespace speclift {

namespace {

double falling_factorial(std::size_t m, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 0; i < k; ++i) r *= static_cast<double>(m - i);
  return r;
}

Complex ipow(Complex x, std::size_t e) {
  Complex r{1.0};
  for (std::size_t i = 0; i < e; ++i) r *= x;
  return r;
}

// Same expansion as chi_derivative_jet with every term replaced by its
// modulus; its largest coefficient is the noise scale for vanishing orders.
double chi_derivative_scale(const std::vector<Jet>& fjets, Complex lambda, std::size_t k) {
  const std::size_t n = fjets.size();
  const double al = std::abs(lambda);
  std::vector<double> acc(fjets.front().order(), 0.0);
  acc[0] = falling_factorial(n, k) * std::pow(al, static_cast<double>(n - k));
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t m = n - j;
    if (m < k) continue;
    const double w = falling_factorial(m, k) * std::pow(al, static_cast<double>(m - k));
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * std::abs(fjets[j - 1][i]);
  }
  return std::max(1.0, *std::max_element(acc.begin(), acc.end()));
}

void require_jets(const LocalProblem& problem) {
  const std::size_t n = problem.fjets.size();
  if (n < 1) throw Error(ErrorCode::InvalidInput, "no component jets");
  if (problem.m.rows() != static_cast<Eigen::Index>(n) || problem.m.cols() != static_cast<Eigen::Index>(n)) {
    throw Error(ErrorCode::DimensionMismatch, "target matrix does not match the number of components");
  }
  for (const Jet& j : problem.fjets) {
    if (j.base() != problem.p || j.order() != problem.fjets.front().order()) {
      throw Error(ErrorCode::BaseMismatch, "component jets must share the node and truncation");
    }
  }
}

}  // namespace

const char* to_string(BlockReading r) noexcept { return r == BlockReading::Grouped ? "grouped" : "per-block"; }

BlockReading parse_block_reading(const std::string& s) {
  if (s == "grouped") return BlockReading::Grouped;
  if (s == "per-block") return BlockReading::PerBlock;
  throw Error(ErrorCode::InvalidInput, "reading must be \"grouped\" or \"per-block\"");
}

Jet chi_derivative_jet(const std::vector<Jet>& fjets, Complex lambda, std::size_t k) {
  const std::size_t n = fjets.size();
  if (n < 1) throw Error(ErrorCode::InvalidInput, "no component jets");
  if (k > n) throw Error(ErrorCode::InvalidInput, "derivative order exceeds the degree");
  Jet out(fjets.front().base(), fjets.front().order());
  out[0] = falling_factorial(n, k) * ipow(lambda, n - k);
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t m = n - j;
    if (m < k) continue;
    const Complex w = (j % 2 == 0 ? 1.0 : -1.0) * falling_factorial(m, k) * ipow(lambda, m - k);
    out = jet_add(out, jet_scale(w, fjets[j - 1]));
  }
  return out;
}

bool check_consistency(const LocalProblem& problem, const ToleranceConfig& tol) {
  require_jets(problem);
  SymPoint constants;
  for (const Jet& j : problem.fjets) constants.y.push_back(j[0]);
  return consistency_residual(project(problem.m), constants) <= tol.verify_tol;
}

LocalReport check_local(const LocalProblem& problem, BlockReading reading, const ToleranceConfig& tol) {
  tol.validate();
  require_jets(problem);
  require_finite(problem.m, "target matrix");
  const std::size_t n = problem.fjets.size();
  if (!in_spectral_ball(problem.m).inside) throw Error(ErrorCode::DomainViolation, "target matrix is not in the spectral ball");
  if (problem.fjets.front().order() <= n) {
    throw Error(ErrorCode::InvalidInput, "jet truncation must exceed the dimension");
  }

  LocalReport report;
  report.reading = reading;
  report.thresholds = tol;
  report.truncation = problem.fjets.front().order();

  const SymPoint pi_m = project(problem.m);
  SymPoint constants;
  for (const Jet& j : problem.fjets) constants.y.push_back(j[0]);
  report.consistency_residual = consistency_residual(pi_m, constants);
  report.consistent = report.consistency_residual <= tol.verify_tol;
  if (!report.consistent) return report;

  // Constants agree with pi(M) up to verify_tol; pin them exactly so the
  // order-0 test measures the data rather than that slack.
  std::vector<Jet> jets = problem.fjets;
  for (std::size_t i = 0; i < n; ++i) jets[i][0] = pi_m.y[i];

  report.structure = jordan_structure(problem.m, tol);
  const auto& clusters = report.structure.clusters;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const Complex lambda = clusters[c].cluster.value;
    std::vector<JordanStructure> groups;
    if (reading == BlockReading::Grouped) {
      groups.push_back(report.structure.restricted_to(c));
    } else {
      for (std::size_t size : clusters[c].partition) groups.push_back(JordanStructure{{ClusterStructure{{lambda, size}, {size}}}});
    }
    for (std::size_t b = 0; b < groups.size(); ++b) {
      const DSequence d = d_sequence(groups[b]);
      const std::size_t size = groups[b].dim();
      for (std::size_t k = 0; k < size; ++k) {
        CriterionRow row;
        row.cluster = c;
        row.block = b;
        row.k = k;
        row.required = d[size - k - 1];
        row.observed =
            vanishing_order(chi_derivative_jet(jets, lambda, k), tol.vanishing_tol, chi_derivative_scale(jets, lambda, k));
        row.pass = !row.observed || *row.observed >= row.required;
        report.rows.push_back(row);
      }
    }
  }
  report.pass = std::all_of(report.rows.begin(), report.rows.end(), [](const CriterionRow& r) { return r.pass; });
  return report;
}

std::size_t default_truncation(std::size_t n) noexcept { return 2 * n + 2; }

std::vector<Jet> node_jets(const LiftInstance& instance, std::size_t index) {
  const Complex a = instance.nodes.at(index);
  const std::size_t order = default_truncation(instance.dim());
  std::vector<Jet> jets;
  for (const auto& component : instance.f) jets.push_back(from_polynomial(component, a, order));
  return jets;
}

GlobalVerdict check_global(const LiftInstance& instance, BlockReading reading, const ToleranceConfig& tol,
                           std::size_t membership_samples) {
  instance.validate(tol);
  GlobalVerdict verdict;
  verdict.truncation = default_truncation(instance.dim());

  std::size_t outside = 0;
  for (const Complex& v : disc_samples(membership_samples, 0.99)) {
    if (!in_symmetrized_polydisc(instance.f_at(v)).inside) ++outside;
  }
  if (outside > 0) {
    verdict.warnings.push_back("DomainViolation: f leaves the symmetrized polydisc at " + std::to_string(outside) + " of " +
                               std::to_string(membership_samples) + " sampled disc points");
  }

  for (std::size_t j = 0; j < instance.nodes.size(); ++j) {
    const LocalProblem problem{instance.nodes[j], instance.matrices[j], node_jets(instance, j)};
    verdict.nodes.push_back(check_local(problem, reading, tol));
  }
  verdict.solvable = std::all_of(verdict.nodes.begin(), verdict.nodes.end(), [](const LocalReport& r) { return r.pass; });
  return verdict;
}

}  // namespace speclift
