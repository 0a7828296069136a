#include "speclift/jordan_structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/SVD>

namespace speclift {

namespace {

// Union of root indices per group.
using Grouping = std::vector<std::vector<std::size_t>>;

// Complete-linkage dendrogram, then the maximal subtrees whose diameter fits
// the reach of a multiple root of their size.
Grouping group_roots(std::span<const Complex> roots, double tol) {
  double scale = 1.0;
  for (const Complex& r : roots) scale = std::max(scale, std::abs(r));
  auto reach = [&](std::size_t k) { return scale * std::pow(tol, 1.0 / static_cast<double>(k)); };

  struct Node {
    std::vector<std::size_t> members;
    double diameter = 0.0;
    int left = -1, right = -1;
  };
  std::vector<Node> nodes;
  std::vector<int> active;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    nodes.push_back({{i}, 0.0, -1, -1});
    active.push_back(static_cast<int>(i));
  }
  auto union_diameter = [&](const Node& a, const Node& b) {
    double d = std::max(a.diameter, b.diameter);
    for (std::size_t i : a.members)
      for (std::size_t j : b.members) d = std::max(d, std::abs(roots[i] - roots[j]));
    return d;
  };
  while (active.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t ba = 0, bb = 1;
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const double d = union_diameter(nodes[static_cast<std::size_t>(active[a])], nodes[static_cast<std::size_t>(active[b])]);
        if (d < best) {
          best = d;
          ba = a;
          bb = b;
        }
      }
    }
    Node merged;
    merged.left = active[ba];
    merged.right = active[bb];
    merged.members = nodes[static_cast<std::size_t>(merged.left)].members;
    const auto& rm = nodes[static_cast<std::size_t>(merged.right)].members;
    merged.members.insert(merged.members.end(), rm.begin(), rm.end());
    merged.diameter = best;
    nodes.push_back(std::move(merged));
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bb));
    active[ba] = static_cast<int>(nodes.size() - 1);
  }

  Grouping groups;
  std::vector<int> stack;
  if (!active.empty()) stack.push_back(active.front());
  while (!stack.empty()) {
    const Node& node = nodes[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    if (node.left < 0 || node.diameter <= reach(node.members.size())) {
      groups.push_back(node.members);
    } else {
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  for (auto& g : groups) std::sort(g.begin(), g.end());
  std::sort(groups.begin(), groups.end());
  return groups;
}

}  // namespace

std::size_t JordanStructure::dim() const noexcept {
  std::size_t n = 0;
  for (const auto& c : clusters) n += c.cluster.multiplicity;
  return n;
}

JordanStructure JordanStructure::restricted_to(std::size_t index) const {
  return JordanStructure{{clusters.at(index)}};
}

std::vector<EigenCluster> cluster_eigenvalues(std::span<const Complex> roots, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidInput, "cluster tolerance must be positive");
  const Grouping groups = group_roots(roots, tol);
  if (groups != group_roots(roots, 2.0 * tol)) {
    throw Error(ErrorCode::AmbiguousClustering, "eigenvalue clusters change between tol and 2*tol");
  }
  std::vector<EigenCluster> clusters;
  for (const auto& g : groups) {
    Complex sum{0.0};
    for (std::size_t i : g) sum += roots[i];
    clusters.push_back({sum / static_cast<double>(g.size()), g.size()});
  }
  std::sort(clusters.begin(), clusters.end(), [](const EigenCluster& a, const EigenCluster& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return clusters;
}

std::vector<std::size_t> weyr(const ComplexMatrix& a, Complex lambda, double tol) {
  require_square(a, "matrix");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidInput, "rank tolerance must be positive");
  const auto n = a.rows();
  ComplexMatrix shifted = a;
  shifted.diagonal().array() -= lambda;
  // Scale: the larger of |A| and |A - lambda| (spectral norms).
  const double scale = std::max(singular_values(a).front(), singular_values(shifted).front());
  const double threshold = tol * scale;

  // Staircase: rank (A - lambda)^k = rank of (A - lambda) applied to an
  // orthonormal basis of range (A - lambda)^(k-1), judged against |A - lambda|.
  std::vector<std::size_t> w;
  ComplexMatrix range = ComplexMatrix::Identity(n, n);
  std::size_t previous = 0;
  for (Eigen::Index k = 1; k <= n && range.cols() > 0; ++k) {
    const ComplexMatrix image = shifted * range;
    Eigen::JacobiSVD<ComplexMatrix> svd(image, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) > threshold) ++rank;
    range = svd.matrixU().leftCols(rank);

    const std::size_t nullity = static_cast<std::size_t>(n - rank);
    if (nullity < previous) throw Error(ErrorCode::InconsistentRanks, "nullity decreased along the power chain");
    const std::size_t increment = nullity - previous;
    if (increment == 0) break;
    if (!w.empty() && increment > w.back()) {
      throw Error(ErrorCode::InconsistentRanks, "Weyr characteristic is not nonincreasing");
    }
    w.push_back(increment);
    previous = nullity;
  }
  return w;
}

Complex refine_centroid(const PolyCoeffs& p, const EigenCluster& cluster, double cluster_tol) {
  const std::size_t k = cluster.multiplicity;
  if (k < 2 || k > p.degree()) return cluster.value;
  // A k-fold root of p is a simple root of its (k-1)-th derivative.
  std::vector<Complex> d(p.coeffs());
  for (std::size_t order = 0; order + 1 < k; ++order) {
    for (std::size_t i = 1; i < d.size(); ++i) d[i - 1] = static_cast<double>(i) * d[i];
    d.pop_back();
  }
  std::vector<Complex> dd(d.size() - 1);
  for (std::size_t i = 1; i < d.size(); ++i) dd[i - 1] = static_cast<double>(i) * d[i];

  auto eval = [](const std::vector<Complex>& c, Complex x) {
    Complex acc{0.0};
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
  };
  Complex x = cluster.value;
  for (int it = 0; it < 8; ++it) {
    const Complex slope = eval(dd, x);
    if (slope == Complex{0.0}) break;
    const Complex step = eval(d, x) / slope;
    x -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) break;
  }
  // Keep the plain centroid if Newton wandered off the cluster.
  const double reach = std::max(1.0, std::abs(cluster.value)) * std::pow(cluster_tol, 1.0 / static_cast<double>(k));
  if (!std::isfinite(x.real()) || !std::isfinite(x.imag()) || std::abs(x - cluster.value) > reach) {
    return cluster.value;
  }
  return x;
}

Partition conjugate_partition(std::span<const std::size_t> p) {
  Partition out;
  if (p.empty()) return out;
  const std::size_t largest = *std::max_element(p.begin(), p.end());
  for (std::size_t k = 1; k <= largest; ++k) {
    out.push_back(static_cast<std::size_t>(std::count_if(p.begin(), p.end(), [k](std::size_t v) { return v >= k; })));
  }
  return out;
}

Partition jordan_partition(const ComplexMatrix& a, Complex lambda, double tol) {
  const auto w = weyr(a, lambda, tol);
  return conjugate_partition(w);
}

JordanStructure jordan_structure(const ComplexMatrix& a, const ToleranceConfig& tol) {
  tol.validate();
  const PolyCoeffs chi = char_poly(a);
  const auto roots = poly_roots(chi);
  JordanStructure s;
  for (EigenCluster c : cluster_eigenvalues(roots, tol.cluster_tol)) {
    c.value = refine_centroid(chi, c, tol.cluster_tol);
    Partition p = jordan_partition(a, c.value, tol.rank_tol);
    const std::size_t total = std::accumulate(p.begin(), p.end(), std::size_t{0});
    if (total != c.multiplicity) {
      throw Error(ErrorCode::StructureFailure, "Jordan blocks at a cluster do not match its algebraic multiplicity");
    }
    s.clusters.push_back({c, std::move(p)});
  }
  return s;
}

bool is_cyclic(const JordanStructure& s) noexcept {
  return std::all_of(s.clusters.begin(), s.clusters.end(), [](const ClusterStructure& c) { return c.partition.size() == 1; });
}

bool is_cyclic(const ComplexMatrix& a, const ToleranceConfig& tol) { return is_cyclic(jordan_structure(a, tol)); }

DSequence d_sequence(const JordanStructure& s) {
  const std::size_t n = s.dim();
  // reach[d] = sum over clusters of the d largest blocks.
  std::vector<std::size_t> reach(n + 1, 0);
  for (const auto& c : s.clusters) {
    std::size_t acc = 0;
    for (std::size_t d = 1; d <= n; ++d) {
      if (d <= c.partition.size()) acc += c.partition[d - 1];
      reach[d] += acc;
    }
  }
  DSequence out(n);
  std::size_t d = 1;
  for (std::size_t l = 1; l <= n; ++l) {
    while (reach[d] < l) ++d;
    out[l - 1] = d;
  }
  return out;
}

std::size_t d_oracle(const ComplexMatrix& b, std::size_t l, std::size_t trials, std::uint64_t seed) {
  require_square(b, "matrix");
  const auto n = static_cast<std::size_t>(b.rows());
  if (l < 1 || l > n) throw Error(ErrorCode::InvalidInput, "span dimension out of range");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;

  for (std::size_t d = 1; d <= n; ++d) {
    for (std::size_t t = 0; t < std::max<std::size_t>(trials, 1); ++t) {
      ComplexMatrix krylov(b.rows(), static_cast<Eigen::Index>(d * n));
      Eigen::Index col = 0;
      for (std::size_t i = 0; i < d; ++i) {
        ComplexVector v(b.rows());
        for (auto& x : v) x = Complex{normal(rng), normal(rng)};
        for (std::size_t k = 0; k < n; ++k) {
          const double norm = v.norm();
          if (norm > 0.0) v /= norm;
          krylov.col(col++) = v;
          v = b * v;
        }
      }
      if (rank_tol(krylov, 1e-8) >= l) return d;
    }
  }
  return n;
}

ComplexMatrix jordan_form_matrix(const JordanStructure& s) {
  const auto n = static_cast<Eigen::Index>(s.dim());
  ComplexMatrix j = ComplexMatrix::Zero(n, n);
  Eigen::Index offset = 0;
  for (const auto& c : s.clusters) {
    for (std::size_t block : c.partition) {
      for (std::size_t i = 0; i < block; ++i) {
        const auto r = offset + static_cast<Eigen::Index>(i);
        j(r, r) = c.cluster.value;
        if (i + 1 < block) j(r, r + 1) = 1.0;
      }
      offset += static_cast<Eigen::Index>(block);
    }
  }
  return j;
}

}  // namespace speclift
