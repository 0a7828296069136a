#pragma once

// Numerical Jordan data: eigenvalue clusters, Weyr characteristics, block
// partitions, cyclicity and the generator counts d_1..d_n.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "speclift/matrix_core.hpp"

namespace speclift {

using Partition = std::vector<std::size_t>;

struct EigenCluster {
  Complex value;              // multiplicity-weighted centroid
  std::size_t multiplicity = 0;
};

struct ClusterStructure {
  EigenCluster cluster;
  Partition partition;  // Jordan block sizes, descending
};

struct JordanStructure {
  std::vector<ClusterStructure> clusters;

  std::size_t dim() const noexcept;
  /// Structure of the direct sum of all blocks at cluster `index`.
  JordanStructure restricted_to(std::size_t index) const;
};

/// d_1..d_n (index 0 holds d_1).
using DSequence = std::vector<std::size_t>;

/// Groups roots whose spread is consistent with one multiple root: a group
/// of k roots is kept together when its diameter is at most
/// max(1, max|root|) * tol^(1/k), the spread of a k-fold root under a
/// relative coefficient perturbation of size tol. Groups come from a
/// complete-linkage dendrogram. Throws AmbiguousClustering if tol and 2*tol
/// group differently.
std::vector<EigenCluster> cluster_eigenvalues(std::span<const Complex> roots, double tol);

/// Newton on the (k-1)-th derivative of p, where a k-fold root is simple.
Complex refine_centroid(const PolyCoeffs& p, const EigenCluster& cluster, double cluster_tol);

/// Nullity increments of (A - lambda I)^k. Throws InconsistentRanks.
std::vector<std::size_t> weyr(const ComplexMatrix& a, Complex lambda, double rank_tol);

Partition conjugate_partition(std::span<const std::size_t> p);

Partition jordan_partition(const ComplexMatrix& a, Complex lambda, double rank_tol);

/// Full numerical structure. Throws StructureFailure when a cluster's Weyr
/// characteristic does not account for its algebraic multiplicity.
JordanStructure jordan_structure(const ComplexMatrix& a, const ToleranceConfig& tol = {});

bool is_cyclic(const ComplexMatrix& a, const ToleranceConfig& tol = {});
bool is_cyclic(const JordanStructure& s) noexcept;

/// d_l = min{ d : sum over clusters of the d largest block sizes >= l }.
DSequence d_sequence(const JordanStructure& s);

/// Randomized route to d_l: smallest d for which some draw of d Gaussian
/// vectors has a Krylov span of dimension >= l.
std::size_t d_oracle(const ComplexMatrix& b, std::size_t l, std::size_t trials = 32, std::uint64_t seed = 0);

/// Block-diagonal Jordan matrix (ones on the superdiagonal) for a structure.
ComplexMatrix jordan_form_matrix(const JordanStructure& s);

}  // namespace speclift
