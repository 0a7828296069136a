#pragma once

// Jet-level obstruction to lifting f through the eigenvalue projection at a
// node, and the assembled verdict over all nodes of an instance.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "speclift/jets.hpp"
#include "speclift/jordan_structure.hpp"
#include "speclift/lift_instance.hpp"

namespace speclift {

/// How Jordan blocks at one eigenvalue are fed to the generator count.
///  Grouped:  one group per eigenvalue, direct sum of all its blocks, k runs
///            to the algebraic multiplicity.
///  PerBlock: every Jordan block on its own, k runs to the block size.
enum class BlockReading { Grouped, PerBlock };

const char* to_string(BlockReading r) noexcept;
BlockReading parse_block_reading(const std::string& s);

struct LocalProblem {
  Complex p;
  ComplexMatrix m;
  std::vector<Jet> fjets;  // components f_1..f_n about p
};

struct CriterionRow {
  std::size_t cluster = 0;
  std::size_t block = 0;  // always 0 for the grouped reading
  std::size_t k = 0;
  std::size_t required = 0;
  std::optional<std::size_t> observed;  // nullopt: vanishes through the truncation
  bool pass = false;
};

struct LocalReport {
  bool consistent = false;
  double consistency_residual = 0.0;
  JordanStructure structure;
  std::vector<CriterionRow> rows;
  bool pass = false;
  BlockReading reading = BlockReading::Grouped;
  ToleranceConfig thresholds;
  std::size_t truncation = 0;
};

struct GlobalVerdict {
  std::vector<LocalReport> nodes;
  bool solvable = false;
  std::vector<std::string> warnings;
  std::size_t truncation = 0;
};

/// k-th lambda-derivative of x^n + sum_j (-1)^j f_j x^(n-j) at lambda, as a jet in v.
Jet chi_derivative_jet(const std::vector<Jet>& fjets, Complex lambda, std::size_t k);

bool check_consistency(const LocalProblem& problem, const ToleranceConfig& tol = {});

LocalReport check_local(const LocalProblem& problem, BlockReading reading = BlockReading::Grouped,
                        const ToleranceConfig& tol = {});

/// Truncation used when recentering polynomial data: n + n + 2.
std::size_t default_truncation(std::size_t n) noexcept;

GlobalVerdict check_global(const LiftInstance& instance, BlockReading reading = BlockReading::Grouped,
                           const ToleranceConfig& tol = {}, std::size_t membership_samples = 256);

/// Jets of f about node `index` at the default truncation.
std::vector<Jet> node_jets(const LiftInstance& instance, std::size_t index);

}  // namespace speclift
