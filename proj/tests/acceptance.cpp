// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fail.

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "instance_gen.hpp"
#include "speclift/lift_construct.hpp"
#include "speclift/local_lift_check.hpp"
#include "test_support.hpp"

using namespace speclift;
using namespace speclift::testing;

namespace {

struct Result {
  bool pass = true;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

std::vector<Complex> random_roots(std::size_t n, double radius, Rng& rng) {
  std::vector<Complex> r;
  for (std::size_t i = 0; i < n; ++i) r.push_back(rng.disc(radius));
  return r;
}

/// Ordered lists of (multiplicity, partition) with at most `max_eigs` parts.
std::vector<std::vector<Partition>> structures(std::size_t n, std::size_t max_eigs) {
  std::vector<std::vector<Partition>> out;
  if (n == 0) return {{}};
  if (max_eigs == 0) return {};
  for (std::size_t first = 1; first <= n; ++first) {
    for (const auto& p : partitions(first)) {
      for (auto rest : structures(n - first, max_eigs - 1)) {
        rest.insert(rest.begin(), p);
        out.push_back(std::move(rest));
      }
    }
  }
  return out;
}

const Complex kEigenvalues[] = {{0.25, -0.1}, {-0.35, 0.2}, {0.0, 0.5}, {0.5, 0.3}, {-0.4, -0.4}};

JordanStructure make_structure(const std::vector<Partition>& parts) {
  JordanStructure s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::size_t m = 0;
    for (auto b : parts[i]) m += b;
    s.clusters.push_back(ClusterStructure{{kEigenvalues[i], m}, parts[i]});
  }
  return s;
}

Result projection_section() {
  Rng rng(1001);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<std::size_t>(rng.integer(2, 6));
    const SymPoint y = sigma(random_roots(n, 0.999, rng));
    worst = std::max(worst, distance_inf(project(companion(y)), y));
  }
  return {worst <= 1e-10, "max |pi(companion(y)) - y| = " + fmt(worst) + " over 1000 points, n in 2..6 (tol 1e-10)"};
}

Result conjugation_invariance() {
  Rng rng(1002);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = rng.integer(1, 6);
    const ComplexMatrix a = random_matrix(n, rng, 0.4);
    const ComplexMatrix t = random_conditioned(n, std::pow(10.0, rng.uniform(0.0, 3.0)), rng);
    worst = std::max(worst, distance_inf(project(conjugate(t, a)), project(a)));
  }
  return {worst <= 1e-6, "max |pi(TAT^-1) - pi(A)| = " + fmt(worst) + " over 500 pairs, cond(T) <= 1e3 (tol 1e-6)"};
}

Result membership_consistency() {
  Rng rng(1003);
  double worst = 0.0;
  int mismatches = 0, inside = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = rng.integer(1, 6);
    ComplexMatrix a = random_matrix(n, rng);
    // Rescale to a spectral radius drawn from [0.3, 1.7] (reference eigensolver).
    Eigen::ComplexEigenSolver<ComplexMatrix> es(a);
    a *= rng.uniform(0.3, 1.7) / es.eigenvalues().cwiseAbs().maxCoeff();
    const Membership ball = in_spectral_ball(a);
    const Membership disc = in_symmetrized_polydisc(project(a));
    if (ball.inside != disc.inside) ++mismatches;
    if (ball.inside) ++inside;
    worst = std::max(worst, std::abs(ball.margin - disc.margin));
  }
  return {mismatches == 0 && worst <= 1e-9 && inside > 0 && inside < 500,
          std::to_string(mismatches) + " boolean mismatches, max margin gap " + fmt(worst) + ", " + std::to_string(inside) +
              "/500 inside (tol 1e-9)"};
}

Result jordan_recovery() {
  Rng rng(1004);
  int cases = 0, failures = 0;
  for (std::size_t n = 1; n <= 5; ++n) {
    for (const auto& parts : structures(n, 2)) {
      const JordanStructure model = make_structure(parts);
      const ComplexMatrix j = jordan_form_matrix(model);
      for (int trial = 0; trial < 3; ++trial) {
        const double cond = trial == 0 ? 1e2 : std::pow(10.0, rng.uniform(0.0, 2.0));
        const ComplexMatrix a = conjugate(random_conditioned(static_cast<Eigen::Index>(n), cond, rng), j);
        ++cases;
        bool ok = false;
        try {
          const JordanStructure s = jordan_structure(a);
          ok = s.clusters.size() == model.clusters.size();
          for (const auto& mc : model.clusters) {
            bool found = false;
            for (const auto& sc : s.clusters) {
              found = found || (std::abs(sc.cluster.value - mc.cluster.value) < 1e-4 && sc.partition == mc.partition);
            }
            ok = ok && found;
          }
        } catch (const Error&) {
          ok = false;
        }
        if (!ok) ++failures;
      }
    }
  }
  return {failures == 0, std::to_string(failures) + " failures in " + std::to_string(cases) +
                             " conjugated models (all partitions, 1-2 eigenvalues, n <= 5, cond <= 1e2)"};
}

Result d_formula() {
  int cases = 0, mismatches = 0;
  for (std::size_t n = 1; n <= 5; ++n) {
    for (const auto& parts : structures(n, n)) {
      const JordanStructure s = make_structure(parts);
      const ComplexMatrix b = jordan_form_matrix(s);
      const DSequence d = d_sequence(s);
      for (std::size_t l = 1; l <= n; ++l) {
        ++cases;
        if (d_oracle(b, l, 32, 2024) != d[l - 1]) ++mismatches;
      }
    }
  }
  return {mismatches == 0,
          std::to_string(mismatches) + " mismatches in " + std::to_string(cases) + " (structure, l) pairs, n <= 5, 32 trials"};
}

Result zero_matrix_ground_truth() {
  int cases = 0, wrong = 0;
  for (std::size_t n = 2; n <= 3; ++n) {
    const auto dim = static_cast<Eigen::Index>(n);
    const std::size_t order = std::max<std::size_t>(default_truncation(n), 6);
    std::vector<std::size_t> e(n, 0);
    for (;;) {
      std::vector<Jet> f;
      bool expected = true;
      for (std::size_t j = 0; j < n; ++j) {
        Jet x(0.0, order);
        x[e[j]] = 1.0;
        f.push_back(x);
        expected = expected && e[j] >= j + 1;
      }
      ++cases;
      if (check_local({0.0, ComplexMatrix::Zero(dim, dim), f}).pass != expected) ++wrong;
      std::size_t i = 0;
      while (i < n && ++e[i] > 4) e[i++] = 0;
      if (i == n) break;
    }
  }
  return {wrong == 0, std::to_string(wrong) + " disagreements in " + std::to_string(cases) + " monomial jets (n = 2, 3)"};
}

Result witness_soundness() {
  Rng rng(1007);
  int unsolvable = 0, failed = 0;
  double node = 0.0, proj = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    CyclicInstanceOptions opt;
    opt.n = static_cast<std::size_t>(rng.integer(1, 4));
    opt.m = static_cast<std::size_t>(rng.integer(1, 4));
    opt.conjugator_log_norm = 1.0;
    const LiftInstance inst = random_cyclic_instance(opt, rng);
    try {
      if (!check_global(inst).solvable) ++unsolvable;
      const LiftVerification v = verify_lift(global_cyclic_lift(inst, {}, static_cast<std::uint64_t>(trial)), inst, 200, 1e-7);
      node = std::max(node, v.node_residual);
      proj = std::max(proj, v.projection_residual);
      if (!v.pass) ++failed;
    } catch (const Error&) {
      ++failed;
    }
  }
  return {unsolvable == 0 && failed == 0,
          std::to_string(unsolvable) + " not solvable, " + std::to_string(failed) +
              " failed verification; max node residual " + fmt(node) + ", max projection residual " + fmt(proj) +
              " (50 instances, 200 samples, tol 1e-7)"};
}

Result negative_control() {
  const LiftInstance inst{{0.0}, {ComplexMatrix::Zero(2, 2)}, {{0.0, 1.0}, {0.0, 1.0}}};
  const GlobalVerdict v = check_global(inst);
  const CriterionRow* failing = nullptr;
  for (const auto& row : v.nodes.at(0).rows)
    if (!row.pass && !failing) failing = &row;
  const bool ok = !v.solvable && failing && failing->k == 0 && failing->required == 2 && failing->observed == 1u &&
                  std::abs(v.nodes[0].structure.clusters.at(failing->cluster).cluster.value) == 0.0;
  return {ok, ok ? "not solvable; failing triple (node 0, lambda 0, k 0): required 2, observed 1"
                 : "unexpected verdict or failing triple"};
}

Result spray_contract() {
  Rng rng(1009);
  double fiber = 0.0, deriv = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = rng.integer(1, 5);
    const ComplexMatrix a = random_matrix(n, rng, 0.3);
    const ComplexMatrix b = random_matrix(n, rng, 0.3);
    const ComplexMatrix c = random_matrix(n, rng, 0.5);
    fiber = std::max(fiber, distance_inf(project(spray(b, a)), project(a)));
    const double h = 1e-5;
    const ComplexMatrix fd = (spray(h * c, a) - spray(-h * c, a)) / (2 * h);
    const ComplexMatrix d = spray_derivative(a, c);
    if (n == 1) {
      deriv = std::max(deriv, norm_inf(fd - d));  // both vanish identically
    } else {
      deriv = std::max(deriv, norm_inf(fd - d) / norm_inf(d));
    }
  }
  return {fiber <= 1e-8 && deriv <= 1e-6,
          "fiber residual " + fmt(fiber) + " (tol 1e-8), derivative relative error " + fmt(deriv) + " (tol 1e-6), 200 triples"};
}

Result connectedness() {
  Rng rng(1010);
  double endpoint = 0.0, fiber = 0.0;
  int non_nilpotent = 0, errors = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 4));
    const auto all = structures(n, 2);
    const auto& parts = all[static_cast<std::size_t>(rng.integer(0, static_cast<int>(all.size()) - 1))];
    const ComplexMatrix j = jordan_form_matrix(make_structure(parts));
    const auto dim = static_cast<Eigen::Index>(n);
    const ComplexMatrix b = conjugate(random_conditioned(dim, 10.0, rng), j);
    const ComplexMatrix c = conjugate(random_conditioned(dim, 10.0, rng), j);
    try {
      const LinePath p = connect_similar(b, c, {}, static_cast<std::uint64_t>(trial));
      endpoint = std::max(endpoint, norm_inf(p.endpoint(b) - c) / std::max(1.0, norm_inf(c)));
      for (const auto& f : p.factors)
        if (!exactly_nilpotent(f)) ++non_nilpotent;
      const SymPoint target = project(b);
      for (int s = 0; s < 20 && !p.factors.empty(); ++s) {
        std::vector<double> t(p.factors.size());
        for (double& x : t) x = rng.uniform();
        fiber = std::max(fiber, distance_inf(project(p.apply(b, t)), target));
      }
    } catch (const Error&) {
      ++errors;
    }
  }
  return {errors == 0 && non_nilpotent == 0 && endpoint <= 1e-8 && fiber <= 1e-7,
          "endpoint residual " + fmt(endpoint) + " (tol 1e-8), fiber residual " + fmt(fiber) + " (tol 1e-7), " +
              std::to_string(non_nilpotent) + " non-nilpotent factors, " + std::to_string(errors) + " errors, 100 pairs"};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Result cli_determinism() {
  namespace fs = std::filesystem;
  const std::string cli = SPECLIFT_CLI_PATH;
  const fs::path data = SPECLIFT_TEST_DATA_DIR;
  const fs::path out = fs::temp_directory_path() / "speclift_acceptance";
  fs::create_directories(out);

  struct Run {
    std::string args;
    std::string file;
  };
  std::vector<Run> runs;
  const char* matrix_files[] = {"zero_not_solvable.json", "zero_solvable.json", "two_node_cyclic.json",
                                "three_node_cyclic.json", "mixed_jordan.json",  "similar_pair.json",
                                "non_cyclic_lift.json",   "ambiguous_clustering.json"};
  for (const char* f : matrix_files) {
    for (const char* c : {"project", "membership", "jordan --index 0", "dseq --index 0"}) runs.push_back({c, f});
  }
  for (const char* f : {"zero_not_solvable.json", "zero_solvable.json", "two_node_cyclic.json", "three_node_cyclic.json",
                        "non_cyclic_lift.json"}) {
    runs.push_back({"check-local --node 0", f});
    runs.push_back({"check-global", f});
  }
  for (const char* f : {"two_node_cyclic.json", "three_node_cyclic.json"}) runs.push_back({"lift", f});
  runs.push_back({"connect --from 0 --to 1", "similar_pair.json"});
  runs.push_back({"connect --from 0 --to 1", "mixed_jordan.json"});
  for (const char* f : {"two_node_cyclic.json", "three_node_cyclic.json"}) {
    runs.push_back({"verify --lifting " + (out / (std::string("lift_") + f)).string(), f});
  }

  int differing = 0, missing = 0, index = 0;
  for (const auto& r : runs) {
    std::string first, second;
    int codes[2];
    for (int rep = 0; rep < 2; ++rep) {
      std::string name = r.args.substr(0, r.args.find(' '));
      fs::path report = out / (name == "lift" ? "lift_" + r.file : std::to_string(index) + "_" + std::to_string(rep) + ".json");
      fs::remove(report);
      const std::string cmd = cli + " " + r.args + " --seed 11 --input " + (data / r.file).string() + " --output " +
                              report.string() + " 2>/dev/null";
      codes[rep] = std::system(cmd.c_str());
      if (!fs::exists(report)) {
        // Validation failures write no report; determinism then means same exit code.
        (rep == 0 ? first : second) = "<no report>";
        continue;
      }
      auto j = nlohmann::ordered_json::parse(slurp(report));
      j.erase("wall_time_seconds");
      (rep == 0 ? first : second) = j.dump();
    }
    if (first == "<no report>") ++missing;
    if (first != second || codes[0] != codes[1]) ++differing;
    ++index;
  }
  return {differing == 0 && missing == 0, std::to_string(differing) + " differing of " + std::to_string(runs.size()) +
                                              " repeated command runs, " + std::to_string(missing) + " without a report"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"projection section identity", projection_section},
      {"conjugation invariance", conjugation_invariance},
      {"membership consistency", membership_consistency},
      {"Jordan recovery", jordan_recovery},
      {"d_l formula vs randomized oracle", d_formula},
      {"criterion ground truth at the zero matrix", zero_matrix_ground_truth},
      {"witness soundness", witness_soundness},
      {"negative control", negative_control},
      {"spray contract", spray_contract},
      {"connectedness construction", connectedness},
      {"CLI determinism", cli_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %2zu %s: %s [%.2fs]\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                r.detail.c_str(), secs);
    if (!r.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
