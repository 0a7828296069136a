#include <doctest.h>

#include "instance_gen.hpp"
#include "speclift/lift_construct.hpp"
#include "speclift/local_lift_check.hpp"
#include "test_support.hpp"

using namespace speclift;
using namespace speclift::testing;

namespace {

double rel(const ComplexMatrix& a, const ComplexMatrix& b) { return norm_inf(a - b) / std::max(1.0, norm_inf(b)); }

ComplexMatrix jordan(Complex lambda, Partition p) {
  std::size_t n = 0;
  for (auto s : p) n += s;
  return jordan_form_matrix(JordanStructure{{ClusterStructure{{lambda, n}, std::move(p)}}});
}

}  // namespace

TEST_CASE("spray") {
  Rng rng(41);
  const ComplexMatrix a = random_matrix(3, rng);
  CHECK(rel(spray(ComplexMatrix::Zero(3, 3), a), a) < 1e-15);
  CHECK(rel(spray(diag({0.3, -0.1}), diag({0.5, 0.2})), diag({0.5, 0.2})) < 1e-15);
  CHECK_THROWS_AS(spray(ComplexMatrix::Zero(2, 2), a), Error);
}

TEST_CASE("spray preserves fibers and its derivative is the commutator") {
  Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = rng.integer(1, 5);
    const ComplexMatrix a = random_matrix(n, rng, 0.3);
    const ComplexMatrix b = random_matrix(n, rng, 0.3);
    const ComplexMatrix c = random_matrix(n, rng, 0.5);
    CHECK(distance_inf(project(spray(b, a)), project(a)) <= 1e-8);

    const double h = 1e-5;
    const ComplexMatrix fd = (spray(h * c, a) - spray(-h * c, a)) / (2 * h);
    const ComplexMatrix d = spray_derivative(a, c);
    CHECK(norm_inf(fd - d) <= 1e-6 * std::max(norm_inf(d), 1e-3 * norm_inf(a) * norm_inf(c)));
    CHECK(std::abs(d.trace()) < 1e-12);
  }
}

TEST_CASE("spray_derivative examples") {
  const ComplexMatrix a = diag({1.0, 2.0});
  CHECK(norm_inf(spray_derivative(a, diag({3.0, -1.0}))) == 0.0);
  const ComplexMatrix c = mat2(0, 1, 0, 0);
  const double h = 1e-5;
  const ComplexMatrix fd = (spray(h * c, a) - spray(-h * c, a)) / (2 * h);
  CHECK(rel(fd, spray_derivative(a, c)) < 1e-6);
  CHECK(rel(spray_derivative(a, c), mat2(0, 1, 0, 0)) < 1e-15);
}

TEST_CASE("similarity_transform") {
  const ComplexMatrix j2 = mat2(0, 1, 0, 0);
  CHECK(similarity_transform(j2, j2) == ComplexMatrix::Identity(2, 2));

  const ComplexMatrix c = mat2(0, 2, 0, 0);
  const ComplexMatrix t = similarity_transform(j2, c);
  CHECK(norm_inf(t * j2 * t.inverse() - c) <= 1e-8 * 2.0);

  CHECK_THROWS_AS(similarity_transform(j2, ComplexMatrix::Zero(2, 2)), Error);
  CHECK_THROWS_AS(similarity_transform(diag({0.1, 0.2}), diag({0.1, 0.3})), Error);
}

TEST_CASE("similarity_transform on random conjugates") {
  Rng rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = rng.integer(1, 4);
    const auto parts = partitions(static_cast<std::size_t>(n));
    const auto& part = parts[static_cast<std::size_t>(rng.integer(0, static_cast<int>(parts.size()) - 1))];
    const ComplexMatrix model = jordan(Complex{0.3, -0.2}, part);
    const ComplexMatrix b = conjugate(random_conditioned(n, 10.0, rng), model);
    const ComplexMatrix c = conjugate(random_conditioned(n, 10.0, rng), model);
    const ComplexMatrix t = similarity_transform(b, c, {}, static_cast<std::uint64_t>(trial));
    CHECK(rel(t * b * t.inverse(), c) <= 1e-8 * std::max(1.0, norm_inf(c)));
  }
}

TEST_CASE("centralizer_dimension") {
  CHECK(centralizer_dimension(JordanStructure{{ClusterStructure{{0.0, 3}, {3}}}}) == 3);
  CHECK(centralizer_dimension(JordanStructure{{ClusterStructure{{0.0, 3}, {1, 1, 1}}}}) == 9);
  CHECK(centralizer_dimension(JordanStructure{{ClusterStructure{{0.0, 3}, {2, 1}}}}) == 5);
}

TEST_CASE("MatrixInterpolant reproduces its data and low-degree polynomials") {
  Rng rng(44);
  const ComplexMatrix a = random_matrix(2, rng), b = random_matrix(2, rng);
  const MatrixInterpolant g({0.0, 0.5, Complex{0.0, 0.5}}, {a, a + 0.5 * b, a + Complex{0.0, 0.5} * b});
  CHECK(rel(g(0.5), a + 0.5 * b) == 0.0);
  CHECK(rel(g(Complex{0.3, 0.2}), a + Complex{0.3, 0.2} * b) < 1e-14);
  CHECK_THROWS_AS(MatrixInterpolant({0.1, 0.1}, {a, b}), Error);
}

TEST_CASE("local_cyclic_lift") {
  const SymPoint y{{Complex{0.2}, Complex{0.05}}};
  const ComplexMatrix m = companion(y);
  const std::vector<Jet> constant{Jet(0.0, std::vector<Complex>{y.y[0], 0.0, 0.0}),
                                  Jet(0.0, std::vector<Complex>{y.y[1], 0.0, 0.0})};
  const auto f = local_cyclic_lift(m, constant, 0.0);
  CHECK(rel(evaluate(f, 0.4), m) < 1e-14);

  const ComplexMatrix j2 = mat2(0, 1, 0, 0);
  const std::vector<Jet> lin{Jet(0.0, std::vector<Complex>{0.0, 1.0, 0.0}), Jet(0.0, std::vector<Complex>{0.0, 0.0, 0.0})};
  const auto g = local_cyclic_lift(j2, lin, 0.0);
  CHECK(rel(evaluate(g, 0.0), j2) < 1e-8);
  const auto report = verify_lift(g, single_node_instance(j2, lin, 0.0), 50, 1e-8, 0.9);
  CHECK(report.node_residual < 1e-8);
  CHECK(report.projection_residual < 1e-8);

  CHECK_THROWS_AS(local_cyclic_lift(ComplexMatrix::Zero(2, 2), lin, 0.0), Error);
}

TEST_CASE("global_cyclic_lift on the two-node instance") {
  const ComplexMatrix a1 = companion(SymPoint{{Complex{0.0}, Complex{0.0}}});
  const ComplexMatrix a2 = diag({0.1, 0.2});
  const SymPoint y2 = project(a2);
  const LiftInstance inst{{0.0, 0.5}, {a1, a2}, {{0.0, y2.y[0] / 0.5}, {0.0, y2.y[1] / 0.5}}};
  const auto f = global_cyclic_lift(inst);
  const auto report = verify_lift(f, inst, 200, 1e-7);
  CHECK(report.pass);
  CHECK(report.node_residual <= 1e-7);
  CHECK(report.projection_residual <= 1e-7);

  LiftInstance bad = inst;
  bad.matrices[0] = ComplexMatrix::Zero(2, 2);
  CHECK_THROWS_AS(global_cyclic_lift(bad), Error);
}

TEST_CASE("global_cyclic_lift with a single node and an arbitrary conjugator") {
  Rng rng(48);
  for (int trial = 0; trial < 40; ++trial) {
    CyclicInstanceOptions opt;
    opt.n = static_cast<std::size_t>(rng.integer(1, 4));
    opt.m = 1;
    opt.conjugator_cond = 100.0;
    const LiftInstance inst = random_cyclic_instance(opt, rng);
    const auto report = verify_lift(global_cyclic_lift(inst), inst, 100, 1e-7);
    CHECK(report.node_residual <= 1e-7);
    CHECK(report.projection_residual <= 1e-7);
  }
}

TEST_CASE("global_cyclic_lift soundness on generated instances") {
  Rng rng(45);
  for (int trial = 0; trial < 40; ++trial) {
    CyclicInstanceOptions opt;
    opt.n = static_cast<std::size_t>(rng.integer(1, 4));
    opt.m = static_cast<std::size_t>(rng.integer(1, 4));
    opt.conjugator_log_norm = 1.0;
    const LiftInstance inst = random_cyclic_instance(opt, rng);
    const auto f = global_cyclic_lift(inst, {}, static_cast<std::uint64_t>(trial));
    const auto report = verify_lift(f, inst, 100, 1e-7);
    CHECK(report.node_residual <= 1e-7);
    CHECK(report.projection_residual <= 1e-7);
    CHECK(report.all_in_ball);
  }
}

TEST_CASE("verify_lift") {
  const ComplexMatrix a = companion(SymPoint{{Complex{0.1}, Complex{-0.2}}});
  const LiftInstance inst{{0.3}, {a}, {{Complex{0.1}}, {Complex{-0.2}}}};
  const HoloMatrixMap constant = PolynomialMatrix{{a}};
  const auto ok = verify_lift(constant, inst, 100, 1e-12);
  CHECK(ok.pass);
  CHECK(ok.node_residual <= 1e-12);
  CHECK(ok.projection_residual <= 1e-12);

  ComplexMatrix corrupted = a;
  corrupted(0, 1) += 1e-3;
  const auto bad = verify_lift(PolynomialMatrix{{corrupted}}, inst, 100, 1e-8);
  CHECK_FALSE(bad.pass);
  CHECK(bad.node_residual > 1e-8);
}

TEST_CASE("transvection_factorization") {
  const ComplexMatrix shear = mat2(1, 1, 0, 1);
  const LinePath p = transvection_factorization(shear);
  CHECK(p.mu == Complex{1.0});
  REQUIRE(p.factors.size() == 1);
  CHECK(p.factors[0] == mat2(0, 1, 0, 0));

  const LinePath d = transvection_factorization(diag({2.0, 0.5}));
  CHECK(std::abs(d.mu - 1.0) < 1e-15);
  CHECK(d.factors.size() == 4);
  CHECK(rel(d.product(), diag({2.0, 0.5})) < 1e-10);

  const LinePath id = transvection_factorization(ComplexMatrix::Identity(3, 3));
  CHECK(id.factors.empty());
  CHECK(id.mu == Complex{1.0});

  CHECK_THROWS_AS(transvection_factorization(mat2(1, 1, 1, 1)), Error);
}

TEST_CASE("transvection_factorization reconstructs random matrices") {
  Rng rng(46);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = rng.integer(1, 8);
    const ComplexMatrix t = random_conditioned(n, std::pow(10.0, rng.uniform(0.0, 3.0)), rng);
    const LinePath p = transvection_factorization(t);
    const auto nn = static_cast<std::size_t>(n);
    CHECK(p.factors.size() <= nn * nn + 4 * nn);
    CHECK(rel(p.mu * p.product(), t) <= 1e-10 * std::max(1.0, norm_inf(t) * norm_inf(t.inverse())));
    for (const auto& f : p.factors) {
      CHECK(exactly_nilpotent(f));
      CHECK((f.array() != Complex{0.0}).count() == 1);
    }
  }
}

TEST_CASE("connect_similar") {
  const ComplexMatrix j2 = mat2(0, 1, 0, 0);
  CHECK(connect_similar(j2, j2).factors.empty());

  const ComplexMatrix c = mat2(0, 2, 0, 0);
  const LinePath p = connect_similar(j2, c);
  CHECK(p.factors.size() <= 4);
  CHECK(rel(p.endpoint(j2), c) <= 1e-8);

  CHECK_THROWS_AS(connect_similar(j2, ComplexMatrix::Zero(2, 2)), Error);
}

TEST_CASE("connect_similar stays in the fiber") {
  Rng rng(47);
  const ComplexMatrix j3 = jordan(0.4, {3});
  for (int trial = 0; trial < 30; ++trial) {
    const ComplexMatrix b = conjugate(random_conditioned(3, 10.0, rng), j3);
    const ComplexMatrix c = conjugate(random_conditioned(3, 10.0, rng), j3);
    const LinePath p = connect_similar(b, c, {}, static_cast<std::uint64_t>(trial));
    CHECK(rel(p.endpoint(b), c) <= 1e-8);
    const SymPoint target = project(b);
    for (int s = 0; s < 20; ++s) {
      std::vector<double> t(p.factors.size());
      for (double& x : t) x = rng.uniform();
      CHECK(distance_inf(project(p.apply(b, t)), target) <= 1e-7);
    }
  }
}
