#include <doctest.h>

#include "gmeact/sdp_solver.hpp"
#include "test_support.hpp"

using namespace gmeact;

namespace {

// minimize Tr[C X] s.t. Tr X = 1, X psd.
ConicProgram eigen_program(const Matrix& c, double trace = 1.0) {
  ConicProgram p;
  const int n = static_cast<int>(c.rows());
  p.blocks.push_back({"X", n, {n}});
  p.objective.push_back({0, c});
  p.equalities.push_back({{{0, Matrix::Identity(n, n)}}, trace});
  p.cones.push_back({"X psd", {n}, {{0, 1.0, {}}}, std::nullopt});
  return p;
}

}  // namespace

TEST_SUITE("sdp_solver") {
  TEST_CASE("1x1 block driven to zero") {
    ConicProgram p;
    p.blocks.push_back({"x", 1, {1}});
    p.objective.push_back({0, Matrix::Ones(1, 1)});
    p.cones.push_back({"x psd", {1}, {{0, 1.0, {}}}, std::nullopt});
    const auto r = solve_conic(p);
    CHECK(r.report.status == SolveStatus::Optimal);
    CHECK(std::abs(r.blocks[0](0, 0)) < 1e-6);
  }

  TEST_CASE("smallest eigenvalue program") {
    Matrix c = Matrix::Zero(2, 2);
    c(0, 0) = 1.0;
    c(1, 1) = 2.0;
    const auto r = solve_conic(eigen_program(c));
    REQUIRE(r.report.status == SolveStatus::Optimal);
    CHECK(r.report.objective == doctest::Approx(1.0).epsilon(1e-6));
    Matrix expect = Matrix::Zero(2, 2);
    expect(0, 0) = 1.0;
    CHECK((r.blocks[0] - expect).norm() < 1e-5);
  }

  TEST_CASE("random smallest eigenvalue program") {
    std::mt19937_64 g(21);
    const Matrix c = testing::random_hermitian(g, 6);
    const auto r = solve_conic(eigen_program(c));
    REQUIRE(r.report.status == SolveStatus::Optimal);
    CHECK(r.report.objective == doctest::Approx(min_eigenvalue(c)).epsilon(1e-5));
  }

  TEST_CASE("infeasible program is detected") {
    const auto r = solve_conic(eigen_program(Matrix::Identity(2, 2), -1.0));
    CHECK(r.report.status == SolveStatus::Infeasible);
  }

  TEST_CASE("iteration budget exhaustion reports max_iter") {
    std::mt19937_64 g(22);
    SolverOptions opt;
    opt.max_iter = 3;
    const auto r = solve_conic(eigen_program(testing::random_hermitian(g, 6)), opt);
    CHECK(r.report.status == SolveStatus::MaxIter);
    CHECK(r.report.iterations == 3);
    CHECK(r.blocks.size() == 1);
  }

  TEST_CASE("deterministic for a fixed seed") {
    std::mt19937_64 g(23);
    const auto p = eigen_program(testing::random_hermitian(g, 5));
    SolverOptions opt;
    opt.seed = 9;
    const auto a = solve_conic(p, opt);
    const auto b = solve_conic(p, opt);
    CHECK(a.report.iterations == b.report.iterations);
    CHECK((a.blocks[0] - b.blocks[0]).norm() == 0.0);
  }

  TEST_CASE("residual history is recorded at the configured cadence") {
    std::mt19937_64 g(24);
    SolverOptions opt;
    opt.tol = 1e-12;
    opt.history_every = 10;
    const auto r = solve_conic(eigen_program(testing::random_hermitian(g, 8)), opt);
    REQUIRE(!r.residual_history.empty());
    for (std::size_t i = 0; i < r.residual_history.size(); ++i)
      CHECK(r.residual_history[i].first == static_cast<long>(10 * (i + 1)));
  }

  TEST_CASE("invalid programs are rejected") {
    ConicProgram p;
    p.blocks.push_back({"X", 2, {2}});
    p.cones.push_back({"bad", {2}, {{3, 1.0, {}}}, std::nullopt});
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    CHECK_THROWS_AS(solve_conic(p), std::invalid_argument);
  }

  TEST_CASE("min_eig_projection") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = -1.0;
    Matrix expect = Matrix::Zero(2, 2);
    expect(0, 0) = 1.0;
    CHECK((min_eig_projection(d) - expect).norm() < 1e-15);

    std::mt19937_64 g(25);
    const Matrix s = testing::random_density(g, 4);
    CHECK((min_eig_projection(s) - s).norm() < 1e-12);

    const Matrix h = testing::random_hermitian(g, 4);
    const Matrix ph = min_eig_projection(h);
    CHECK(min_eigenvalue(ph) > -1e-12);
    for (int t = 0; t < 100; ++t) {
      const Matrix other = testing::random_density(g, 4) * (1.0 + 3.0 * uniform01(g));
      CHECK((ph - h).norm() <= (other - h).norm() + 1e-12);
    }
  }
}
