#include <doctest.h>

#include "gmeact/bisep.hpp"
#include "gmeact/states.hpp"
#include "test_support.hpp"

using namespace gmeact;

namespace {

Matrix ghz3() {
  Vector v = Vector::Zero(8);
  v(0) = v(7) = 1.0 / std::sqrt(2.0);
  return testing::pure(v);
}

Ket random_ket(std::mt19937_64& g) { return Ket(random_unit_vector(g, 8), {2, 2, 2}); }

}  // namespace

TEST_SUITE("bisep") {
  TEST_CASE("seesaw fixed point at a constituent") {
    const Ket a0 = constituent_ket(0);
    const auto r = max_overlap_product(a0.projector(), Bipartition::A_BC, a0, CertifierConfig{});
    CHECK(r.overlap >= 1.0 - 1e-9);
    CHECK(std::abs(r.ket.amplitudes().dot(a0.amplitudes())) >= 1.0 - 1e-9);
  }

  TEST_CASE("seesaw on a rank-1 product target from any seed") {
    const double s = 1.0 / std::sqrt(2.0);
    Vector v = Vector::Zero(8);
    v(0) = v(3) = s;  // |0> (x) |Phi+>
    std::mt19937_64 g(41);
    for (int t = 0; t < 5; ++t) {
      const auto r = max_overlap_product(testing::pure(v), Bipartition::A_BC, random_ket(g), CertifierConfig{}, t);
      CHECK(r.overlap == doctest::Approx(1.0).epsilon(1e-9));
    }
  }

  TEST_CASE("seesaw on the maximally mixed state") {
    std::mt19937_64 g(42);
    const auto r =
        max_overlap_product(Matrix::Identity(8, 8) / 8.0, Bipartition::B_AC, random_ket(g), CertifierConfig{});
    CHECK(r.overlap == doctest::Approx(0.125).epsilon(1e-12));
  }

  TEST_CASE("seesaw history never decreases") {
    std::mt19937_64 g(43);
    const Matrix rho = testing::random_density(g, 8);
    const auto r = max_overlap_product(rho, Bipartition::A_BC, random_ket(g), CertifierConfig{});
    for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] >= r.history[i - 1] - 1e-14);
  }

  TEST_CASE("seesaw matches a many-restart oracle on the biased state") {
    const Ket a0 = constituent_ket(0);
    const double b = 1e-3;
    const Matrix biased = (1.0 - b) * single_copy_state(0.0).matrix() + b * a0.projector();
    CertifierConfig cfg;
    const auto r = max_overlap_product(biased, Bipartition::A_BC, a0, cfg);
    CertifierConfig oracle = cfg;
    oracle.restarts = 2000;
    oracle.seed = 99;
    const auto o = max_overlap_product(biased, Bipartition::A_BC, a0, oracle);
    CHECK(std::abs(r.overlap - o.overlap) < 1e-6);
  }

  TEST_CASE("mixture on the maximally mixed state") {
    const auto m = find_mixture(Matrix::Identity(8, 8) / 8.0, constituent_set(), CertifierConfig{});
    REQUIRE(!m.p.empty());
    for (double o : m.overlaps) CHECK(o == doctest::Approx(0.125).epsilon(1e-10));
    for (double p : m.p) CHECK(p == doctest::Approx(m.p.front()).epsilon(1e-12));
    CHECK(m.eta.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("mixture overlap beats the best constituent") {
    const Matrix r0 = single_copy_state(0.0).matrix();
    const auto m = find_mixture(r0, constituent_set(), CertifierConfig{});
    double oracle = 0.0;
    for (int i = 0; i < kNumEntangledConstituents; ++i) {
      const Vector a = constituent_ket(i).amplitudes();
      oracle = std::max(oracle, (a.adjoint() * r0 * a)(0).real());
    }
    double achieved = 0.0;
    for (std::size_t i = 0; i < m.p.size(); ++i) achieved += m.p[i] * m.overlaps[i];
    CHECK(achieved >= oracle - 1e-12);
  }

  TEST_CASE("subtract closed form on a qubit") {
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 0.75;
    rho(1, 1) = 0.25;
    Matrix eta = Matrix::Zero(2, 2);
    eta(0, 0) = 1.0;
    const auto r = subtract(rho, eta);
    CHECK_FALSE(r.stalled);
    CHECK(r.epsilon == doctest::Approx(0.5).epsilon(1e-6));
    CHECK((r.remainder - Matrix::Identity(2, 2) / 2.0).norm() < 1e-6);
  }

  TEST_CASE("subtract stalls when eta is outside the support") {
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 1.0;
    Matrix eta = Matrix::Zero(2, 2);
    eta(1, 1) = 1.0;
    const auto r = subtract(rho, eta);
    CHECK(r.stalled);
    CHECK(r.epsilon == 0.0);
    CHECK((r.remainder - rho).norm() == 0.0);
  }

  TEST_CASE("subtract of a pure state from itself stalls") {
    const Matrix p = constituent_ket(0).projector();
    const auto r = subtract(p, p);
    CHECK(r.stalled);
  }

  TEST_CASE("certify the maximally mixed state in zero iterations") {
    const auto t = certify(DensityMatrix::maximally_mixed({2, 2, 2}));
    CHECK(t.verdict == Verdict::Biseparable);
    CHECK(t.iterations == 0);
    CHECK(t.final_purity == doctest::Approx(0.125));
  }

  TEST_CASE("certify never accepts GHZ") {
    CertifierConfig cfg;
    cfg.j_max = 50;
    const auto t = certify(DensityMatrix(ghz3(), {2, 2, 2}), cfg);
    CHECK(t.verdict == Verdict::Inconclusive);
    CHECK(t.final_purity > cfg.purity_threshold);
  }

  TEST_CASE("certify trace is deterministic per seed and serializes") {
    CertifierConfig cfg;
    cfg.j_max = 5;
    cfg.seed = 3;
    const DensityMatrix rho(0.9 * single_copy_state(0.06).matrix() + 0.1 * Matrix::Identity(8, 8) / 8.0, {2, 2, 2});
    const auto a = certify(rho, cfg);
    const auto b = certify(rho, cfg);
    CHECK(a.final_purity == b.final_purity);
    CHECK(a.iterations == b.iterations);
    const json j = a.to_json(true);
    CHECK(j["steps"].size() == a.steps.size());
    CHECK(j.contains("stop_reason"));
  }

  TEST_CASE("configuration validation") {
    CertifierConfig cfg;
    cfg.bias = 2.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK(weight_strategy_from_string("lp_vertex") == WeightStrategy::LpVertex);
    CHECK_THROWS_AS(weight_strategy_from_string("nope"), std::invalid_argument);
  }
}
