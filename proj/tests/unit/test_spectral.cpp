#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "phaseinv/invariants.hpp"
#include "phaseinv/spectral.hpp"

using namespace phaseinv;
using oracle::pi;

TEST_CASE("P1 vanishes for KS at delta = pi/2") {
  for (int k = 0; k < 10; ++k) {
    const PhaseVector s(oracle::random_state(5, 40 + k));
    const double v =
        pf_apply_numeric(ModelSpec::kuramoto_sakaguchi(0.3, 1.0, pi / 2), constant_field(), s, 0.0);
    CHECK(std::abs(v) < 1e-8);
  }
}

TEST_CASE("higher-order P1 equals the triple cosine sum plus Lambda") {
  for (int k = 0; k < 10; ++k) {
    const auto th = oracle::random_state(5, 60 + k);
    const PhaseVector s(th);
    for (double delta : {0.0, 0.9, pi / 2, -pi / 2}) {
      const auto m = ModelSpec::higher_order(0.0, 1.0, delta);
      const double lambda = lambda_analytic(m, s, 0.0);
      const double want = oracle::ho_triple_cos_sum(th, 1.0, delta) + lambda;
      CHECK(std::abs(pf_apply_numeric(m, constant_field(), s, 0.0) - want) < 1e-6);
      CHECK(std::abs(constant_function_rate(m, s, 0.0) - want) < 1e-12);
    }
    // Where cos(delta) = 0 the triple sum alone is the answer.
    const auto m = ModelSpec::higher_order(0.0, 1.0, pi / 2);
    CHECK(std::abs(pf_apply_numeric(m, constant_field(), s, 0.0) -
                   oracle::ho_triple_cos_sum(th, 1.0, pi / 2)) < 1e-6);
  }
}

TEST_CASE("PF eigen-relation for every model") {
  const ModelSpec models[] = {
      ModelSpec::theta(ThetaInput::sinusoid()),
      ModelSpec::theta(ThetaInput::constant(0.7)),
      ModelSpec::kuramoto_sakaguchi(0.2, 1.0, 0.0),
      ModelSpec::kuramoto_sakaguchi(0.2, 1.0, pi / 2),
      ModelSpec::higher_order(0.2, 1.0, 0.0),
      ModelSpec::higher_order(0.2, 1.0, pi / 2),
  };
  for (const auto& m : models) {
    for (int n : {3, 6}) {
      for (int k = 0; k < 5; ++k) {
        const PhaseVector s(oracle::random_state(n, 500 + 10 * n + k));
        const PFResidual r = verify_pf_eigenrelation(m, Permutation::identity(n), s, 0.4 * k);
        CAPTURE(m.describe());
        CHECK(r.rel_residual <= 1e-4);
        const PFResidual ra = verify_pf_eigenrelation(m, Permutation::identity(n), s, 0.4 * k,
                                                      kDefaultFdStep, true);
        CHECK(ra.rel_residual <= 1e-4);
        CHECK(ra.value_u == doctest::Approx(std::abs(r.value_u)));
      }
    }
  }
}

TEST_CASE("eigenvalues: -1 for KS delta = 0, K = 1 and 0 for higher order at pi/2") {
  const PhaseVector s(oracle::random_state(5, 8));
  const Permutation q{1, 3, 5, 2, 4};
  const PFResidual ks = verify_pf_eigenrelation(ModelSpec::kuramoto_sakaguchi(0.0, 1.0, 0.0), q, s, 0.0);
  CHECK(ks.value_Lambda_u / ks.value_u == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(ks.rel_residual <= 1e-4);
  const PFResidual ho = verify_pf_eigenrelation(ModelSpec::higher_order(0.0, 1.0, pi / 2), q, s, 0.0);
  CHECK(std::abs(ho.value_Lambda_u) <= 1e-12 * std::abs(ho.value_u));
  CHECK(std::abs(ho.value_P_u) <= 1e-4 * std::abs(ho.value_u));
}

TEST_CASE("central differences are second order") {
  const auto m = ModelSpec::higher_order(0.0, 1.0, 0.4);
  const PhaseVector s(oracle::random_state(5, 99));
  const Permutation q = Permutation::identity(5);
  const double coarse = verify_pf_eigenrelation(m, q, s, 0.0, 1e-3).rel_residual;
  const double fine = verify_pf_eigenrelation(m, q, s, 0.0, 5e-4).rel_residual;
  CHECK(coarse / fine >= 3.5);
  CHECK(coarse / fine <= 4.5);
}

TEST_CASE("guard margin is enforced") {
  const PhaseVector s{0.0, 1.5e-5, 2.0};
  const auto m = ModelSpec::kuramoto_sakaguchi(0.0, 1.0, 0.0);
  CHECK_THROWS_AS(pf_apply_numeric(m, constant_field(), s, 0.0, 1e-5), SingularState);
  CHECK_NOTHROW(pf_apply_numeric(m, constant_field(), s, 0.0, 1e-7));
  CHECK_THROWS_AS(pf_apply_numeric(m, constant_field(), s, 0.0, 0.0), InvalidArgument);
}
