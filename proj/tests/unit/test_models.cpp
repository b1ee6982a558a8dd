#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "phaseinv/models.hpp"

using namespace phaseinv;
using oracle::pi;

TEST_CASE("model factories validate parameters") {
  CHECK_THROWS_AS(ModelSpec::kuramoto_sakaguchi(0.0, -1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(ModelSpec::higher_order(0.0, 1.0, 4.0), InvalidArgument);
  CHECK_NOTHROW(ModelSpec::kuramoto_sakaguchi(0.0, 0.0, -pi));
  CHECK(to_string(ModelKind::HigherOrder) == "higher_order");
}

TEST_CASE("theta inputs") {
  CHECK(ThetaInput::zero()(3.0) == 0.0);
  CHECK(ThetaInput::sinusoid()(0.5) == doctest::Approx(std::sin(0.5)));
  CHECK(ThetaInput::constant(2.5)(100.0) == 2.5);
}

TEST_CASE("theta model: f = 1 + I, g = -1 + I, h = 0") {
  const auto m = ModelSpec::theta(ThetaInput::sinusoid());
  const PhaseVector s{0.3, 1.0, 4.0};
  const Fgh c = evaluate_fgh(m, s, 0.7);
  CHECK(c.f == doctest::Approx(1.0 + std::sin(0.7)));
  CHECK(c.g == doctest::Approx(-1.0 + std::sin(0.7)));
  CHECK(c.h == 0.0);
  const auto v = vector_field(m, s, 0.7);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(v[j] == doctest::Approx(c.f + c.g * std::cos(s[j])));
  }
}

TEST_CASE("Kuramoto-Sakaguchi field matches the pairwise double sum") {
  for (int n : {2, 3, 7, 12}) {
    const auto th = oracle::random_state(n, 100 + n);
    for (double delta : {0.0, 0.3, pi / 2, -2.5}) {
      const auto m = ModelSpec::kuramoto_sakaguchi(0.4, 1.7, delta);
      const auto got = vector_field(m, PhaseVector(th), 0.0);
      const auto want = oracle::ks_field(th, 0.4, 1.7, delta);
      for (int j = 0; j < n; ++j) CHECK(got[j] == doctest::Approx(want[j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("higher-order field matches the literal O(N^2) sum") {
  for (int n : {3, 5, 9}) {
    const auto th = oracle::random_state(n, 200 + n);
    for (double delta : {0.0, 1.1, pi / 2}) {
      const auto m = ModelSpec::higher_order(-0.2, 1.3, delta);
      const auto got = vector_field(m, PhaseVector(th), 0.0);
      const auto want = oracle::ho_field(th, -0.2, 1.3, delta);
      for (int j = 0; j < n; ++j) CHECK(got[j] == doctest::Approx(want[j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("fgh partials agree with central differences") {
  const int n = 6;
  const auto th = oracle::random_state(n, 7);
  for (const auto& m : {ModelSpec::kuramoto_sakaguchi(0.1, 1.2, 0.8),
                        ModelSpec::higher_order(0.1, 1.2, 0.8),
                        ModelSpec::theta(ThetaInput::sinusoid())}) {
    const FghPartials p = fgh_partials(m, PhaseVector(th), 0.3);
    const double h = 1e-6;
    for (int j = 0; j < n; ++j) {
      auto up = th;
      auto dn = th;
      up[j] += h;
      dn[j] -= h;
      const Fgh a = evaluate_fgh(m, std::span<const double>(up), 0.3);
      const Fgh b = evaluate_fgh(m, std::span<const double>(dn), 0.3);
      CHECK(p.df[j] == doctest::Approx((a.f - b.f) / (2 * h)).epsilon(1e-7));
      CHECK(p.dg[j] == doctest::Approx((a.g - b.g) / (2 * h)).epsilon(1e-6));
      CHECK(p.dh[j] == doctest::Approx((a.h - b.h) / (2 * h)).epsilon(1e-6));
    }
  }
}

TEST_CASE("order parameters") {
  const OrderParameters sync = order_parameters(PhaseVector{1.0, 1.0, 1.0, 1.0});
  CHECK(sync.r1 == doctest::Approx(1.0));
  CHECK(sync.r2 == doctest::Approx(1.0));
  const OrderParameters splay = order_parameters(PhaseVector{0.0, pi / 2, pi, 3 * pi / 2});
  CHECK(splay.r1 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(splay.r2 == doctest::Approx(0.0).epsilon(1e-12));
  const OrderParameters anti = order_parameters(PhaseVector{0.0, pi});
  CHECK(anti.r1 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(anti.r2 == doctest::Approx(1.0));
}

TEST_CASE("Lambda: closed forms match the partial-derivative definition") {
  for (int seed = 0; seed < 20; ++seed) {
    const PhaseVector s(oracle::random_state(8, 300 + seed));
    for (double delta : {0.0, 0.5, pi / 2, -1.0}) {
      const auto ks = ModelSpec::kuramoto_sakaguchi(0.0, 1.4, delta);
      CHECK(lambda_analytic(ks, s, 0.0) == doctest::Approx(-1.4 * std::cos(delta)));
      CHECK(std::abs(lambda_from_partials(ks, s, 0.0) + 1.4 * std::cos(delta)) <= 1e-10 * 1.4);

      const auto ho = ModelSpec::higher_order(0.0, 1.4, delta);
      const OrderParameters r = order_parameters(s);
      const double want = -2 * 1.4 * r.r1 * r.r1 * std::cos(delta) + 1.4 * r.r2 * r.r2 * std::cos(delta);
      CHECK(std::abs(lambda_from_partials(ho, s, 0.0) - want) <= 1e-10 * std::max(1.0, std::abs(want)));
      CHECK(std::abs(lambda_analytic(ho, s, 0.0) - want) <= 1e-12 * std::max(1.0, std::abs(want)));
    }
    CHECK(lambda_from_partials(ModelSpec::theta(ThetaInput::sinusoid()), s, 1.3) == 0.0);
    CHECK(lambda_analytic(ModelSpec::theta(ThetaInput::constant(2.0)), s, 1.3) == 0.0);
  }
}

TEST_CASE("vector_field rejects mismatched output span") {
  const auto m = ModelSpec::kuramoto_sakaguchi(0.0, 1.0, 0.0);
  std::vector<double> th{0.1, 0.2, 0.3};
  std::vector<double> out(2);
  CHECK_THROWS_AS(vector_field(m, th, 0.0, out), InvalidArgument);
}
