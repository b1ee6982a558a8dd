#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "phaseinv/integrate.hpp"
#include "phaseinv/invariants.hpp"

using namespace phaseinv;
using oracle::pi;

namespace {

// Theta model with I = 0: theta' = 1 - cos(theta), so cot(theta/2) decreases at unit rate.
double theta_zero_exact(double theta0, double t) {
  const double c = 1.0 / std::tan(theta0 / 2.0) - t;
  return 2.0 * (pi / 2.0 - std::atan(c));
}

double endpoint_error(double dt) {
  const auto m = ModelSpec::theta(ThetaInput::zero());
  const Trajectory tr = simulate(m, PhaseVector{1.0}, 0.0, 2.0, dt);
  return std::abs(wrap_centered(tr.states.back()[0] - theta_zero_exact(1.0, 2.0)));
}

}  // namespace

TEST_CASE("RK4 is fourth order on an exactly solvable theta neuron") {
  const double e1 = endpoint_error(0.02);
  const double e2 = endpoint_error(0.01);
  CHECK(e1 < 1e-6);
  CHECK(e1 / e2 > 14.0);
  CHECK(e1 / e2 < 18.0);
}

TEST_CASE("simulate records time grid and wraps") {
  const auto m = ModelSpec::kuramoto_sakaguchi(3.0, 1.0, 0.0);
  const Trajectory tr = simulate(m, PhaseVector{0.1, 2.0, 4.0}, 1.0, 3.0, 0.1);
  REQUIRE(tr.times.size() == 21);
  CHECK(tr.times.front() == 1.0);
  CHECK(tr.times.back() == doctest::Approx(3.0));
  for (const auto& s : tr.states) {
    for (double v : s.phases()) {
      CHECK(v >= 0.0);
      CHECK(v < kTwoPi);
    }
  }
  CHECK_FALSE(tr.first_guard_violation_time.has_value());
  CHECK(tr.guarded_prefix == tr.states.size());

  SimulateOptions every5;
  every5.record_every = 5;
  const Trajectory sparse = simulate(m, PhaseVector{0.1, 2.0, 4.0}, 1.0, 3.0, 0.1, every5);
  CHECK(sparse.times.size() == 5);
  CHECK(sparse.states.back() == tr.states.back());
}

TEST_CASE("simulate argument errors") {
  const auto m = ModelSpec::theta(ThetaInput::zero());
  CHECK_THROWS_AS(simulate(m, PhaseVector{0.1}, 1.0, 1.0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(simulate(m, PhaseVector{0.1}, 0.0, 1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(simulate(m, PhaseVector{0.1}, 0.0, 1.0, -0.1), InvalidArgument);
}

TEST_CASE("synchronisation is recorded, not fatal") {
  // Attractive coupling pulls two close oscillators into the guard.
  const auto m = ModelSpec::kuramoto_sakaguchi(0.0, 1.0, 0.0);
  const Trajectory tr = simulate(m, PhaseVector{0.0, 0.1}, 0.0, 30.0, 0.01);
  REQUIRE(tr.first_guard_violation_time.has_value());
  CHECK(*tr.first_guard_violation_time > 0.0);
  CHECK(tr.guarded_prefix < tr.states.size());
  CHECK(tr.times.back() == doctest::Approx(30.0));
}

TEST_CASE("Psi is conserved along KS trajectories while psi decays at rate K cos(delta)") {
  const int n = 6;
  const auto m = ModelSpec::kuramoto_sakaguchi(0.0, 1.0, 0.0);
  const PhaseVector s0(oracle::random_state(n, 61, 0.3));
  const Trajectory tr = simulate(m, s0, 0.0, 1.0, 1e-3);
  const Permutation q1 = Permutation::identity(n);
  const Permutation q2{1, 3, 5, 2, 6, 4};
  const Observable big{"Psi", [&](const PhaseVector& s) { return big_psi(s, q1, q2); }};
  const DriftReport r = observable_drift(tr, big);
  CHECK(r.max_rel_drift < 1e-9);
  CHECK(r.samples == tr.states.size());

  // Along the flow, psi'/psi = -(Lambda + div F). Only Psi is invariant.
  const Observable single{"psi", [&](const PhaseVector& s) { return psi(s, q1); }};
  CHECK(observable_drift(tr, single).max_rel_drift > 1e-3);
}

TEST_CASE("KS at delta = pi/2 conserves psi itself") {
  const int n = 7;
  const auto m = ModelSpec::kuramoto_sakaguchi(0.5, 1.0, pi / 2);
  const Trajectory tr = simulate(m, PhaseVector(oracle::random_state(n, 62, 0.2)), 0.0, 5.0, 1e-3);
  const Observable single{"psi", [&](const PhaseVector& s) { return psi(s, Permutation::identity(n)); }};
  CHECK(observable_drift(tr, single).max_rel_drift < 1e-9);
}

TEST_CASE("drift window and undefined initial observable") {
  const auto m = ModelSpec::kuramoto_sakaguchi(0.0, 1.0, 0.0);
  const Trajectory tr = simulate(m, PhaseVector{0.0, 1.0, 2.0}, 0.0, 2.0, 0.01);
  const Observable t_like{"theta1", [](const PhaseVector& s) { return s[0] + 1.0; }};
  CHECK(observable_drift(tr, t_like, 1.0).samples == 101);
  const Observable bad{"bad", [](const PhaseVector&) -> double { throw BranchPoint("x"); }};
  CHECK_THROWS_AS(observable_drift(tr, bad), InvalidArgument);
}

TEST_CASE("cyclic order starts at oscillator 1") {
  CHECK(cyclic_order(PhaseVector{2.0, 0.5, 3.0, 1.0}) == std::vector<int>{1, 3, 2, 4});
}
