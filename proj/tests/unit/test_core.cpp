#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "phaseinv/core.hpp"
#include "phaseinv/random.hpp"

using namespace phaseinv;
constexpr double pi = std::numbers::pi;

TEST_CASE("wrap_phase lands in [0, 2pi)") {
  CHECK(wrap_phase(0.0) == 0.0);
  CHECK(wrap_phase(kTwoPi) == 0.0);
  CHECK(wrap_phase(-0.5) == doctest::Approx(kTwoPi - 0.5));
  CHECK(wrap_phase(7.0 * kTwoPi + 1.0) == doctest::Approx(1.0));
  for (double x : {-1e6, -3.0, -1e-17, 0.0, 1e-17, 6.283185307179586, 1e6}) {
    const double w = wrap_phase(x);
    CHECK(w >= 0.0);
    CHECK(w < kTwoPi);
  }
  CHECK_THROWS_AS(wrap_phase(std::numeric_limits<double>::quiet_NaN()), InvalidArgument);
  CHECK_THROWS_AS(wrap_phase(std::numeric_limits<double>::infinity()), InvalidArgument);
}

TEST_CASE("wrap_centered and circular_distance") {
  CHECK(wrap_centered(pi) == doctest::Approx(-pi));
  CHECK(wrap_centered(-pi) == doctest::Approx(-pi));
  CHECK(wrap_centered(3.0 * pi / 2.0) == doctest::Approx(-pi / 2.0));
  CHECK(circular_distance(0.1, kTwoPi - 0.1) == doctest::Approx(0.2));
  CHECK(circular_distance(0.0, pi) == doctest::Approx(pi));
  CHECK(circular_distance(1.0, 1.0) == 0.0);
}

TEST_CASE("PhaseVector wraps on construction and uses 1-based at()") {
  const PhaseVector v{-0.5, 7.0, 1.0};
  CHECK(v[0] == doctest::Approx(kTwoPi - 0.5));
  CHECK(v.at(2) == doctest::Approx(7.0 - kTwoPi));
  CHECK(v.at(3) == 1.0);
  CHECK_THROWS(v.at(0));
  CHECK_THROWS(v.at(4));
}

TEST_CASE("Permutation validation and algebra") {
  CHECK_THROWS_AS(Permutation({1, 1, 2}), InvalidArgument);
  CHECK_THROWS_AS(Permutation({0, 1, 2}), InvalidArgument);
  CHECK_THROWS_AS(Permutation({1, 2, 4}), InvalidArgument);

  const Permutation q{2, 4, 1, 3};
  CHECK(q.cyclic(-1) == 3);
  CHECK(q.cyclic(4) == 2);
  CHECK(q.cyclic(9) == 4);
  CHECK(q.position_of(1) == 2);
  CHECK(q.compose(q.inverse()) == Permutation::identity(4));
  CHECK(q.inverse().compose(q) == Permutation::identity(4));
  CHECK(q.reversed() == Permutation{3, 1, 4, 2});
  CHECK(q.rotated(1) == Permutation{4, 1, 3, 2});

  CHECK(Permutation::identity(5).parity() == 1);
  CHECK(Permutation{2, 1, 3}.parity() == -1);
  CHECK(Permutation{2, 3, 1}.parity() == 1);
  // A 4-cycle is odd.
  CHECK(Permutation{2, 3, 4, 1}.parity() == -1);
}

TEST_CASE("parity is multiplicative under composition") {
  auto rng = substream(11, 0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> a{1, 2, 3, 4, 5, 6};
    std::vector<int> b = a;
    std::shuffle(a.begin(), a.end(), rng);
    std::shuffle(b.begin(), b.end(), rng);
    const Permutation pa(a);
    const Permutation pb(b);
    CHECK(pa.compose(pb).parity() == pa.parity() * pb.parity());
  }
}

TEST_CASE("collision guard") {
  CHECK_THROWS_AS(CollisionGuard(0.0), InvalidArgument);
  CHECK_THROWS_AS(CollisionGuard(-1.0), InvalidArgument);

  const PhaseVector v{0.0, 2.0, kTwoPi - 1e-7};
  const ClosestPair cp = closest_pair(v);
  CHECK(((cp.i == 1 && cp.j == 3) || (cp.i == 3 && cp.j == 1)));
  CHECK(cp.distance == doctest::Approx(1e-7).epsilon(1e-6));
  CHECK_FALSE(passes_guard(v, CollisionGuard{}));
  try {
    require_guard(v, CollisionGuard{});
    FAIL("expected SingularState");
  } catch (const SingularState& e) {
    const auto [i, j] = e.pair();
    CHECK(std::min(i, j) == 1);
    CHECK(std::max(i, j) == 3);
  }
  CHECK(passes_guard(PhaseVector{0.0, 1.0, 2.0}, CollisionGuard{}));
}

TEST_CASE("random_separated_state respects the separation") {
  auto rng = substream(5, 3);
  for (int k = 0; k < 100; ++k) {
    const PhaseVector s = random_separated_state(8, 0.2, rng);
    CHECK(closest_pair(s).distance > 0.2);
  }
}

TEST_CASE("substreams are deterministic and distinct") {
  auto a = substream(42, 7);
  auto b = substream(42, 7);
  auto c = substream(42, 8);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  auto r = substream(1, 1);
  for (int k = 0; k < 1000; ++k) {
    const double u = uniform01(r);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
