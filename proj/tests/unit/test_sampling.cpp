#include <doctest.h>

#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "oracles.hpp"
#include "phaseinv/invariants.hpp"
#include "phaseinv/sampling.hpp"

using namespace phaseinv;
using oracle::pi;

namespace {

double uniform_chi_square_p(const PlaneHistogram& h) {
  const double e = static_cast<double>(h.total) / static_cast<double>(h.counts.size());
  double chi = 0.0;
  for (auto c : h.counts) chi += (c - e) * (c - e) / e;
  const boost::math::chi_squared dist(static_cast<double>(h.counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, chi));
}

double singular_fraction(const PlaneHistogram& h) {
  double near = 0.0;
  for (int ix = 0; ix < h.bins; ++ix) {
    for (int iy = 0; iy < h.bins; ++iy) {
      if (bin_touches_singular_lines(h, ix, iy)) near += static_cast<double>(h.at(ix, iy));
    }
  }
  return near / static_cast<double>(h.total);
}

}  // namespace

TEST_CASE("sampler argument checks") {
  const Permutation q{1, 2, 3};
  CHECK_THROWS_AS(sample_clipped_psi(2, Permutation{1, 2}, 1.0, 10, 1), InvalidArgument);
  CHECK_THROWS_AS(sample_clipped_psi(3, q, 0.0, 10, 1), InvalidArgument);
  CHECK_THROWS_AS(sample_clipped_psi(3, q, 1.0, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(sample_clipped_psi(4, q, 1.0, 10, 1), InvalidArgument);
}

TEST_CASE("sampler is seed-deterministic and order independent") {
  const Permutation q{1, 2, 3};
  const Ensemble a = sample_clipped_psi(3, q, 100.0, 500, 42);
  const Ensemble b = sample_clipped_psi(3, q, 100.0, 500, 42);
  const Ensemble prefix = sample_clipped_psi(3, q, 100.0, 200, 42);
  const Ensemble other = sample_clipped_psi(3, q, 100.0, 500, 43);
  CHECK(a.phases == b.phases);
  CHECK(std::equal(prefix.phases.begin(), prefix.phases.end(), a.phases.begin()));
  CHECK(a.phases != other.phases);
  CHECK(a.count() == 500);
  CHECK(a.stats.accepted == 500);
  CHECK(a.stats.proposals >= 500);
}

TEST_CASE("every sample passes the guard") {
  const Ensemble e = sample_clipped_psi(4, Permutation{1, 3, 2, 4}, 100.0, 2000, 7);
  for (std::size_t i = 0; i < e.count(); ++i) CHECK(passes_guard(e.state(i), CollisionGuard{}));
}

TEST_CASE("proposal budget") {
  SamplerOptions opt;
  opt.proposal_budget = 1;
  // With clip = 1e6 almost every proposal is rejected.
  CHECK_THROWS_AS(sample_clipped_psi(3, Permutation{1, 2, 3}, 1e6, 100, 1, opt), BudgetExceeded);
}

TEST_CASE("tiny clip saturates the weight: samples are uniform") {
  const Ensemble e = sample_clipped_psi(3, Permutation{1, 2, 3}, 1e-9, 200000, 3);
  CHECK(e.stats.rate() > 0.999);
  CHECK(uniform_chi_square_p(plane_histogram(e, 20)) > 0.01);
}

TEST_CASE("uniform ensemble fills plane bins evenly") {
  const Ensemble e = sample_uniform(3, 1000000, 11);
  const PlaneHistogram h = plane_histogram(e, 20);
  CHECK(h.total == 1000000);
  std::uint64_t sum = 0;
  for (auto c : h.counts) sum += c;
  CHECK(sum == h.total);
  CHECK(uniform_chi_square_p(h) > 0.01);
}

TEST_CASE("plane histogram coordinates") {
  // (x, y) = (-0.001, 0.001): central bins on either side of zero.
  const PlaneHistogram h = plane_histogram(std::vector<PhaseVector>{PhaseVector{1.0, 1.001, 1.0}}, 50);
  CHECK(h.total == 1);
  CHECK(h.at(24, 25) == 1);
  CHECK(plane_bin(pi, 10) == 0);
  CHECK(plane_bin(-pi, 10) == 0);
  CHECK(plane_bin(pi - 1e-12, 10) == 9);
  CHECK_THROWS_AS(plane_histogram(std::vector<PhaseVector>{PhaseVector{1.0, 2.0}}, 10), InvalidArgument);
  Ensemble four = sample_uniform(4, 10, 1);
  CHECK_THROWS_AS(plane_histogram(four, 10), InvalidArgument);
}

TEST_CASE("singular-line bins") {
  PlaneHistogram h;
  h.bins = 10;
  h.counts.assign(100, 0);
  CHECK(bin_touches_singular_lines(h, 4, 0));   // x in [-0.2pi, 0]
  CHECK(bin_touches_singular_lines(h, 5, 0));   // x in [0, 0.2pi]
  CHECK(bin_touches_singular_lines(h, 1, 8));   // x + y spans 0
  CHECK(bin_touches_singular_lines(h, 0, 0));   // corner x + y = -2pi
  CHECK_FALSE(bin_touches_singular_lines(h, 7, 7));
  CHECK_FALSE(bin_touches_singular_lines(h, 2, 2));
}

TEST_CASE("analytic density") {
  const PhaseVector s{0.0, 2.0, 4.0};
  const Permutation q{1, 2, 3};
  const double w = std::abs(psi(s, q));
  CHECK(analytic_density(s, q, -1.0, 0.0, 100.0) == doctest::Approx(w));
  CHECK(analytic_density(s, q, -1.0, 2.0, 100.0, 3.0) == doctest::Approx(3.0 * w * std::exp(-2.0)));
  CHECK(analytic_density(s, q, 0.0, 7.0, 100.0) == doctest::Approx(w));
  CHECK(analytic_density(s, q, 0.0, 0.0, 0.5) == 0.5);
  CHECK_THROWS_AS(analytic_density(PhaseVector{0.0, 1e-9, 1.0}, q, 0.0, 0.0, 100.0), SingularState);
}

TEST_CASE("fresh sample matches the clipped density; uniform does not") {
  const Permutation q{1, 2, 3};
  const Ensemble e = sample_clipped_psi(3, q, 100.0, 200000, 2024);
  const DensityComparison c = histogram_vs_density(plane_histogram(e, 10), q, 0.0, 0.0, 100.0);
  // The weight concentrates near the collision lines, so only a handful of bins clear 500 counts.
  CHECK(c.heavy_bin_count >= 5);
  CHECK(c.max_rel_err < 0.15);
  CHECK(c.p_value > 1e-3);

  const Ensemble u = sample_uniform(3, 200000, 2024);
  const DensityComparison bad = histogram_vs_density(plane_histogram(u, 10), q, 0.0, 0.0, 100.0);
  CHECK(bad.max_rel_err > 0.5);

  PlaneHistogram empty;
  empty.bins = 10;
  empty.counts.assign(100, 0);
  empty.counts[77] = 5;
  empty.total = 5;
  CHECK_THROWS_AS(histogram_vs_density(empty, q, 0.0, 0.0, 100.0), InsufficientData);
}

TEST_CASE("the growth rate cancels under normalisation") {
  const Permutation q{1, 3, 2};
  const Ensemble e = sample_clipped_psi(3, q, 100.0, 50000, 5);
  const PlaneHistogram h = plane_histogram(e, 8);
  ComparisonOptions opt;
  opt.heavy_threshold = 50.0;
  const auto a = histogram_vs_density(h, q, 0.0, 0.0, 100.0, opt);
  const auto b = histogram_vs_density(h, q, -1.0, 2.0, 100.0, opt);
  CHECK(a.max_rel_err == doctest::Approx(b.max_rel_err).epsilon(1e-9));
}

TEST_CASE("ensemble evolution") {
  const Permutation q{1, 2, 3};
  const Ensemble e = sample_clipped_psi(3, q, 100.0, 20000, 9);
  const auto snaps = evolve_ensemble(e, ModelSpec::kuramoto_sakaguchi(0.0, 1.0, 0.0), {0.0, 2.0}, 0.05);
  REQUIRE(snaps.size() == 2);
  CHECK(snaps[0].ensemble.phases == e.phases);
  // Attractive coupling moves mass toward the collision lines.
  CHECK(singular_fraction(plane_histogram(snaps[1].ensemble, 20)) >
        singular_fraction(plane_histogram(snaps[0].ensemble, 20)) + 0.1);
  const auto again = evolve_ensemble(e, ModelSpec::kuramoto_sakaguchi(0.0, 1.0, 0.0), {2.0}, 0.05);
  CHECK(again[0].ensemble.phases == snaps[1].ensemble.phases);
  CHECK_THROWS_AS(evolve_ensemble(e, ModelSpec::kuramoto_sakaguchi(0.0, 1.0, 0.0), {2.0, 1.0}, 0.05),
                  InvalidArgument);
}

TEST_CASE("transported density reduces to the clipped density when nothing moves") {
  const Permutation q{1, 2, 3};
  const Ensemble e = sample_clipped_psi(3, q, 100.0, 50000, 12);
  const PlaneHistogram h = plane_histogram(e, 10);
  ComparisonOptions opt;
  opt.heavy_threshold = 50.0;
  const auto plain = histogram_vs_density(h, q, 0.0, 0.0, 100.0, opt);
  const auto moved = histogram_vs_transported_density(h, q, ModelSpec::kuramoto_sakaguchi(0.0, 1.0, 0.0), 0.0,
                                                      0.0, 100.0, 0.05, opt);
  CHECK(moved.max_rel_err == doctest::Approx(plain.max_rel_err).epsilon(1e-12));
  // KS at pi/2 conserves |psi|, so the pre-image sees the same clip.
  const auto half = histogram_vs_transported_density(h, q, ModelSpec::kuramoto_sakaguchi(0.0, 1.0, pi / 2), 0.0,
                                                     3.0, 100.0, 0.05, opt);
  CHECK(half.max_rel_err == doctest::Approx(plain.max_rel_err).epsilon(1e-6));
}

TEST_CASE("attractive transport: mass near synchrony follows the pre-image clip") {
  const Permutation q{1, 2, 3};
  const auto ks = ModelSpec::kuramoto_sakaguchi(0.0, 1.0, 0.0);
  const Ensemble e = sample_clipped_psi(3, q, 100.0, 200000, 21);
  const auto snaps = evolve_ensemble(e, ks, {1.0}, 0.05);
  const PlaneHistogram h = plane_histogram(snaps[0].ensemble, 25);
  ComparisonOptions opt;
  opt.heavy_threshold = 200.0;
  const auto moved = histogram_vs_transported_density(h, q, ks, -1.0, 1.0, 100.0, 0.05, opt);
  CHECK(moved.p_value > 1e-3);
  CHECK(moved.max_rel_err < 0.25);
  // Clipping the target itself underestimates bins whose pre-image was below the clip.
  const auto clipped = histogram_vs_density(h, q, -1.0, 1.0, 100.0, opt);
  CHECK(clipped.max_rel_err > 1.0);
}
