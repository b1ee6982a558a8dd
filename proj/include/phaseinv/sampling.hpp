#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "phaseinv/core.hpp"
#include "phaseinv/models.hpp"

namespace phaseinv {

inline constexpr double kDefaultClip = 1e2;
inline constexpr std::uint64_t kDefaultProposalBudget = 1'000'000;

struct AcceptanceStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  /// Proposals discarded by the collision guard before weighting.
  std::uint64_t guard_rejections = 0;
  double rate() const { return proposals ? static_cast<double>(accepted) / proposals : 0.0; }
};

/// Particle cloud stored row-major: sample i occupies phases[i*n .. i*n+n).
struct Ensemble {
  int n = 0;
  std::vector<double> phases;
  std::uint64_t seed = 0;
  Permutation q;
  double clip = kDefaultClip;
  AcceptanceStats stats;

  std::size_t count() const { return n ? phases.size() / static_cast<std::size_t>(n) : 0; }
  std::span<const double> sample(std::size_t i) const {
    return {phases.data() + i * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
  }
  PhaseVector state(std::size_t i) const;
};

struct SamplerOptions {
  CollisionGuard guard{};
  /// Per-sample proposal budget; exhausting it raises BudgetExceeded.
  std::uint64_t proposal_budget = kDefaultProposalBudget;
};

/// Rejection sampler for the weight min(|psi_q|, clip). Sample i draws from
/// substream(seed, i), so results do not depend on evaluation order.
Ensemble sample_clipped_psi(int n, const Permutation& q, double clip, std::size_t count,
                            std::uint64_t seed, const SamplerOptions& options = {});

/// Uniform states on the torus (guarded), for reference comparisons.
Ensemble sample_uniform(int n, std::size_t count, std::uint64_t seed,
                        const SamplerOptions& options = {});

/// amplitude * exp(lambda t) * min(|psi_q(state)|, clip).
double analytic_density(const PhaseVector& state, const Permutation& q, double lambda, double t,
                        double clip, double amplitude = 1.0, const CollisionGuard& guard = {});

struct Snapshot {
  double t = 0.0;
  Ensemble ensemble;
};

/// Advances every particle with fixed-step RK4 (wrapping after each step) and
/// returns the cloud at each requested time. Times must be non-decreasing and
/// non-negative; the ensemble is taken to sit at t = 0.
std::vector<Snapshot> evolve_ensemble(const Ensemble& initial, const ModelSpec& model,
                                      const std::vector<double>& snapshot_times, double dt);

/// B x B counts over the wrapped plane (x, y) = (theta1 - theta2, theta2 - theta3)
/// in [-pi, pi)^2. counts[ix * B + iy].
struct PlaneHistogram {
  int bins = 0;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  std::uint64_t at(int ix, int iy) const {
    return counts[static_cast<std::size_t>(ix) * static_cast<std::size_t>(bins) +
                  static_cast<std::size_t>(iy)];
  }
  double edge(int k) const;  // lower edge of bin k along either axis
};

/// Requires N = 3.
PlaneHistogram plane_histogram(const Ensemble& ensemble, int bins);
PlaneHistogram plane_histogram(const std::vector<PhaseVector>& states, int bins);
/// Bin index of a wrapped plane coordinate.
int plane_bin(double coordinate, int bins);

/// True when the closed bin rectangle meets x = 0, y = 0 or x + y = 0 (mod 2pi),
/// where the density is unbounded.
bool bin_touches_singular_lines(const PlaneHistogram& hist, int ix, int iy);

struct ComparisonOptions {
  double heavy_threshold = 500.0;
  /// Midpoint-rule sub-grid per bin side for integrating the density.
  int subgrid = 8;
};

struct DensityComparison {
  double max_rel_err = 0.0;
  int heavy_bin_count = 0;
  int guarded_bin_count = 0;
  int worst_ix = -1;
  int worst_iy = -1;
  /// Pearson chi-square over heavy bins (counts renormalised to heavy mass).
  double chi_square = 0.0;
  int dof = 0;
  double p_value = 0.0;
  /// Heavy bins whose quadrature grid hit the clip.
  int clipped_heavy_bins = 0;
  /// Mean relative error expected from counting noise alone, sqrt(2/pi)/sqrt(count).
  double expected_noise = 0.0;
};

/// Compares a histogram with an arbitrary non-negative plane weight w(x, y).
DensityComparison histogram_vs_weight(const PlaneHistogram& hist,
                                      const std::function<double(double, double)>& weight,
                                      const ComparisonOptions& options = {},
                                      double clip = kDefaultClip);

/// Integrates analytic_density over each guarded bin (the mean phase factors
/// out), normalises both sides over guarded bins and reports the largest
/// relative error on bins with expected count >= heavy_threshold.
DensityComparison histogram_vs_density(const PlaneHistogram& hist, const Permutation& q,
                                       double lambda, double t, double clip,
                                       const ComparisonOptions& options = {});

/// Same comparison against the clipped initial weight carried by the flow.
/// rho / (|psi| e^{lambda t}) is constant along trajectories, so
/// rho_t(x) = e^{lambda t} |psi(x)| min(1, clip / |psi(Phi_{-t} x)|); the
/// pre-image Phi_{-t} x is found by integrating the model backward to t = 0.
/// Agrees with histogram_vs_density at t = 0 and whenever |psi| is conserved.
DensityComparison histogram_vs_transported_density(const PlaneHistogram& hist, const Permutation& q,
                                                   const ModelSpec& model, double lambda, double t,
                                                   double clip, double dt = 0.01,
                                                   const ComparisonOptions& options = {});

}  // namespace phaseinv
