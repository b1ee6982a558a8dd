#include "phaseinv/sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>

#include "phaseinv/integrate.hpp"
#include "phaseinv/random.hpp"

namespace phaseinv {
namespace {

double abs_psi_raw(std::span<const double> th, const Permutation& q) {
  double prod = 1.0;
  const std::size_t n = q.size();
  for (std::size_t j = 0; j < n; ++j) {
    prod *= std::sin(0.5 * (th[static_cast<std::size_t>(q[j] - 1)] -
                            th[static_cast<std::size_t>(q[(j + 1) % n] - 1)]));
  }
  return 1.0 / std::abs(prod);
}

bool raw_guarded(std::span<const double> th, double eps) {
  for (std::size_t i = 0; i < th.size(); ++i) {
    for (std::size_t j = i + 1; j < th.size(); ++j) {
      if (circular_distance(th[i], th[j]) <= eps) return false;
    }
  }
  return true;
}

void check_clip(double clip) {
  if (!(clip > 0.0) || !std::isfinite(clip)) throw InvalidArgument("clip must be positive");
}

bool touches_multiple_of_two_pi(double lo, double hi) {
  constexpr double slack = 1e-12;
  const double k = std::ceil((lo - slack) / kTwoPi);
  return k * kTwoPi <= hi + slack;
}

}  // namespace

PhaseVector Ensemble::state(std::size_t i) const {
  const auto s = sample(i);
  return PhaseVector(std::vector<double>(s.begin(), s.end()));
}

Ensemble sample_clipped_psi(int n, const Permutation& q, double clip, std::size_t count,
                            std::uint64_t seed, const SamplerOptions& options) {
  if (n < 3) throw InvalidArgument("sample_clipped_psi: N must be at least 3");
  if (q.size() != static_cast<std::size_t>(n)) {
    throw InvalidArgument("sample_clipped_psi: permutation size does not match N");
  }
  check_clip(clip);
  if (count == 0) throw InvalidArgument("sample_clipped_psi: count must be positive");

  Ensemble ens{n, {}, seed, q, clip, {}};
  ens.phases.resize(count * static_cast<std::size_t>(n));
  std::vector<double> th(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < count; ++i) {
    auto rng = substream(seed, i);
    std::uint64_t tries = 0;
    for (;;) {
      if (++tries > options.proposal_budget) {
        throw BudgetExceeded("sample_clipped_psi: proposal budget exhausted for sample " +
                             std::to_string(i));
      }
      for (double& v : th) v = uniform_phase(rng);
      const double u = uniform01(rng);
      if (!raw_guarded(th, options.guard.epsilon)) {
        ++ens.stats.guard_rejections;
        continue;
      }
      if (u * clip < std::min(abs_psi_raw(th, q), clip)) break;
    }
    ens.stats.proposals += tries;
    ++ens.stats.accepted;
    std::copy(th.begin(), th.end(), ens.phases.begin() + static_cast<std::ptrdiff_t>(i * th.size()));
  }
  return ens;
}

Ensemble sample_uniform(int n, std::size_t count, std::uint64_t seed,
                        const SamplerOptions& options) {
  if (n < 1) throw InvalidArgument("sample_uniform: N must be positive");
  if (count == 0) throw InvalidArgument("sample_uniform: count must be positive");
  Ensemble ens{n, {}, seed, Permutation::identity(n), 0.0, {}};
  ens.phases.resize(count * static_cast<std::size_t>(n));
  std::vector<double> th(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < count; ++i) {
    auto rng = substream(seed, i);
    for (;;) {
      for (double& v : th) v = uniform_phase(rng);
      ++ens.stats.proposals;
      if (raw_guarded(th, options.guard.epsilon)) break;
      ++ens.stats.guard_rejections;
    }
    ++ens.stats.accepted;
    std::copy(th.begin(), th.end(), ens.phases.begin() + static_cast<std::ptrdiff_t>(i * th.size()));
  }
  return ens;
}

double analytic_density(const PhaseVector& state, const Permutation& q, double lambda, double t,
                        double clip, double amplitude, const CollisionGuard& guard) {
  check_clip(clip);
  if (!(amplitude > 0.0)) throw InvalidArgument("analytic_density: amplitude must be positive");
  if (q.size() != state.size()) {
    throw InvalidArgument("analytic_density: permutation size does not match state");
  }
  require_guard(state, guard);
  return amplitude * std::exp(lambda * t) * std::min(abs_psi_raw(state.phases(), q), clip);
}

std::vector<Snapshot> evolve_ensemble(const Ensemble& initial, const ModelSpec& model,
                                      const std::vector<double>& snapshot_times, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("evolve_ensemble: dt must be positive");
  std::vector<long long> steps;
  long long prev = 0;
  for (double t : snapshot_times) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw InvalidArgument("evolve_ensemble: snapshot times must be finite and non-negative");
    }
    const long long k = std::llround(t / dt);
    if (k < prev) throw InvalidArgument("evolve_ensemble: snapshot times must be non-decreasing");
    steps.push_back(k);
    prev = k;
  }
  std::vector<Snapshot> out;
  out.reserve(snapshot_times.size());
  for (double t : snapshot_times) {
    Snapshot s{t, initial};
    out.push_back(std::move(s));
  }
  const auto n = static_cast<std::size_t>(initial.n);
  std::vector<double> x(n);
  Rk4Stepper stepper(n);
  for (std::size_t i = 0; i < initial.count(); ++i) {
    const auto src = initial.sample(i);
    std::copy(src.begin(), src.end(), x.begin());
    long long k = 0;
    for (std::size_t s = 0; s < steps.size(); ++s) {
      for (; k < steps[s]; ++k) {
        stepper.step(model, x, static_cast<double>(k) * dt, dt);
        for (double& v : x) v = wrap_phase(v);
      }
      std::copy(x.begin(), x.end(),
                out[s].ensemble.phases.begin() + static_cast<std::ptrdiff_t>(i * n));
    }
  }
  return out;
}

double PlaneHistogram::edge(int k) const {
  return -std::numbers::pi + kTwoPi * static_cast<double>(k) / static_cast<double>(bins);
}

int plane_bin(double coordinate, int bins) {
  const double c = wrap_centered(coordinate);
  const auto k = static_cast<int>(std::floor((c + std::numbers::pi) / kTwoPi * bins));
  return std::clamp(k, 0, bins - 1);
}

namespace {

PlaneHistogram histogram_from(std::size_t count, int bins,
                              const std::function<std::span<const double>(std::size_t)>& get) {
  if (bins <= 0) throw InvalidArgument("plane_histogram: bins must be positive");
  PlaneHistogram h;
  h.bins = bins;
  h.counts.assign(static_cast<std::size_t>(bins) * static_cast<std::size_t>(bins), 0);
  for (std::size_t i = 0; i < count; ++i) {
    const auto th = get(i);
    if (th.size() != 3) throw InvalidArgument("plane_histogram: states must have N = 3");
    const int ix = plane_bin(th[0] - th[1], bins);
    const int iy = plane_bin(th[1] - th[2], bins);
    ++h.counts[static_cast<std::size_t>(ix) * static_cast<std::size_t>(bins) +
               static_cast<std::size_t>(iy)];
    ++h.total;
  }
  return h;
}

}  // namespace

PlaneHistogram plane_histogram(const Ensemble& ensemble, int bins) {
  if (ensemble.n != 3) throw InvalidArgument("plane_histogram: ensemble must have N = 3");
  return histogram_from(ensemble.count(), bins, [&](std::size_t i) { return ensemble.sample(i); });
}

PlaneHistogram plane_histogram(const std::vector<PhaseVector>& states, int bins) {
  return histogram_from(states.size(), bins, [&](std::size_t i) { return states[i].phases(); });
}

bool bin_touches_singular_lines(const PlaneHistogram& hist, int ix, int iy) {
  const double x0 = hist.edge(ix);
  const double x1 = hist.edge(ix + 1);
  const double y0 = hist.edge(iy);
  const double y1 = hist.edge(iy + 1);
  return touches_multiple_of_two_pi(x0, x1) || touches_multiple_of_two_pi(y0, y1) ||
         touches_multiple_of_two_pi(x0 + y0, x1 + y1);
}

DensityComparison histogram_vs_weight(const PlaneHistogram& hist,
                                      const std::function<double(double, double)>& weight,
                                      const ComparisonOptions& options, double clip) {
  const int b = hist.bins;
  if (b <= 0 || hist.counts.size() != static_cast<std::size_t>(b) * static_cast<std::size_t>(b)) {
    throw InvalidArgument("histogram_vs_weight: malformed histogram");
  }
  if (options.subgrid <= 0) throw InvalidArgument("histogram_vs_weight: subgrid must be positive");
  const double width = kTwoPi / b;
  const int m = options.subgrid;

  struct Cell {
    int ix, iy;
    double w;
    double count;
    bool clipped;
  };
  std::vector<Cell> cells;
  double w_sum = 0.0;
  double c_sum = 0.0;
  for (int ix = 0; ix < b; ++ix) {
    for (int iy = 0; iy < b; ++iy) {
      if (bin_touches_singular_lines(hist, ix, iy)) continue;
      double w = 0.0;
      bool clipped = false;
      for (int a = 0; a < m; ++a) {
        const double x = hist.edge(ix) + (a + 0.5) * width / m;
        for (int c = 0; c < m; ++c) {
          const double y = hist.edge(iy) + (c + 0.5) * width / m;
          const double v = weight(x, y);
          if (!(v >= 0.0) || !std::isfinite(v)) {
            throw NumericalFailure("histogram_vs_weight: weight must be finite and non-negative");
          }
          if (v >= clip) clipped = true;
          w += v;
        }
      }
      const auto count = static_cast<double>(hist.at(ix, iy));
      cells.push_back({ix, iy, w, count, clipped});
      w_sum += w;
      c_sum += count;
    }
  }
  DensityComparison out;
  out.guarded_bin_count = static_cast<int>(cells.size());
  if (!(w_sum > 0.0) || !(c_sum > 0.0)) {
    throw InsufficientData("histogram_vs_weight: no mass on guarded bins");
  }

  double heavy_p = 0.0;
  double heavy_c = 0.0;
  double noise = 0.0;
  for (const Cell& cell : cells) {
    const double p = cell.w / w_sum;
    const double expected = p * c_sum;
    if (expected < options.heavy_threshold) continue;
    ++out.heavy_bin_count;
    heavy_p += p;
    heavy_c += cell.count;
    noise += std::sqrt(2.0 / std::numbers::pi / expected);
    if (cell.clipped) ++out.clipped_heavy_bins;
    const double err = std::abs(cell.count / c_sum - p) / p;
    if (err > out.max_rel_err) {
      out.max_rel_err = err;
      out.worst_ix = cell.ix;
      out.worst_iy = cell.iy;
    }
  }
  if (out.heavy_bin_count == 0) {
    throw InsufficientData("histogram_vs_weight: no bin reaches the heavy threshold");
  }
  out.expected_noise = noise / out.heavy_bin_count;
  for (const Cell& cell : cells) {
    const double p = cell.w / w_sum;
    if (p * c_sum < options.heavy_threshold) continue;
    const double e = p / heavy_p * heavy_c;
    out.chi_square += (cell.count - e) * (cell.count - e) / e;
  }
  out.dof = out.heavy_bin_count - 1;
  if (out.dof > 0) {
    const boost::math::chi_squared dist(out.dof);
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.chi_square));
  } else {
    out.p_value = 1.0;
  }
  return out;
}

DensityComparison histogram_vs_density(const PlaneHistogram& hist, const Permutation& q,
                                       double lambda, double t, double clip,
                                       const ComparisonOptions& options) {
  if (q.size() != 3) throw InvalidArgument("histogram_vs_density: requires N = 3");
  check_clip(clip);
  const double scale = std::exp(lambda * t);
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw OutOfRange("histogram_vs_density: exp(lambda t) is not representable");
  }
  // Fix theta_1 = 0; the mean phase is a free direction of |psi|.
  auto weight = [&](double x, double y) {
    const double th[3] = {0.0, -x, -x - y};
    return scale * std::min(abs_psi_raw(th, q), clip);
  };
  return histogram_vs_weight(hist, weight, options, scale * clip);
}

DensityComparison histogram_vs_transported_density(const PlaneHistogram& hist, const Permutation& q,
                                                   const ModelSpec& model, double lambda, double t,
                                                   double clip, double dt,
                                                   const ComparisonOptions& options) {
  if (q.size() != 3) throw InvalidArgument("histogram_vs_transported_density: requires N = 3");
  check_clip(clip);
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("histogram_vs_transported_density: t must be >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("histogram_vs_transported_density: dt must be positive");
  const double scale = std::exp(lambda * t);
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw OutOfRange("histogram_vs_transported_density: exp(lambda t) is not representable");
  }
  const long steps = t > 0.0 ? std::max(1L, std::lround(std::ceil(t / dt))) : 0;
  const double h = steps > 0 ? t / static_cast<double>(steps) : 0.0;
  Rk4Stepper stepper(3);
  auto weight = [&](double x, double y) {
    const double th[3] = {0.0, -x, -x - y};
    const double here = abs_psi_raw(th, q);
    std::array<double, 3> back = {th[0], th[1], th[2]};
    try {
      for (long k = steps; k > 0; --k) stepper.step(model, back, static_cast<double>(k) * h, -h);
    } catch (const NumericalFailure&) {
      return 0.0;
    }
    const double origin = abs_psi_raw(back, q);
    if (!std::isfinite(origin)) return 0.0;
    return scale * here * std::min(1.0, clip / origin);
  };
  return histogram_vs_weight(hist, weight, options, scale * clip);
}

}  // namespace phaseinv
