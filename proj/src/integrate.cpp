#include "phaseinv/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace phaseinv {

Rk4Stepper::Rk4Stepper(std::size_t n) : k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n) {}

void Rk4Stepper::step(const ModelSpec& model, std::span<double> x, double t, double dt) {
  const std::size_t n = x.size();
  if (n != k1_.size()) throw InvalidArgument("Rk4Stepper: state size mismatch");
  const double half = 0.5 * dt;
  vector_field(model, x, t, k1_);
  for (std::size_t j = 0; j < n; ++j) tmp_[j] = x[j] + half * k1_[j];
  vector_field(model, tmp_, t + half, k2_);
  for (std::size_t j = 0; j < n; ++j) tmp_[j] = x[j] + half * k2_[j];
  vector_field(model, tmp_, t + half, k3_);
  for (std::size_t j = 0; j < n; ++j) tmp_[j] = x[j] + dt * k3_[j];
  vector_field(model, tmp_, t + dt, k4_);
  for (std::size_t j = 0; j < n; ++j) {
    x[j] += dt / 6.0 * (k1_[j] + 2.0 * k2_[j] + 2.0 * k3_[j] + k4_[j]);
    if (!std::isfinite(x[j])) throw NumericalFailure("rk4: non-finite phase after step");
  }
}

PhaseVector rk4_step(const ModelSpec& model, const PhaseVector& state, double t, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("rk4_step: dt must be positive");
  std::vector<double> x(state.values());
  Rk4Stepper stepper(x.size());
  stepper.step(model, x, t, dt);
  return PhaseVector(std::move(x));
}

Trajectory simulate(const ModelSpec& model, const PhaseVector& initial, double t0, double t_end,
                    double dt, const SimulateOptions& options) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("simulate: dt must be positive");
  if (!(t_end > t0)) throw InvalidArgument("simulate: t_end must exceed t0");
  if (initial.size() == 0) throw InvalidArgument("simulate: empty initial state");
  const std::size_t every = std::max<std::size_t>(1, options.record_every);
  const auto steps = static_cast<std::size_t>(std::llround((t_end - t0) / dt));
  if (steps == 0) throw InvalidArgument("simulate: interval shorter than one step");

  Trajectory traj{model, dt, {}, {}, std::nullopt, 0};
  traj.times.reserve(steps / every + 2);
  traj.states.reserve(steps / every + 2);

  std::vector<double> x(initial.values());
  Rk4Stepper stepper(x.size());
  bool guarded = true;
  auto record = [&](std::size_t k, const PhaseVector& s) {
    const double t = t0 + static_cast<double>(k) * dt;
    if (guarded && s.size() >= 2 && !passes_guard(s, options.guard)) {
      guarded = false;
      traj.first_guard_violation_time = t;
    }
    if (guarded) ++traj.guarded_prefix;
    traj.times.push_back(t);
    traj.states.push_back(s);
  };

  record(0, initial);
  for (std::size_t k = 1; k <= steps; ++k) {
    stepper.step(model, x, t0 + static_cast<double>(k - 1) * dt, dt);
    for (double& v : x) v = wrap_phase(v);
    if (k % every == 0 || k == steps) {
      record(k, PhaseVector(x));
    } else if (guarded && x.size() >= 2) {
      // Skipped samples still count for collision detection.
      const PhaseVector s(x);
      if (!passes_guard(s, options.guard)) {
        guarded = false;
        traj.first_guard_violation_time = t0 + static_cast<double>(k) * dt;
      }
    }
  }
  return traj;
}

DriftReport observable_drift(const Trajectory& traj, const Observable& observable,
                             std::optional<double> window_end) {
  DriftReport report;
  report.observable_name = observable.name;
  report.first_guard_violation_time = traj.first_guard_violation_time;
  if (traj.states.empty() || traj.guarded_prefix == 0) {
    throw InvalidArgument("observable_drift: initial state is not guarded");
  }
  double o0 = 0.0;
  try {
    o0 = observable.fn(traj.states.front());
  } catch (const std::exception& e) {
    throw InvalidArgument(std::string("observable_drift: observable undefined at initial state: ") +
                          e.what());
  }
  if (!std::isfinite(o0)) {
    throw InvalidArgument("observable_drift: observable not finite at initial state");
  }
  report.initial_value = o0;
  double lo = std::abs(o0);
  double hi = std::abs(o0);
  for (std::size_t k = 0; k < traj.guarded_prefix; ++k) {
    if (window_end && traj.times[k] > *window_end) break;
    const double o = observable.fn(traj.states[k]);
    report.max_rel_drift = std::max(report.max_rel_drift, std::abs(o - o0) / (std::abs(o0) + 1e-300));
    lo = std::min(lo, std::abs(o));
    hi = std::max(hi, std::abs(o));
    ++report.samples;
  }
  report.dynamic_range = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return report;
}

std::vector<int> cyclic_order(const PhaseVector& state) {
  std::vector<int> order(state.size());
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return state.at(a) < state.at(b);
  });
  auto it = std::find(order.begin(), order.end(), 1);
  std::rotate(order.begin(), it, order.end());
  return order;
}

}  // namespace phaseinv
