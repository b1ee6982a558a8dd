#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phaseinv/core.hpp"
#include "phaseinv/models.hpp"

namespace phaseinv {

inline constexpr double kDefaultDt = 1e-3;

/// Reusable classical RK4 stepper. Stages run in unwrapped coordinates; the
/// caller decides when to wrap.
class Rk4Stepper {
 public:
  explicit Rk4Stepper(std::size_t n);

  /// Advances phases in place by one step of size dt starting at time t.
  void step(const ModelSpec& model, std::span<double> phases, double t, double dt);

 private:
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

/// One RK4 step of the model's vector field, wrapped to [0, 2pi)^N.
PhaseVector rk4_step(const ModelSpec& model, const PhaseVector& state, double t, double dt);

struct Trajectory {
  ModelSpec model;
  double dt = kDefaultDt;
  std::vector<double> times;
  std::vector<PhaseVector> states;
  /// First recorded time at which the collision guard failed, if any.
  std::optional<double> first_guard_violation_time;
  /// Number of leading samples that pass the guard.
  std::size_t guarded_prefix = 0;
};

struct SimulateOptions {
  CollisionGuard guard{};
  /// Keep every k-th step (the final state is always kept).
  std::size_t record_every = 1;
};

/// Fixed-step RK4 from t0 to t_end. The step count is round((t_end - t0)/dt);
/// sample times are t0 + k*dt. Guard failures are recorded, not fatal.
Trajectory simulate(const ModelSpec& model, const PhaseVector& initial, double t0, double t_end,
                    double dt, const SimulateOptions& options = {});

struct Observable {
  std::string name;
  std::function<double(const PhaseVector&)> fn;
};

struct DriftReport {
  std::string observable_name;
  double max_rel_drift = 0.0;
  std::optional<double> first_guard_violation_time;
  std::size_t samples = 0;
  double initial_value = 0.0;
  /// max / min of |o| over the window; the "changes by a factor" figure.
  double dynamic_range = 1.0;
};

/// max_k |o(theta_k) - o(theta_0)| / (|o(theta_0)| + 1e-300) over the guarded
/// prefix, optionally restricted to times <= window_end.
DriftReport observable_drift(const Trajectory& traj, const Observable& observable,
                             std::optional<double> window_end = std::nullopt);

/// Cyclic order of the oscillators by phase, rotated so oscillator 1 leads.
std::vector<int> cyclic_order(const PhaseVector& state);

}  // namespace phaseinv
