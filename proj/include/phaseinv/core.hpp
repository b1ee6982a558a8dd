#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "phaseinv/errors.hpp"

namespace phaseinv {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kDefaultGuardEpsilon = 1e-6;

/// Maps any finite angle onto [0, 2pi).
double wrap_phase(double x);

/// Maps any finite angle onto [-pi, pi).
double wrap_centered(double x);

/// Length of the shorter arc between two angles, in [0, pi].
double circular_distance(double a, double b);

/// N oscillator phases, stored wrapped to [0, 2pi).
class PhaseVector {
 public:
  PhaseVector() = default;
  explicit PhaseVector(std::vector<double> phases);
  PhaseVector(std::initializer_list<double> phases);

  std::size_t size() const noexcept { return phases_.size(); }
  double operator[](std::size_t i) const noexcept { return phases_[i]; }
  /// 1-based oscillator access, matching serialized output.
  double at(int oscillator) const;
  std::span<const double> phases() const noexcept { return phases_; }
  const std::vector<double>& values() const noexcept { return phases_; }

  bool operator==(const PhaseVector&) const = default;

 private:
  std::vector<double> phases_;
};

/// A bijection on {1, ..., N} read as a cyclic ordering of oscillators.
/// Stored 1-based; position access wraps cyclically.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> order);
  Permutation(std::initializer_list<int> order);

  static Permutation identity(int n);

  std::size_t size() const noexcept { return order_.size(); }
  int operator[](std::size_t pos) const noexcept { return order_[pos]; }
  /// Oscillator at cyclic position pos (any integer, wraps both ways).
  int cyclic(long pos) const noexcept;
  /// Position of oscillator in the ordering (0-based position).
  std::size_t position_of(int oscillator) const;
  const std::vector<int>& order() const noexcept { return order_; }

  Permutation inverse() const;
  /// (this o other)(k) = this(other(k)).
  Permutation compose(const Permutation& other) const;
  Permutation reversed() const;
  Permutation rotated(std::size_t shift) const;
  /// +1 for even, -1 for odd permutations.
  int parity() const;

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<int> order_;
};

struct CollisionGuard {
  double epsilon = kDefaultGuardEpsilon;

  CollisionGuard() = default;
  explicit CollisionGuard(double eps);
};

/// The closest oscillator pair (1-based) and its circular distance.
struct ClosestPair {
  int i = 0;
  int j = 0;
  double distance = 0.0;
};

ClosestPair closest_pair(const PhaseVector& state);

bool passes_guard(const PhaseVector& state, const CollisionGuard& guard);

/// Throws SingularState naming the closest pair when the guard fails.
void require_guard(const PhaseVector& state, const CollisionGuard& guard);

/// sin((theta_i - theta_j) / 2) with 1-based indices, using the raw wrapped
/// difference.
inline double half_sine(const PhaseVector& state, int i, int j) noexcept {
  return std::sin(0.5 * (state[static_cast<std::size_t>(i - 1)] -
                         state[static_cast<std::size_t>(j - 1)]));
}

}  // namespace phaseinv
