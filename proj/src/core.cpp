#include "phaseinv/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace phaseinv {

double wrap_phase(double x) {
  if (!std::isfinite(x)) {
    throw InvalidArgument("wrap_phase: non-finite angle");
  }
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative number plus 2pi can round up to exactly 2pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double wrap_centered(double x) {
  double r = wrap_phase(x + std::numbers::pi) - std::numbers::pi;
  if (r >= std::numbers::pi) r -= kTwoPi;
  return r;
}

double circular_distance(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw InvalidArgument("circular_distance: non-finite angle");
  }
  const double d = wrap_phase(a - b);
  return std::min(d, kTwoPi - d);
}

PhaseVector::PhaseVector(std::vector<double> phases) : phases_(std::move(phases)) {
  for (double& p : phases_) p = wrap_phase(p);
}

PhaseVector::PhaseVector(std::initializer_list<double> phases)
    : PhaseVector(std::vector<double>(phases)) {}

double PhaseVector::at(int oscillator) const {
  if (oscillator < 1 || static_cast<std::size_t>(oscillator) > phases_.size()) {
    throw InvalidArgument("PhaseVector::at: oscillator index out of range");
  }
  return phases_[static_cast<std::size_t>(oscillator - 1)];
}

Permutation::Permutation(std::vector<int> order) : order_(std::move(order)) {
  const auto n = order_.size();
  if (n == 0) throw InvalidArgument("Permutation: empty sequence");
  std::vector<bool> seen(n + 1, false);
  for (int v : order_) {
    if (v < 1 || static_cast<std::size_t>(v) > n || seen[static_cast<std::size_t>(v)]) {
      throw InvalidArgument("Permutation: sequence is not a bijection on {1..N}");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation::Permutation(std::initializer_list<int> order)
    : Permutation(std::vector<int>(order)) {}

Permutation Permutation::identity(int n) {
  if (n < 1) throw InvalidArgument("Permutation::identity: n must be positive");
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) order[static_cast<std::size_t>(k)] = k + 1;
  return Permutation(std::move(order));
}

int Permutation::cyclic(long pos) const noexcept {
  const long n = static_cast<long>(order_.size());
  long r = pos % n;
  if (r < 0) r += n;
  return order_[static_cast<std::size_t>(r)];
}

std::size_t Permutation::position_of(int oscillator) const {
  auto it = std::find(order_.begin(), order_.end(), oscillator);
  if (it == order_.end()) {
    throw InvalidArgument("Permutation::position_of: oscillator " +
                          std::to_string(oscillator) + " not present");
  }
  return static_cast<std::size_t>(it - order_.begin());
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(order_.size());
  for (std::size_t k = 0; k < order_.size(); ++k) {
    inv[static_cast<std::size_t>(order_[k] - 1)] = static_cast<int>(k) + 1;
  }
  return Permutation(std::move(inv));
}

Permutation Permutation::compose(const Permutation& other) const {
  if (other.size() != size()) {
    throw InvalidArgument("Permutation::compose: size mismatch");
  }
  std::vector<int> out(order_.size());
  for (std::size_t k = 0; k < order_.size(); ++k) {
    out[k] = order_[static_cast<std::size_t>(other.order_[k] - 1)];
  }
  return Permutation(std::move(out));
}

Permutation Permutation::reversed() const {
  std::vector<int> out(order_.rbegin(), order_.rend());
  return Permutation(std::move(out));
}

Permutation Permutation::rotated(std::size_t shift) const {
  std::vector<int> out(order_);
  std::rotate(out.begin(), out.begin() + static_cast<long>(shift % out.size()), out.end());
  return Permutation(std::move(out));
}

int Permutation::parity() const {
  // Parity from cycle count: sign = (-1)^(n - cycles).
  const std::size_t n = order_.size();
  std::vector<bool> visited(n, false);
  std::size_t cycles = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (visited[k]) continue;
    ++cycles;
    for (std::size_t j = k; !visited[j]; j = static_cast<std::size_t>(order_[j] - 1)) {
      visited[j] = true;
    }
  }
  return ((n - cycles) % 2 == 0) ? 1 : -1;
}

CollisionGuard::CollisionGuard(double eps) : epsilon(eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw InvalidArgument("CollisionGuard: epsilon must be positive and finite");
  }
}

ClosestPair closest_pair(const PhaseVector& state) {
  ClosestPair best{0, 0, std::numeric_limits<double>::infinity()};
  const std::size_t n = state.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double d = circular_distance(state[a], state[b]);
      if (d < best.distance) {
        best = {static_cast<int>(a) + 1, static_cast<int>(b) + 1, d};
      }
    }
  }
  return best;
}

bool passes_guard(const PhaseVector& state, const CollisionGuard& guard) {
  return closest_pair(state).distance > guard.epsilon;
}

void require_guard(const PhaseVector& state, const CollisionGuard& guard) {
  const ClosestPair cp = closest_pair(state);
  if (!(cp.distance > guard.epsilon)) {
    throw SingularState("state violates collision guard: oscillators " + std::to_string(cp.i) +
                            " and " + std::to_string(cp.j) + " are " +
                            std::to_string(cp.distance) + " rad apart",
                        cp.i, cp.j);
  }
}

}  // namespace phaseinv
