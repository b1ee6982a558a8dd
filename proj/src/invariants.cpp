#include "phaseinv/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace phaseinv {
namespace {

void require_psi_domain(const PhaseVector& state, const Permutation& q,
                        const CollisionGuard& guard) {
  if (state.size() < 3) throw InvalidArgument("psi needs at least three oscillators");
  if (q.size() != state.size()) {
    throw InvalidArgument("permutation size " + std::to_string(q.size()) +
                          " does not match state size " + std::to_string(state.size()));
  }
  require_guard(state, guard);
}

int sign_of(double x) { return x < 0.0 ? -1 : 1; }

}  // namespace

double PsiValue::value() const {
  if (log_abs > std::log(std::numeric_limits<double>::max())) {
    throw OutOfRange("psi magnitude overflows double precision; use log_abs_psi");
  }
  return sign * std::exp(log_abs);
}

PsiValue log_abs_psi(const PhaseVector& state, const Permutation& q, const CollisionGuard& guard) {
  require_psi_domain(state, q, guard);
  PsiValue out;
  double sum = 0.0;
  const long n = static_cast<long>(q.size());
  for (long j = 0; j < n; ++j) {
    const double s = half_sine(state, q.cyclic(j), q.cyclic(j + 1));
    sum += std::log(std::abs(s));
    out.sign *= sign_of(s);
  }
  out.log_abs = -sum;
  return out;
}

double psi(const PhaseVector& state, const Permutation& q, const CollisionGuard& guard) {
  return log_abs_psi(state, q, guard).value();
}

double big_psi(const PhaseVector& state, const Permutation& q1, const Permutation& q2,
               const CollisionGuard& guard) {
  const PsiValue a = log_abs_psi(state, q1, guard);
  const PsiValue b = log_abs_psi(state, q2, guard);
  return (a.sign * b.sign) * std::exp(b.log_abs - a.log_abs);
}

double log_abs_big_psi(const PhaseVector& state, const Permutation& q1, const Permutation& q2,
                       const CollisionGuard& guard) {
  return log_abs_psi(state, q2, guard).log_abs - log_abs_psi(state, q1, guard).log_abs;
}

double cross_ratio(const PhaseVector& state, const Quadruple& idx, const CollisionGuard& guard) {
  const int n = static_cast<int>(state.size());
  for (std::size_t a = 0; a < 4; ++a) {
    if (idx[a] < 1 || idx[a] > n) throw InvalidArgument("cross_ratio: index out of range");
    for (std::size_t b = a + 1; b < 4; ++b) {
      if (idx[a] == idx[b]) throw InvalidArgument("cross_ratio: indices must be distinct");
    }
  }
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a + 1; b < 4; ++b) {
      const double d = circular_distance(state.at(idx[a]), state.at(idx[b]));
      if (!(d > guard.epsilon)) {
        throw SingularState("cross_ratio: oscillators " + std::to_string(idx[a]) + " and " +
                                std::to_string(idx[b]) + " collide",
                            idx[a], idx[b]);
      }
    }
  }
  const auto [i, j, k, l] = idx;
  return half_sine(state, i, j) * half_sine(state, k, l) /
         (half_sine(state, j, k) * half_sine(state, l, i));
}

std::vector<Permutation> canonical_permutations(int n) {
  if (n < 3) throw InvalidArgument("canonical_permutations: N must be at least 3");
  std::vector<int> tail(static_cast<std::size_t>(n - 1));
  for (int k = 0; k < n - 1; ++k) tail[static_cast<std::size_t>(k)] = k + 2;
  std::vector<Permutation> out;
  do {
    if (tail.front() < tail.back()) {
      std::vector<int> order;
      order.reserve(static_cast<std::size_t>(n));
      order.push_back(1);
      order.insert(order.end(), tail.begin(), tail.end());
      out.emplace_back(std::move(order));
    }
  } while (std::next_permutation(tail.begin(), tail.end()));
  return out;
}

CanonicalForm canonicalize(const Permutation& q) {
  const std::size_t n = q.size();
  if (n < 3) throw InvalidArgument("canonicalize: N must be at least 3");
  Permutation rotated = q.rotated(q.position_of(1));
  if (rotated[1] < rotated[n - 1]) return {rotated, 1};
  // Reversal negates each of the N half-angle sines.
  Permutation flipped = rotated.reversed();
  flipped = flipped.rotated(flipped.position_of(1));
  return {flipped, (n % 2 == 0) ? 1 : -1};
}

HalfSineTable::HalfSineTable(std::span<const double> phases)
    : n_(phases.size()), log_abs_(n_ * n_, 0.0), sign_(n_ * n_, 1) {
  for (std::size_t a = 0; a < n_; ++a) {
    for (std::size_t b = 0; b < n_; ++b) {
      if (a == b) {
        log_abs_[a * n_ + b] = -std::numeric_limits<double>::infinity();
        continue;
      }
      const double s = std::sin(0.5 * (phases[a] - phases[b]));
      log_abs_[a * n_ + b] = std::log(std::abs(s));
      sign_[a * n_ + b] = sign_of(s);
    }
  }
}

PsiValue HalfSineTable::psi(const Permutation& q) const {
  PsiValue out;
  double sum = 0.0;
  const std::size_t n = q.size();
  for (std::size_t j = 0; j < n; ++j) {
    const int a = q[j];
    const int b = q[(j + 1 == n) ? 0 : j + 1];
    sum += log_abs_sin(a, b);
    out.sign *= sign(a, b);
  }
  out.log_abs = -sum;
  return out;
}

ReductionRecord reduce_once(const Permutation& q1, const Permutation& q2) {
  const std::size_t n = q1.size();
  if (q2.size() != n) throw InvalidArgument("reduce_once: permutation sizes differ");
  if (n < 5) {
    throw InvalidArgument("reduce_once: N must be at least 5 (N = 4 is the cross-ratio base)");
  }
  const int top = static_cast<int>(n);
  const long xi = static_cast<long>(q1.position_of(top));
  const long zeta = static_cast<long>(q2.position_of(top));
  const int a1 = q1.cyclic(xi - 1);
  const int b1 = q1.cyclic(xi + 1);
  const int a2 = q2.cyclic(zeta - 1);
  const int b2 = q2.cyclic(zeta + 1);

  auto drop_top = [top](const Permutation& q) {
    std::vector<int> order;
    order.reserve(q.size() - 1);
    for (int v : q.order()) {
      if (v != top) order.push_back(v);
    }
    return Permutation(std::move(order));
  };

  ReductionRecord r;
  r.reduced_q1 = drop_top(q1);
  r.reduced_q2 = drop_top(q2);

  if (a1 == a2 && b1 == b2) {
    r.case_label = 1;
    r.sign = 1;
  } else if (a1 == b2 && b1 == a2) {
    // Swapped neighbours: the leftover factor sin((a2-b2)/2)/sin((a1-b1)/2) is -1.
    r.case_label = 1;
    r.sign = -1;
  } else {
    const int coincidences = (a1 == a2) + (b1 == b2) + (a1 == b2) + (b1 == a2);
    if (coincidences > 1) throw NumericalFailure("reduce_once: ambiguous neighbour classification");
    if (a1 == a2) {
      r.case_label = 2;
      r.sign = 1;
      r.factors = {{top, b1, a1, b2}};
    } else if (b1 == b2) {
      r.case_label = 3;
      r.sign = 1;
      r.factors = {{top, a1, b1, a2}};
    } else if (a1 == b2) {
      r.case_label = 4;
      r.sign = -1;
      r.factors = {{top, b1, a1, a2}};
    } else if (b1 == a2) {
      r.case_label = 5;
      r.sign = -1;
      r.factors = {{top, a1, b1, b2}};
    } else {
      r.case_label = 6;
      r.sign = -1;
      r.factors = {{top, b1, a1, a2}, {top, a1, a2, b2}};
    }
  }
  return r;
}

namespace {

// Psi^4 between the three classes P0 = (1,2,3,4), P1 = (1,3,4,2), P2 = (1,4,2,3).
// Canonical representatives (q(2) < q(4)) are (1,2,3,4), (1,2,4,3), (1,3,2,4).
int n4_class(const Permutation& canonical) {
  if (canonical == Permutation{1, 2, 3, 4}) return 0;
  if (canonical == Permutation{1, 2, 4, 3}) return 1;
  if (canonical == Permutation{1, 3, 2, 4}) return 2;
  throw NumericalFailure("n4_class: not a canonical N = 4 permutation");
}

void base_case(const Permutation& q1, const Permutation& q2, Decomposition& d) {
  const CanonicalForm c1 = canonicalize(q1);
  const CanonicalForm c2 = canonicalize(q2);
  d.sign *= c1.sign * c2.sign;
  const int from = n4_class(c1.representative);
  const int to = n4_class(c2.representative);
  if (from == to) return;
  // Psi_{P1,P2} = -<1,2,3,4>, Psi_{P2,P0} = -<1,3,4,2>, Psi_{P0,P1} = -<1,4,2,3>;
  // the reverse ratios use 1/<i,j,k,l> = <j,k,l,i>.
  static const Quadruple forward[3] = {{1, 4, 2, 3}, {1, 2, 3, 4}, {1, 3, 4, 2}};
  d.sign *= -1;
  if ((from + 1) % 3 == to) {
    d.factors.push_back(forward[from]);
  } else {
    const Quadruple f = forward[to];
    d.factors.push_back({f[1], f[2], f[3], f[0]});
  }
}

}  // namespace

Decomposition decompose_full(const Permutation& q1, const Permutation& q2) {
  if (q1.size() != q2.size()) throw InvalidArgument("decompose_full: permutation sizes differ");
  if (q1.size() < 4) throw InvalidArgument("decompose_full: N must be at least 4");
  Decomposition d;
  Permutation a = q1;
  Permutation b = q2;
  while (a.size() > 4) {
    ReductionRecord r = reduce_once(a, b);
    d.sign *= r.sign;
    d.factors.insert(d.factors.end(), r.factors.begin(), r.factors.end());
    d.cases.push_back(r.case_label);
    a = std::move(r.reduced_q1);
    b = std::move(r.reduced_q2);
  }
  base_case(a, b, d);
  return d;
}

double evaluate_decomposition(const PhaseVector& state, const Decomposition& d,
                              const CollisionGuard& guard) {
  double value = d.sign;
  for (const Quadruple& f : d.factors) value *= cross_ratio(state, f, guard);
  return value;
}

std::pair<Permutation, Permutation> embed_cross_ratio_as_big_psi(int n, const Quadruple& idx) {
  if (n < 4) throw InvalidArgument("embed_cross_ratio_as_big_psi: N must be at least 4");
  std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
  for (int v : idx) {
    if (v < 1 || v > n || used[static_cast<std::size_t>(v)]) {
      throw InvalidArgument("embed_cross_ratio_as_big_psi: indices must be distinct in 1..N");
    }
    used[static_cast<std::size_t>(v)] = true;
  }
  std::vector<int> rest;
  for (int v = 1; v <= n; ++v) {
    if (!used[static_cast<std::size_t>(v)]) rest.push_back(v);
  }
  const auto [i, j, k, l] = idx;
  std::vector<int> o1 = rest;
  std::vector<int> o2 = rest;
  o1.insert(o1.end(), {i, j, l, k});
  o2.insert(o2.end(), {i, l, j, k});
  return {Permutation(std::move(o1)), Permutation(std::move(o2))};
}

double theta_koopman_observable(double theta, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw InvalidArgument("theta_koopman_observable: input amplitude must be positive");
  }
  if (circular_distance(theta, std::numbers::pi) < 1e-9) {
    throw BranchPoint("theta_koopman_observable: theta = pi is a branch point of tan(theta/2)");
  }
  const double root = std::sqrt(a);
  return std::exp(std::atan(std::tan(0.5 * theta) / root) / root);
}

double theta_koopman_observable_continued(double theta_unwrapped, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw InvalidArgument("theta_koopman_observable_continued: amplitude must be positive");
  }
  if (!std::isfinite(theta_unwrapped)) {
    throw InvalidArgument("theta_koopman_observable_continued: non-finite phase");
  }
  const double pi = std::numbers::pi;
  const double branch = std::floor((theta_unwrapped + pi) / kTwoPi);
  const double reduced = theta_unwrapped - kTwoPi * branch;  // in [-pi, pi)
  const double root = std::sqrt(a);
  return std::exp((std::atan(std::tan(0.5 * reduced) / root) + pi * branch) / root);
}

TelescopeSums cotangent_telescopes(const PhaseVector& state, const Permutation& q,
                                   const CollisionGuard& guard) {
  require_psi_domain(state, q, guard);
  const long n = static_cast<long>(q.size());
  auto cot_half = [&](int i, int j) {
    const double x = 0.5 * (state.at(i) - state.at(j));
    return std::cos(x) / std::sin(x);
  };
  TelescopeSums s;
  for (long j = 0; j < n; ++j) {
    const int prev = q.cyclic(j - 1);
    const int cur = q.cyclic(j);
    const int next = q.cyclic(j + 1);
    const double c = cot_half(prev, cur) - cot_half(cur, next);
    const double th = state.at(cur);
    s.plain += c;
    s.cos_weighted += 0.5 * std::cos(th) * c - std::sin(th);
    s.sin_weighted += 0.5 * std::sin(th) * c + std::cos(th);
  }
  return s;
}

}  // namespace phaseinv
