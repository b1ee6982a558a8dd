#include "phaseinv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace phaseinv {

ScalarField constant_field(double c) {
  return {"const", [c](std::span<const double>) { return c; }};
}

ScalarField psi_field(const Permutation& q, bool absolute) {
  return {absolute ? "abs_psi" : "psi", [q, absolute](std::span<const double> th) {
            double prod = 1.0;
            const std::size_t n = q.size();
            for (std::size_t j = 0; j < n; ++j) {
              const auto a = static_cast<std::size_t>(q[j] - 1);
              const auto b = static_cast<std::size_t>(q[(j + 1) % n] - 1);
              prod *= std::sin(0.5 * (th[a] - th[b]));
            }
            const double v = 1.0 / prod;
            return absolute ? std::abs(v) : v;
          }};
}

double pf_apply_numeric(const ModelSpec& model, const ScalarField& u, const PhaseVector& state,
                        double t, double fd_step, const CollisionGuard& guard) {
  if (!(fd_step > 0.0) || !std::isfinite(fd_step)) {
    throw InvalidArgument("pf_apply_numeric: fd_step must be positive");
  }
  const std::size_t n = state.size();
  if (n == 0) throw InvalidArgument("pf_apply_numeric: empty state");
  if (n >= 2) {
    const ClosestPair cp = closest_pair(state);
    if (cp.distance <= guard.epsilon + 2.0 * fd_step) {
      throw SingularState("pf_apply_numeric: state within guard margin", cp.i, cp.j);
    }
  }
  std::vector<double> x(state.values());
  std::vector<double> field(n);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    x[j] = state[j] + fd_step;
    vector_field(model, x, t, field);
    const double plus = field[j] * u.fn(x);
    x[j] = state[j] - fd_step;
    vector_field(model, x, t, field);
    const double minus = field[j] * u.fn(x);
    x[j] = state[j];
    total += (plus - minus) / (2.0 * fd_step);
  }
  if (!std::isfinite(total)) throw NumericalFailure("pf_apply_numeric: non-finite result");
  return -total;
}

double constant_function_rate(const ModelSpec& model, const PhaseVector& state, double t) {
  const Fgh c = evaluate_fgh(model, state, t);
  double rotation = 0.0;
  for (double th : state.phases()) rotation += c.g * std::sin(th) - c.h * std::cos(th);
  return lambda_from_partials(model, state, t) + rotation;
}

PFResidual verify_pf_eigenrelation(const ModelSpec& model, const Permutation& q,
                                   const PhaseVector& state, double t, double fd_step,
                                   bool absolute, const CollisionGuard& guard) {
  if (q.size() != state.size()) {
    throw InvalidArgument("verify_pf_eigenrelation: permutation size does not match state");
  }
  const ScalarField u = psi_field(q, absolute);
  PFResidual r;
  r.state = state;
  r.fd_step = fd_step;
  r.value_P_u = pf_apply_numeric(model, u, state, t, fd_step, guard);
  r.value_u = u.fn(state.phases());
  r.value_Lambda_u = lambda_from_partials(model, state, t) * r.value_u;
  const double scale = std::max({std::abs(r.value_Lambda_u), std::abs(r.value_u), 1e-300});
  r.rel_residual = std::abs(r.value_P_u - r.value_Lambda_u) / scale;
  return r;
}

}  // namespace phaseinv
