#pragma once

#include <functional>
#include <span>
#include <string>

#include "phaseinv/core.hpp"
#include "phaseinv/models.hpp"

namespace phaseinv {

inline constexpr double kDefaultFdStep = 1e-5;

/// A scalar function on the torus. Arguments are raw (possibly unwrapped)
/// phases; the function must be 2pi-periodic in each.
struct ScalarField {
  std::string name;
  std::function<double(std::span<const double>)> fn;
};

ScalarField constant_field(double c = 1.0);
/// psi_q, or |psi_q| when absolute is set.
ScalarField psi_field(const Permutation& q, bool absolute = false);

/// -sum_j [F_j u](theta + h e_j) - [F_j u](theta - h e_j), divided by 2h, with
/// F the model's vector field. The state must clear the collision guard by an
/// extra 2h.
double pf_apply_numeric(const ModelSpec& model, const ScalarField& u, const PhaseVector& state,
                        double t, double fd_step = kDefaultFdStep,
                        const CollisionGuard& guard = {});

/// P applied to u = 1 in closed form: Lambda + sum_j (g sin theta_j - h cos theta_j).
double constant_function_rate(const ModelSpec& model, const PhaseVector& state, double t);

struct PFResidual {
  PhaseVector state;
  double value_P_u = 0.0;
  double value_Lambda_u = 0.0;
  double value_u = 0.0;
  /// |P u - Lambda u| / max(|Lambda u|, |u|, 1e-300). Scaling by |u| keeps the
  /// figure meaningful where Lambda vanishes.
  double rel_residual = 0.0;
  double fd_step = kDefaultFdStep;
};

/// Compares P psi_q against lambda_from_partials * psi_q at one state.
PFResidual verify_pf_eigenrelation(const ModelSpec& model, const Permutation& q,
                                   const PhaseVector& state, double t,
                                   double fd_step = kDefaultFdStep, bool absolute = false,
                                   const CollisionGuard& guard = {});

}  // namespace phaseinv
