#pragma once

#include <span>
#include <string>
#include <vector>

#include "phaseinv/core.hpp"

namespace phaseinv {

enum class ModelKind { Theta, KuramotoSakaguchi, HigherOrder };

/// Common input I(t) of the Theta model.
struct ThetaInput {
  enum class Kind { Zero, Sinusoid, Constant };
  Kind kind = Kind::Zero;
  double amplitude = 0.0;  // only used for Constant

  static ThetaInput zero() { return {Kind::Zero, 0.0}; }
  static ThetaInput sinusoid() { return {Kind::Sinusoid, 0.0}; }
  static ThetaInput constant(double a) { return {Kind::Constant, a}; }

  double operator()(double t) const;
  bool operator==(const ThetaInput&) const = default;
};

/// One of the three phase models of the f + g cos(theta) + h sin(theta) class.
class ModelSpec {
 public:
  static ModelSpec theta(ThetaInput input);
  static ModelSpec kuramoto_sakaguchi(double omega, double coupling, double lag);
  static ModelSpec higher_order(double omega, double coupling, double lag);

  ModelKind kind() const noexcept { return kind_; }
  const ThetaInput& input() const noexcept { return input_; }
  double omega() const noexcept { return omega_; }
  double coupling() const noexcept { return coupling_; }
  double lag() const noexcept { return lag_; }

  std::string describe() const;

  bool operator==(const ModelSpec&) const = default;

 private:
  ModelSpec() = default;

  ModelKind kind_ = ModelKind::Theta;
  ThetaInput input_{};
  double omega_ = 0.0;
  double coupling_ = 0.0;
  double lag_ = 0.0;
};

std::string to_string(ModelKind kind);

struct Fgh {
  double f = 0.0;
  double g = 0.0;
  double h = 0.0;
};

struct FghPartials {
  std::vector<double> df;
  std::vector<double> dg;
  std::vector<double> dh;
};

struct OrderParameters {
  double r1 = 0.0;
  double r2 = 0.0;
};

Fgh evaluate_fgh(const ModelSpec& model, std::span<const double> phases, double t);
Fgh evaluate_fgh(const ModelSpec& model, const PhaseVector& state, double t);

/// dtheta_j/dt = f + g cos(theta_j) + h sin(theta_j), written into out.
/// Phases need not be wrapped; out.size() must equal phases.size().
void vector_field(const ModelSpec& model, std::span<const double> phases, double t,
                  std::span<double> out);
std::vector<double> vector_field(const ModelSpec& model, const PhaseVector& state, double t);

/// Analytic derivatives of f, g, h with respect to each phase.
FghPartials fgh_partials(const ModelSpec& model, const PhaseVector& state, double t);

OrderParameters order_parameters(std::span<const double> phases);
OrderParameters order_parameters(const PhaseVector& state);

/// Closed-form local growth rate: 0 (Theta), -K cos(delta) (KS),
/// -2K r1^2 cos(delta) + K r2^2 cos(delta) (higher order).
double lambda_analytic(const ModelSpec& model, const PhaseVector& state, double t);

/// -sum_j [df/dtheta_j + cos(theta_j) dg/dtheta_j + sin(theta_j) dh/dtheta_j].
double lambda_from_partials(const ModelSpec& model, const PhaseVector& state, double t);

}  // namespace phaseinv
