#include "phaseinv/models.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

namespace phaseinv {
namespace {

using cplx = std::complex<double>;

struct Moments {
  cplx z1{0.0, 0.0};  // sum e^{i theta}
  cplx z2{0.0, 0.0};  // sum e^{2 i theta}
};

Moments moments(std::span<const double> phases) {
  Moments m;
  for (double p : phases) {
    const cplx e = std::polar(1.0, p);
    m.z1 += e;
    m.z2 += e * e;
  }
  return m;
}

void check_coupled(double omega, double coupling, double lag) {
  if (!std::isfinite(omega) || !std::isfinite(coupling) || !std::isfinite(lag)) {
    throw InvalidArgument("model parameters must be finite");
  }
  if (coupling < 0.0) throw InvalidArgument("coupling K must be non-negative");
  if (lag < -std::numbers::pi || lag > std::numbers::pi) {
    throw InvalidArgument("phase lag delta must lie in [-pi, pi]");
  }
}

void check_size(std::span<const double> phases) {
  if (phases.empty()) throw InvalidArgument("model evaluation needs at least one oscillator");
}

}  // namespace

double ThetaInput::operator()(double t) const {
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::Sinusoid:
      return std::sin(t);
    case Kind::Constant:
      return amplitude;
  }
  return 0.0;
}

ModelSpec ModelSpec::theta(ThetaInput input) {
  if (input.kind == ThetaInput::Kind::Constant && !std::isfinite(input.amplitude)) {
    throw InvalidArgument("Theta constant input must be finite");
  }
  ModelSpec m;
  m.kind_ = ModelKind::Theta;
  m.input_ = input;
  return m;
}

ModelSpec ModelSpec::kuramoto_sakaguchi(double omega, double coupling, double lag) {
  check_coupled(omega, coupling, lag);
  ModelSpec m;
  m.kind_ = ModelKind::KuramotoSakaguchi;
  m.omega_ = omega;
  m.coupling_ = coupling;
  m.lag_ = lag;
  return m;
}

ModelSpec ModelSpec::higher_order(double omega, double coupling, double lag) {
  check_coupled(omega, coupling, lag);
  ModelSpec m;
  m.kind_ = ModelKind::HigherOrder;
  m.omega_ = omega;
  m.coupling_ = coupling;
  m.lag_ = lag;
  return m;
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Theta:
      return "theta";
    case ModelKind::KuramotoSakaguchi:
      return "kuramoto_sakaguchi";
    case ModelKind::HigherOrder:
      return "higher_order";
  }
  return "unknown";
}

std::string ModelSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << to_string(kind_);
  if (kind_ == ModelKind::Theta) {
    switch (input_.kind) {
      case ThetaInput::Kind::Zero:
        os << "(I=0)";
        break;
      case ThetaInput::Kind::Sinusoid:
        os << "(I=sin t)";
        break;
      case ThetaInput::Kind::Constant:
        os << "(I=" << input_.amplitude << ")";
        break;
    }
  } else {
    os << "(omega=" << omega_ << ",K=" << coupling_ << ",delta=" << lag_ << ")";
  }
  return os.str();
}

Fgh evaluate_fgh(const ModelSpec& model, std::span<const double> phases, double t) {
  check_size(phases);
  const double n = static_cast<double>(phases.size());
  switch (model.kind()) {
    case ModelKind::Theta: {
      const double input = model.input()(t);
      return {1.0 + input, -1.0 + input, 0.0};
    }
    case ModelKind::KuramotoSakaguchi: {
      const cplx w = std::polar(1.0, model.lag()) * moments(phases).z1;
      const double k = model.coupling() / n;
      return {model.omega(), k * w.imag(), -k * w.real()};
    }
    case ModelKind::HigherOrder: {
      // sum_{k,l} e^{i(2 theta_k - theta_l + delta)} = e^{i delta} Z2 conj(Z1)
      const Moments m = moments(phases);
      const cplx w = std::polar(1.0, model.lag()) * m.z2 * std::conj(m.z1);
      const double k = model.coupling() / (n * n);
      return {model.omega(), k * w.imag(), -k * w.real()};
    }
  }
  return {};
}

Fgh evaluate_fgh(const ModelSpec& model, const PhaseVector& state, double t) {
  return evaluate_fgh(model, state.phases(), t);
}

void vector_field(const ModelSpec& model, std::span<const double> phases, double t,
                  std::span<double> out) {
  if (out.size() != phases.size()) {
    throw InvalidArgument("vector_field: output size mismatch");
  }
  const Fgh c = evaluate_fgh(model, phases, t);
  for (std::size_t j = 0; j < phases.size(); ++j) {
    out[j] = c.f + c.g * std::cos(phases[j]) + c.h * std::sin(phases[j]);
  }
}

std::vector<double> vector_field(const ModelSpec& model, const PhaseVector& state, double t) {
  std::vector<double> out(state.size());
  vector_field(model, state.phases(), t, out);
  return out;
}

FghPartials fgh_partials(const ModelSpec& model, const PhaseVector& state, double /*t*/) {
  check_size(state.phases());
  const std::size_t n = state.size();
  FghPartials p{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                std::vector<double>(n, 0.0)};
  switch (model.kind()) {
    case ModelKind::Theta:
      break;
    case ModelKind::KuramotoSakaguchi: {
      const double k = model.coupling() / static_cast<double>(n);
      for (std::size_t j = 0; j < n; ++j) {
        p.dg[j] = k * std::cos(state[j] + model.lag());
        p.dh[j] = k * std::sin(state[j] + model.lag());
      }
      break;
    }
    case ModelKind::HigherOrder: {
      const Moments m = moments(state.phases());
      const cplx lag = std::polar(1.0, model.lag());
      const cplx i{0.0, 1.0};
      const double k = model.coupling() / static_cast<double>(n * n);
      for (std::size_t j = 0; j < n; ++j) {
        const cplx e = std::polar(1.0, state[j]);
        const cplx dw = lag * (2.0 * i * e * e * std::conj(m.z1) - i * m.z2 * std::conj(e));
        p.dg[j] = k * dw.imag();
        p.dh[j] = -k * dw.real();
      }
      break;
    }
  }
  return p;
}

OrderParameters order_parameters(std::span<const double> phases) {
  check_size(phases);
  const Moments m = moments(phases);
  const double n = static_cast<double>(phases.size());
  // Rounding can push |mean phasor| a hair above 1 for synchronized states.
  return {std::min(1.0, std::abs(m.z1) / n), std::min(1.0, std::abs(m.z2) / n)};
}

OrderParameters order_parameters(const PhaseVector& state) {
  return order_parameters(state.phases());
}

double lambda_analytic(const ModelSpec& model, const PhaseVector& state, double /*t*/) {
  check_size(state.phases());
  switch (model.kind()) {
    case ModelKind::Theta:
      return 0.0;
    case ModelKind::KuramotoSakaguchi:
      return -model.coupling() * std::cos(model.lag());
    case ModelKind::HigherOrder: {
      const OrderParameters r = order_parameters(state);
      const double c = std::cos(model.lag());
      return -2.0 * model.coupling() * r.r1 * r.r1 * c + model.coupling() * r.r2 * r.r2 * c;
    }
  }
  return 0.0;
}

double lambda_from_partials(const ModelSpec& model, const PhaseVector& state, double t) {
  const FghPartials p = fgh_partials(model, state, t);
  double sum = 0.0;
  for (std::size_t j = 0; j < state.size(); ++j) {
    sum += p.df[j] + std::cos(state[j]) * p.dg[j] + std::sin(state[j]) * p.dh[j];
  }
  return -sum;
}

}  // namespace phaseinv
