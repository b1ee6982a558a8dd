#include "phaseinv/certify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "phaseinv/integrate.hpp"
#include "phaseinv/invariants.hpp"
#include "phaseinv/random.hpp"
#include "phaseinv/rank.hpp"
#include "phaseinv/spectral.hpp"

namespace phaseinv {
namespace {

using nlohmann::json;
constexpr double kHalfPi = std::numbers::pi / 2.0;

struct NamedModel {
  std::string label;
  ModelSpec model;
};

std::vector<NamedModel> battery_models() {
  return {
      {"theta_sin", ModelSpec::theta(ThetaInput::sinusoid())},
      {"ks_delta0", ModelSpec::kuramoto_sakaguchi(0.0, 1.0, 0.0)},
      {"ks_delta_half_pi", ModelSpec::kuramoto_sakaguchi(0.0, 1.0, kHalfPi)},
      {"ho_delta0", ModelSpec::higher_order(0.0, 1.0, 0.0)},
      {"ho_delta_half_pi", ModelSpec::higher_order(0.0, 1.0, kHalfPi)},
  };
}

class Battery {
 public:
  explicit Battery(const CertifyOptions& o) : opt_(o) {}

  CertReport run() {
    pf_eigenrelation();
    constant_function();
    lambda_formulas();
    n4_identities();
    decomposition();
    cross_ratio_embedding();
    ranks();
    telescopes();
    theta_observable_drift();
    invariance_drift();
    return std::move(report_);
  }

 private:
  PhaseVector draw(int n, std::uint64_t stream) {
    auto rng = substream(opt_.seed, stream);
    return random_separated_state(n, opt_.min_separation, rng);
  }

  double psi_value(const PhaseVector& s, const Permutation& q) const {
    const double v = psi(s, q);
    return opt_.corrupt_psi_sign ? std::abs(v) : v;
  }

  void add(std::string name, bool passed, json measured) {
    report_.items.push_back({std::move(name), passed, std::move(measured)});
  }

  void pf_eigenrelation() {
    json cells = json::array();
    bool ok = true;
    std::uint64_t stream = 1000;
    for (const auto& m : battery_models()) {
      for (int n : {3, 5, 8}) {
        const Permutation q = Permutation::identity(n);
        double worst = 0.0;
        double worst_abs = 0.0;
        double coarse = 0.0;
        double fine = 0.0;
        for (int p = 0; p < opt_.points; ++p) {
          const PhaseVector s = draw(n, stream++);
          const double t = 0.37 * p;
          const PFResidual r = verify_pf_eigenrelation(m.model, q, s, t, opt_.fd_step);
          const PFResidual ra = verify_pf_eigenrelation(m.model, q, s, t, opt_.fd_step, true);
          worst = std::max(worst, r.rel_residual);
          worst_abs = std::max(worst_abs, ra.rel_residual);
          coarse += verify_pf_eigenrelation(m.model, q, s, t, 1e-3).rel_residual;
          fine += verify_pf_eigenrelation(m.model, q, s, t, 5e-4).rel_residual;
          report_.residuals.push_back({m.label, n, opt_.seed, p, r.rel_residual, opt_.fd_step});
        }
        const double ratio = coarse / std::max(fine, 1e-300);
        const bool cell_ok = worst <= 1e-4 && worst_abs <= 1e-4 && ratio >= 3.5;
        ok = ok && cell_ok;
        cells.push_back({{"model", m.label},
                         {"N", n},
                         {"max_rel_residual", worst},
                         {"max_rel_residual_abs_psi", worst_abs},
                         {"halving_ratio", ratio},
                         {"passed", cell_ok}});
      }
    }
    add("pf_eigenrelation", ok, {{"tolerance", 1e-4}, {"min_halving_ratio", 3.5}, {"cells", cells}});
  }

  void constant_function() {
    const auto one = constant_field();
    double ks_worst = 0.0;
    double ho_worst = 0.0;
    std::uint64_t stream = 2000;
    for (int p = 0; p < opt_.points; ++p) {
      const PhaseVector s = draw(6, stream++);
      ks_worst = std::max(ks_worst, std::abs(pf_apply_numeric(
                                        ModelSpec::kuramoto_sakaguchi(0.0, 1.0, kHalfPi), one, s,
                                        0.0, opt_.fd_step)));
      for (double lag : {0.0, 0.7, kHalfPi}) {
        const auto ho = ModelSpec::higher_order(0.0, 1.0, lag);
        const double expected = constant_function_rate(ho, s, 0.0);
        const double got = pf_apply_numeric(ho, one, s, 0.0, opt_.fd_step);
        ho_worst = std::max(ho_worst, std::abs(got - expected));
      }
    }
    add("pf_constant_function", ks_worst <= 1e-8 && ho_worst <= 1e-6,
        {{"ks_half_pi_max_abs", ks_worst}, {"ho_max_abs_error", ho_worst}});
  }

  void lambda_formulas() {
    double worst = 0.0;
    double theta_max = 0.0;
    std::uint64_t stream = 3000;
    for (int p = 0; p < opt_.points; ++p) {
      const PhaseVector s = draw(7, stream++);
      for (double lag : {0.0, 0.4, kHalfPi, -2.0}) {
        for (const auto& m : {ModelSpec::kuramoto_sakaguchi(0.3, 1.3, lag),
                              ModelSpec::higher_order(0.3, 1.3, lag)}) {
          const double a = lambda_analytic(m, s, 0.0);
          const double b = lambda_from_partials(m, s, 0.0);
          worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), 1.0));
        }
      }
      theta_max = std::max(theta_max, std::abs(lambda_from_partials(
                                          ModelSpec::theta(ThetaInput::sinusoid()), s, 1.1 * p)));
    }
    add("lambda_formulas", worst <= 1e-10 && theta_max == 0.0,
        {{"max_rel_diff", worst}, {"theta_max_abs", theta_max}});
  }

  void n4_identities() {
    const Permutation p0{1, 2, 3, 4};
    const Permutation p1{1, 3, 4, 2};
    const Permutation p2{1, 4, 2, 3};
    double sum_worst = 0.0;
    double cr_worst = 0.0;
    std::uint64_t stream = 4000;
    for (int p = 0; p < opt_.points * 5; ++p) {
      const PhaseVector s = draw(4, stream++);
      const double a = psi_value(s, p0);
      const double b = psi_value(s, p1);
      const double c = psi_value(s, p2);
      const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
      sum_worst = std::max(sum_worst, std::abs(a + b + c) / scale);
      const double checks[3][2] = {{c / b, -cross_ratio(s, {1, 2, 3, 4})},
                                   {a / c, -cross_ratio(s, {1, 3, 4, 2})},
                                   {b / a, -cross_ratio(s, {1, 4, 2, 3})}};
      for (const auto& ck : checks) {
        cr_worst = std::max(cr_worst, std::abs(ck[0] - ck[1]) / std::abs(ck[1]));
      }
    }
    add("n4_sum_identity", sum_worst <= 1e-10, {{"max_rel_sum", sum_worst}});
    add("n4_cross_ratio_identities", cr_worst <= 1e-12, {{"max_rel_error", cr_worst}});
  }

  void decomposition() {
    json per_n = json::array();
    std::set<int> cases;
    bool ok = true;
    for (int n = 5; n <= 8; ++n) {
      auto rng = substream(opt_.seed, 5000 + static_cast<std::uint64_t>(n));
      const auto perms = canonical_permutations(n);
      std::uniform_int_distribution<std::size_t> pick(0, perms.size() - 1);
      double worst = 0.0;
      for (int k = 0; k < opt_.decomposition_pairs; ++k) {
        const Permutation& q1 = perms[pick(rng)];
        const Permutation& q2 = perms[pick(rng)];
        const Decomposition d = decompose_full(q1, q2);
        cases.insert(d.cases.begin(), d.cases.end());
        for (int p = 0; p < 5; ++p) {
          const PhaseVector s = random_separated_state(n, opt_.min_separation, rng);
          const double direct = psi_value(s, q2) / psi_value(s, q1);
          const double factored = evaluate_decomposition(s, d);
          worst = std::max(worst, std::abs(direct - factored) / std::abs(direct));
        }
      }
      ok = ok && worst <= 1e-9;
      per_n.push_back({{"N", n}, {"max_rel_error", worst}});
    }
    add("decomposition", ok,
        {{"tolerance", 1e-9}, {"per_N", per_n}, {"cases_seen", std::vector<int>(cases.begin(), cases.end())}});
  }

  void cross_ratio_embedding() {
    double worst = 0.0;
    const Quadruple idx{2, 5, 1, 4};
    const auto [q1, q2] = embed_cross_ratio_as_big_psi(6, idx);
    std::uint64_t stream = 6000;
    for (int p = 0; p < opt_.points; ++p) {
      const PhaseVector s = draw(6, stream++);
      const double lhs = psi_value(s, q2) / psi_value(s, q1);
      const double rhs = -cross_ratio(s, idx);
      worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    }
    add("cross_ratio_embedding", worst <= 1e-12, {{"max_rel_error", worst}});
  }

  void ranks() {
    json items = json::array();
    bool ok = true;
    for (int n = 4; n <= opt_.max_rank_n; ++n) {
      const auto r = invariant_independence_rank(n, 8, opt_.seed);
      const bool good = r.rank == n - 3 && r.min_rank == n - 3;
      ok = ok && good;
      items.push_back({{"kind", "invariant"}, {"N", n}, {"expected", n - 3}, {"got", r.rank}});
      const auto f = psi_functional_rank(n, 8, opt_.seed);
      ok = ok && f.rank == n - 2;
      items.push_back({{"kind", "psi_functional"}, {"N", n}, {"expected", n - 2}, {"got", f.rank}});
    }
    const auto lin = psi_linear_rank(4, 0, opt_.seed);
    ok = ok && lin.rank == 2;
    items.push_back({{"kind", "psi_linear"}, {"N", 4}, {"expected", 2}, {"got", lin.rank}});
    add("ranks", ok, {{"items", items}});
  }

  void telescopes() {
    double worst = 0.0;
    std::uint64_t stream = 7000;
    for (int n = 3; n <= 8; ++n) {
      for (int p = 0; p < opt_.points; ++p) {
        const PhaseVector s = draw(n, stream++);
        auto rng = substream(opt_.seed, stream++);
        std::vector<int> order(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) order[static_cast<std::size_t>(k)] = k + 1;
        std::shuffle(order.begin(), order.end(), rng);
        const TelescopeSums ts = cotangent_telescopes(s, Permutation(order));
        worst = std::max({worst, std::abs(ts.plain), std::abs(ts.cos_weighted),
                          std::abs(ts.sin_weighted)});
      }
    }
    add("appendix_a_telescopes", worst <= 1e-10, {{"max_abs_sum", worst}});
  }

  void theta_observable_drift() {
    json per_a = json::array();
    bool ok = true;
    for (double a : {0.5, 1.0, 2.0}) {
      const auto model = ModelSpec::theta(ThetaInput::constant(a));
      const double dt = 1e-4;
      Rk4Stepper stepper(1);
      double x[1] = {0.3};
      const double ref = theta_koopman_observable_continued(x[0], a);
      double worst = 0.0;
      const auto steps = static_cast<long>(std::llround(5.0 / dt));
      for (long k = 0; k < steps; ++k) {
        stepper.step(model, x, k * dt, dt);
        const double t = (k + 1) * dt;
        const double v = theta_koopman_observable_continued(x[0], a) * std::exp(-t);
        worst = std::max(worst, std::abs(v - ref) / std::abs(ref));
      }
      ok = ok && worst <= 1e-6;
      per_a.push_back({{"a", a}, {"max_rel_drift", worst}});
    }
    add("appendix_c_drift", ok, {{"tolerance", 1e-6}, {"per_a", per_a}});
  }

  void invariance_drift() {
    const int n = 10;
    const auto model = ModelSpec::kuramoto_sakaguchi(0.0, 1.0, kHalfPi);
    const PhaseVector s0 = draw(n, 8000);
    const Trajectory traj = simulate(model, s0, 0.0, 10.0, 1e-3);
    const Permutation q1 = Permutation::identity(n);
    const auto perms = canonical_permutations(n);
    double worst = 0.0;
    for (std::size_t k = 1; k < perms.size(); k += perms.size() / 16) {
      const Permutation q2 = perms[k];
      const Observable ob{"abs_big_psi", [&](const PhaseVector& s) {
                            return std::exp(log_abs_big_psi(s, q1, q2));
                          }};
      worst = std::max(worst, observable_drift(traj, ob).max_rel_drift);
    }
    add("invariance_drift", worst <= 1e-5, {{"model", model.describe()}, {"max_rel_drift", worst}});
  }

  CertifyOptions opt_;
  CertReport report_;
};

}  // namespace

bool CertReport::passed() const {
  return std::all_of(items.begin(), items.end(), [](const CertItem& i) { return i.passed; });
}

nlohmann::json CertReport::to_json() const {
  json items_json = json::array();
  for (const auto& i : items) {
    items_json.push_back({{"name", i.name}, {"passed", i.passed}, {"measured", i.measured}});
  }
  return {{"passed", passed()}, {"items", items_json}};
}

CertReport run_certification(const CertifyOptions& options) {
  if (options.points <= 0) throw InvalidArgument("certify: points must be positive");
  if (options.max_rank_n < 4) throw InvalidArgument("certify: max_rank_n must be at least 4");
  return Battery(options).run();
}

}  // namespace phaseinv
