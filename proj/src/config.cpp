#include "phaseinv/config.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "phaseinv/invariants.hpp"

namespace phaseinv {
namespace {

using nlohmann::json;

constexpr double kHalfPi = std::numbers::pi / 2.0;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

void only_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) fail(path.empty() ? k : path + "." + k, "unknown key");
  }
}

double num(const json& obj, const std::string& key, const std::string& path) {
  const std::string p = path.empty() ? key : path + "." + key;
  if (!obj.contains(key)) fail(p, "missing");
  const json& v = obj.at(key);
  if (!v.is_number()) fail(p, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(p, "must be finite");
  return x;
}

double positive(const json& obj, const std::string& key, const std::string& path) {
  const double x = num(obj, key, path);
  if (!(x > 0.0)) fail(path.empty() ? key : path + "." + key, "must be positive");
  return x;
}

long long integer(const json& obj, const std::string& key, const std::string& path) {
  const std::string p = path.empty() ? key : path + "." + key;
  if (!obj.contains(key)) fail(p, "missing");
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(p, "expected an integer");
  return v.get<long long>();
}

Permutation permutation(const json& v, const std::string& path, int n) {
  if (!v.is_array()) fail(path, "expected an index sequence");
  std::vector<int> order;
  for (const auto& e : v) {
    if (!e.is_number_integer()) fail(path, "indices must be integers");
    order.push_back(e.get<int>());
  }
  if (n > 0 && static_cast<int>(order.size()) != n) {
    fail(path, "expected " + std::to_string(n) + " indices");
  }
  try {
    return Permutation(order);
  } catch (const InvalidArgument& e) {
    fail(path, e.what());
  }
}

json perm_json(const Permutation& q) { return q.order(); }

}  // namespace

json default_config_json() {
  return {
      {"model", {{"kind", "kuramoto_sakaguchi"}, {"omega", 0.0}, {"K", 1.0}, {"delta", kHalfPi}}},
      {"N", 10},
      {"t0", 0.0},
      {"t_end", 50.0},
      {"dt", 1e-3},
      {"seed", 1},
      {"guard_epsilon", kDefaultGuardEpsilon},
      {"clip", 1e2},
      {"outputs", "out"},
      {"initial", nullptr},
      {"initial_separation", 0.05},
      {"record_every", 1},
      {"permutations", nullptr},
      {"pairs", nullptr},
      {"drift_tolerance", nullptr},
      {"ensemble",
       {{"count", 100000},
        {"bins", 50},
        {"compare_bins", 10},
        {"snapshots", {0.0}},
        {"dt", 0.01},
        {"q", {1, 2, 3}},
        {"tolerance", 0.08},
        {"heavy_threshold", 500.0}}},
      {"certify",
       {{"points", 20},
        {"fd_step", 1e-5},
        {"min_separation", 0.1},
        {"max_rank_n", 8},
        {"decomposition_pairs", 20},
        {"corrupt_psi_sign", false}}},
  };
}

std::vector<PresetInfo> list_presets() {
  return {
      {"fig1", "Theta model, I(t) = sin t; N = 10 series, N = 3 ensemble at t = 0, 5"},
      {"fig2a", "Kuramoto-Sakaguchi K = 1, delta = pi/2; stationary density, t = 0, 5, 10"},
      {"fig2c", "Kuramoto-Sakaguchi K = 1, delta = 0; density decays as exp(-t), t = 0, 1, 2"},
      {"fig3b", "higher-order coupling K = 1, delta = pi/2; PF eigenvalue 0, Psi conserved"},
      {"fig3c", "higher-order coupling K = 1, delta = 0; |psi| varies, Psi conserved"},
  };
}

json preset_json(const std::string& name) {
  const json ks_half = {{"kind", "kuramoto_sakaguchi"}, {"omega", 0.0}, {"K", 1.0}, {"delta", kHalfPi}};
  const json ks_zero = {{"kind", "kuramoto_sakaguchi"}, {"omega", 0.0}, {"K", 1.0}, {"delta", 0.0}};
  const json ho_half = {{"kind", "higher_order"}, {"omega", 0.0}, {"K", 1.0}, {"delta", kHalfPi}};
  const json ho_zero = {{"kind", "higher_order"}, {"omega", 0.0}, {"K", 1.0}, {"delta", 0.0}};
  if (name == "fig1") {
    return {{"model", {{"kind", "theta"}, {"input", "sin"}}},
            {"t_end", 50.0},
            {"drift_tolerance", 1e-5},
            {"ensemble", {{"snapshots", {0.0, 5.0}}}}};
  }
  if (name == "fig2a") {
    return {{"model", ks_half},
            {"t_end", 50.0},
            {"drift_tolerance", 1e-5},
            {"ensemble", {{"snapshots", {0.0, 5.0, 10.0}}}}};
  }
  if (name == "fig2c") {
    return {{"model", ks_zero},
            {"t_end", 10.0},
            {"drift_tolerance", 1e-4},
            {"ensemble", {{"snapshots", {0.0, 1.0, 2.0}}, {"tolerance", 0.10}, {"compare_bins", 25}, {"count", 400000}}}};
  }
  if (name == "fig3b") {
    return {{"model", ho_half},
            {"t_end", 50.0},
            {"drift_tolerance", 1e-5},
            {"ensemble", {{"snapshots", {0.0, 5.0, 10.0}}}}};
  }
  if (name == "fig3c") {
    return {{"model", ho_zero}, {"t_end", 50.0}, {"drift_tolerance", 1e-4}};
  }
  throw ConfigError("preset: unknown preset '" + name + "'");
}

void apply_override(json& config, const std::string& dotted_key, const std::string& value) {
  if (dotted_key.empty()) throw ConfigError("override: empty key");
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;
  }
  std::string pointer;
  std::size_t start = 0;
  while (start <= dotted_key.size()) {
    const std::size_t dot = dotted_key.find('.', start);
    const std::string part = dotted_key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw ConfigError(dotted_key + ": malformed key");
    pointer += "/" + part;
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  config[json::json_pointer(pointer)] = parsed;
}

json merge_config(const json& partial) { return merge_config(default_config_json(), partial); }

json merge_config(const json& base, const json& partial) {
  if (!partial.is_null() && !partial.is_object()) throw ConfigError("config: expected an object");
  json merged = base;
  if (partial.is_null()) return merged;
  json rest = partial;
  if (rest.contains("model")) {
    merged["model"] = rest["model"];
    rest.erase("model");
  }
  for (const auto& [k, v] : rest.items()) {
    if (!merged.contains(k)) fail(k, "unknown key");
    if (merged[k].is_object() && v.is_object()) {
      merged[k].update(v);
    } else {
      merged[k] = v;
    }
  }
  return merged;
}

ModelSpec model_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  if (!j.contains("kind") || !j["kind"].is_string()) fail(path + ".kind", "expected a string");
  const std::string kind = j["kind"];
  try {
    if (kind == "theta") {
      only_keys(j, path, {"kind", "input"});
      if (!j.contains("input")) return ModelSpec::theta(ThetaInput::zero());
      const json& in = j["input"];
      if (in.is_string()) {
        if (in == "sin") return ModelSpec::theta(ThetaInput::sinusoid());
        if (in == "zero") return ModelSpec::theta(ThetaInput::zero());
        fail(path + ".input", "expected \"sin\", \"zero\" or {\"const\": a}");
      }
      if (in.is_object()) {
        only_keys(in, path + ".input", {"const"});
        return ModelSpec::theta(ThetaInput::constant(num(in, "const", path + ".input")));
      }
      fail(path + ".input", "expected \"sin\", \"zero\" or {\"const\": a}");
    }
    if (kind == "kuramoto_sakaguchi" || kind == "higher_order") {
      only_keys(j, path, {"kind", "omega", "K", "delta"});
      const double omega = j.contains("omega") ? num(j, "omega", path) : 0.0;
      const double k = num(j, "K", path);
      const double delta = num(j, "delta", path);
      return kind == "higher_order" ? ModelSpec::higher_order(omega, k, delta)
                                    : ModelSpec::kuramoto_sakaguchi(omega, k, delta);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    fail(path, e.what());
  }
  fail(path + ".kind", "expected theta, kuramoto_sakaguchi or higher_order");
}

json model_to_json(const ModelSpec& model) {
  switch (model.kind()) {
    case ModelKind::Theta: {
      const ThetaInput& in = model.input();
      json input = in.kind == ThetaInput::Kind::Sinusoid ? json("sin")
                   : in.kind == ThetaInput::Kind::Zero   ? json("zero")
                                                         : json{{"const", in.amplitude}};
      return {{"kind", "theta"}, {"input", input}};
    }
    case ModelKind::KuramotoSakaguchi:
    case ModelKind::HigherOrder:
      return {{"kind", to_string(model.kind())},
              {"omega", model.omega()},
              {"K", model.coupling()},
              {"delta", model.lag()}};
  }
  return {};
}

std::pair<Permutation, Permutation> default_pair(int n) {
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) order[static_cast<std::size_t>(k)] = k + 1;
  const Permutation q1(order);
  std::swap(order[static_cast<std::size_t>(n - 2)], order[static_cast<std::size_t>(n - 1)]);
  return {q1, Permutation(order)};
}

double constant_density_rate(const ModelSpec& model) {
  switch (model.kind()) {
    case ModelKind::Theta:
      return 0.0;
    case ModelKind::KuramotoSakaguchi:
      return -model.coupling() * std::cos(model.lag());
    case ModelKind::HigherOrder:
      if (std::abs(std::cos(model.lag())) < 1e-12) return 0.0;
      throw InvalidArgument(
          "higher-order coupling with cos(delta) != 0 has no constant density growth rate");
  }
  return 0.0;
}

RunConfig parse_config(const json& merged) {
  only_keys(merged, "",
            {"model", "N", "t0", "t_end", "dt", "seed", "guard_epsilon", "clip", "outputs",
             "initial", "initial_separation", "record_every", "permutations", "pairs",
             "drift_tolerance", "ensemble", "certify"});
  RunConfig c;
  c.model = model_from_json(merged.at("model"));
  const long long n = integer(merged, "N", "");
  if (n < 3 || n > 64) fail("N", "must be between 3 and 64");
  c.n = static_cast<int>(n);
  c.t0 = num(merged, "t0", "");
  c.t_end = num(merged, "t_end", "");
  if (!(c.t_end > c.t0)) fail("t_end", "must exceed t0");
  c.dt = positive(merged, "dt", "");
  const long long seed = integer(merged, "seed", "");
  if (seed < 0) fail("seed", "must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.guard_epsilon = positive(merged, "guard_epsilon", "");
  c.clip = positive(merged, "clip", "");
  if (!merged.at("outputs").is_string() || merged.at("outputs").get<std::string>().empty()) {
    fail("outputs", "expected a non-empty directory path");
  }
  c.outputs = merged.at("outputs").get<std::string>();
  if (!merged.at("initial").is_null()) {
    const json& init = merged.at("initial");
    if (!init.is_array() || init.size() != static_cast<std::size_t>(c.n)) {
      fail("initial", "expected an array of N phases");
    }
    std::vector<double> phases;
    for (const auto& v : init) {
      if (!v.is_number() || !std::isfinite(v.get<double>())) fail("initial", "phases must be finite numbers");
      phases.push_back(v.get<double>());
    }
    c.initial = phases;
  }
  c.initial_separation = positive(merged, "initial_separation", "");
  if (c.initial_separation * c.n >= kTwoPi) fail("initial_separation", "too large for N oscillators");
  const long long every = integer(merged, "record_every", "");
  if (every < 1) fail("record_every", "must be at least 1");
  c.record_every = static_cast<std::size_t>(every);

  if (merged.at("permutations").is_null()) {
    c.permutations = {Permutation::identity(c.n)};
  } else {
    const json& ps = merged.at("permutations");
    if (!ps.is_array()) fail("permutations", "expected an array of index sequences");
    for (std::size_t k = 0; k < ps.size(); ++k) {
      c.permutations.push_back(permutation(ps[k], "permutations[" + std::to_string(k) + "]", c.n));
    }
  }
  if (merged.at("pairs").is_null()) {
    c.pairs = {default_pair(c.n)};
  } else {
    const json& ps = merged.at("pairs");
    if (!ps.is_array()) fail("pairs", "expected an array of [q1, q2] pairs");
    for (std::size_t k = 0; k < ps.size(); ++k) {
      const std::string p = "pairs[" + std::to_string(k) + "]";
      if (!ps[k].is_array() || ps[k].size() != 2) fail(p, "expected [q1, q2]");
      c.pairs.emplace_back(permutation(ps[k][0], p + "[0]", c.n), permutation(ps[k][1], p + "[1]", c.n));
    }
  }
  if (!merged.at("drift_tolerance").is_null()) c.drift_tolerance = positive(merged, "drift_tolerance", "");

  const json& e = merged.at("ensemble");
  only_keys(e, "ensemble",
            {"count", "bins", "compare_bins", "snapshots", "dt", "q", "tolerance", "heavy_threshold"});
  const long long count = integer(e, "count", "ensemble");
  if (count < 1) fail("ensemble.count", "must be at least 1");
  c.ensemble.count = static_cast<std::size_t>(count);
  const long long bins = integer(e, "bins", "ensemble");
  const long long cbins = integer(e, "compare_bins", "ensemble");
  if (bins < 1 || bins > 4096) fail("ensemble.bins", "must be between 1 and 4096");
  if (cbins < 1 || cbins > 4096) fail("ensemble.compare_bins", "must be between 1 and 4096");
  c.ensemble.bins = static_cast<int>(bins);
  c.ensemble.compare_bins = static_cast<int>(cbins);
  if (!e.at("snapshots").is_array() || e.at("snapshots").empty()) {
    fail("ensemble.snapshots", "expected a non-empty array of times");
  }
  c.ensemble.snapshots.clear();
  double prev = 0.0;
  for (const auto& v : e.at("snapshots")) {
    if (!v.is_number()) fail("ensemble.snapshots", "times must be numbers");
    const double t = v.get<double>();
    if (!(t >= prev) || !std::isfinite(t)) {
      fail("ensemble.snapshots", "times must be finite, non-negative and non-decreasing");
    }
    c.ensemble.snapshots.push_back(t);
    prev = t;
  }
  c.ensemble.dt = positive(e, "dt", "ensemble");
  c.ensemble.q = permutation(e.at("q"), "ensemble.q", 3);
  c.ensemble.tolerance = positive(e, "tolerance", "ensemble");
  c.ensemble.heavy_threshold = positive(e, "heavy_threshold", "ensemble");

  const json& cert = merged.at("certify");
  only_keys(cert, "certify",
            {"points", "fd_step", "min_separation", "max_rank_n", "decomposition_pairs",
             "corrupt_psi_sign"});
  const long long points = integer(cert, "points", "certify");
  if (points < 1) fail("certify.points", "must be at least 1");
  c.certify.points = static_cast<int>(points);
  c.certify.fd_step = positive(cert, "fd_step", "certify");
  c.certify.min_separation = positive(cert, "min_separation", "certify");
  const long long max_rank = integer(cert, "max_rank_n", "certify");
  if (max_rank < 4 || max_rank > 10) fail("certify.max_rank_n", "must be between 4 and 10");
  c.certify.max_rank_n = static_cast<int>(max_rank);
  const long long pairs = integer(cert, "decomposition_pairs", "certify");
  if (pairs < 1) fail("certify.decomposition_pairs", "must be at least 1");
  c.certify.decomposition_pairs = static_cast<int>(pairs);
  if (!cert.at("corrupt_psi_sign").is_boolean()) fail("certify.corrupt_psi_sign", "expected a boolean");
  c.certify.corrupt_psi_sign = cert.at("corrupt_psi_sign").get<bool>();
  c.certify.seed = c.seed;

  c.resolved = merged;
  c.resolved["model"] = model_to_json(c.model);
  c.resolved["permutations"] = json::array();
  for (const auto& q : c.permutations) c.resolved["permutations"].push_back(perm_json(q));
  c.resolved["pairs"] = json::array();
  for (const auto& [a, b] : c.pairs) c.resolved["pairs"].push_back({perm_json(a), perm_json(b)});
  return c;
}

}  // namespace phaseinv
