// phaseinv command-line driver: simulate, certify, ensemble, list-presets.

#include <CLI11.hpp>

#include <Eigen/Core>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "phaseinv/certify.hpp"
#include "phaseinv/config.hpp"
#include "phaseinv/integrate.hpp"
#include "phaseinv/invariants.hpp"
#include "phaseinv/io.hpp"
#include "phaseinv/random.hpp"
#include "phaseinv/sampling.hpp"
#include "phaseinv/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace phaseinv;

namespace {

constexpr int kExitChecksFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct CommonArgs {
  std::string config_path;
  std::string preset;
  std::string outputs;
};

std::string label(const Permutation& q) {
  std::string s;
  for (int v : q.order()) s += (s.empty() ? "" : "-") + std::to_string(v);
  return s;
}

class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }
  fs::path operator()(const std::string& name) {
    files_.push_back(name);
    return dir_ / name;
  }
  void add(const fs::path& full) { files_.push_back(fs::relative(full, dir_).string()); }

  void write_manifest(const std::string& command, const RunConfig& cfg, bool passed) const {
    json outputs = json::array();
    for (const auto& f : files_) {
      outputs.push_back({{"path", f}, {"sha256", io::sha256_file(dir_ / f)}});
    }
    const json manifest = {
        {"command", command},
        {"config", cfg.resolved},
        {"config_hash", io::sha256_hex(cfg.resolved.dump())},
        {"versions",
         {{"phaseinv", kVersion},
          {"compiler", __VERSION__},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                        "." + std::to_string(EIGEN_MINOR_VERSION)},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}},
        {"outputs", outputs},
        {"passed", passed},
    };
    io::write_json(dir_ / "manifest.json", manifest);
  }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

/// Leftover "--a.b value" / "--a.b=value" arguments become config overrides.
std::vector<std::pair<std::string, std::string>> parse_overrides(
    const std::vector<std::string>& extras) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t k = 0; k < extras.size(); ++k) {
    const std::string& arg = extras[k];
    if (arg.rfind("--", 0) != 0 || arg.size() <= 2) {
      throw ConfigError("unexpected argument '" + arg + "'");
    }
    const auto eq = arg.find('=');
    if (eq != std::string::npos) {
      out.emplace_back(arg.substr(2, eq - 2), arg.substr(eq + 1));
    } else {
      if (k + 1 >= extras.size()) throw ConfigError(arg.substr(2) + ": missing value");
      out.emplace_back(arg.substr(2), extras[++k]);
    }
  }
  return out;
}

RunConfig load_config(const CommonArgs& args, const std::vector<std::string>& extras) {
  json merged = default_config_json();
  if (!args.preset.empty()) merged = merge_config(merged, preset_json(args.preset));
  if (!args.config_path.empty()) merged = merge_config(merged, io::read_json(args.config_path));
  if (!args.outputs.empty()) merged["outputs"] = args.outputs;
  for (const auto& [key, value] : parse_overrides(extras)) apply_override(merged, key, value);
  return parse_config(merged);
}

int cmd_simulate(const RunConfig& cfg) {
  OutputSet out(cfg.outputs);
  const PhaseVector initial = [&] {
    if (cfg.initial) return PhaseVector(*cfg.initial);
    auto rng = substream(cfg.seed, 0);
    return random_separated_state(cfg.n, cfg.initial_separation, rng);
  }();
  const CollisionGuard guard(cfg.guard_epsilon);
  const Trajectory traj =
      simulate(cfg.model, initial, cfg.t0, cfg.t_end, cfg.dt, {guard, cfg.record_every});
  io::write_trajectory_csv(out("trajectory.csv"), traj);

  const double nan = std::nan("");
  auto series = [&](const std::function<double(const PhaseVector&)>& fn) {
    std::vector<double> col(traj.states.size(), nan);
    for (std::size_t k = 0; k < traj.guarded_prefix; ++k) col[k] = fn(traj.states[k]);
    return col;
  };

  json drift = {{"model", cfg.model.describe()},
                {"first_guard_violation_time",
                 traj.first_guard_violation_time ? json(*traj.first_guard_violation_time) : json()},
                {"psi", json::array()},
                {"big_psi", json::array()}};
  auto report_json = [](const DriftReport& r) {
    return json{{"observable", r.observable_name},
                {"max_rel_drift", r.max_rel_drift},
                {"initial_value", r.initial_value},
                {"dynamic_range", r.dynamic_range},
                {"samples", r.samples}};
  };

  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;
  for (const auto& q : cfg.permutations) {
    const Observable ob{"abs_psi_" + label(q),
                        [&](const PhaseVector& s) { return std::abs(psi(s, q, guard)); }};
    names.push_back("log_abs_psi_" + label(q));
    cols.push_back(series([&](const PhaseVector& s) { return log_abs_psi(s, q, guard).log_abs; }));
    drift["psi"].push_back(report_json(observable_drift(traj, ob)));
  }
  io::write_series_csv(out("psi_series.csv"), names, traj.times, cols);

  names.clear();
  cols.clear();
  bool passed = true;
  double worst = 0.0;
  for (const auto& [q1, q2] : cfg.pairs) {
    const std::string name = "abs_Psi_" + label(q1) + "_" + label(q2);
    const Observable ob{name, [&](const PhaseVector& s) {
                          return std::exp(log_abs_big_psi(s, q1, q2, guard));
                        }};
    names.push_back(name);
    cols.push_back(series(ob.fn));
    const DriftReport r = observable_drift(traj, ob);
    worst = std::max(worst, r.max_rel_drift);
    drift["big_psi"].push_back(report_json(r));
  }
  io::write_series_csv(out("big_psi_series.csv"), names, traj.times, cols);

  if (cfg.drift_tolerance) {
    passed = worst <= *cfg.drift_tolerance;
    drift["check"] = {{"max_big_psi_drift", worst},
                      {"tolerance", *cfg.drift_tolerance},
                      {"passed", passed}};
  }
  io::write_json(out("drift.json"), drift);
  out.write_manifest("simulate", cfg, passed);
  std::cout << "simulate: " << traj.states.size() << " samples, max |Psi| drift " << worst
            << (cfg.drift_tolerance ? (passed ? " (pass)" : " (FAIL)") : "") << '\n';
  return passed ? 0 : kExitChecksFailed;
}

int cmd_certify(const RunConfig& cfg) {
  OutputSet out(cfg.outputs);
  const CertReport report = run_certification(cfg.certify);
  json j = report.to_json();
  j["seed"] = cfg.seed;
  j["corrupt_psi_sign"] = cfg.certify.corrupt_psi_sign;
  io::write_json(out("certification.json"), j);
  io::write_residual_csv(out("residuals.csv"), report.residuals);
  out.write_manifest("certify", cfg, report.passed());
  for (const auto& item : report.items) {
    std::cout << (item.passed ? "PASS " : "FAIL ") << item.name << '\n';
  }
  return report.passed() ? 0 : kExitChecksFailed;
}

int cmd_ensemble(const RunConfig& cfg) {
  OutputSet out(cfg.outputs);
  const auto& e = cfg.ensemble;
  const double lambda = constant_density_rate(cfg.model);
  SamplerOptions sopt;
  sopt.guard = CollisionGuard(cfg.guard_epsilon);
  const Ensemble ens = sample_clipped_psi(3, e.q, cfg.clip, e.count, cfg.seed, sopt);
  io::write_ensemble_csv(out("ensemble.csv"), ens);
  const auto snaps = evolve_ensemble(ens, cfg.model, e.snapshots, e.dt);

  json comparisons = json::array();
  bool passed = true;
  for (std::size_t s = 0; s < snaps.size(); ++s) {
    const double t = snaps[s].t;
    const std::string stem = "hist_" + std::to_string(s);
    const PlaneHistogram hist = plane_histogram(snaps[s].ensemble, e.bins);
    out.add(io::write_histogram_csv(out(stem + ".csv"), hist, cfg.seed, cfg.clip,
                                    {{"t", t}, {"lambda", lambda}}));
    json item = {{"t", t}, {"lambda", lambda}, {"tolerance", e.tolerance}, {"bins", e.compare_bins}};
    try {
      const DensityComparison c = histogram_vs_transported_density(
          plane_histogram(snaps[s].ensemble, e.compare_bins), e.q, cfg.model, lambda, t, cfg.clip, e.dt,
          {e.heavy_threshold, 8});
      const bool ok = c.max_rel_err <= e.tolerance;
      item.update({{"max_rel_err", c.max_rel_err},
                    {"heavy_bin_count", c.heavy_bin_count},
                    {"guarded_bin_count", c.guarded_bin_count},
                    {"chi_square", c.chi_square},
                    {"dof", c.dof},
                    {"p_value", c.p_value},
                    {"clipped_heavy_bins", c.clipped_heavy_bins},
                    {"expected_noise", c.expected_noise},
                    {"passed", ok}});
      passed = passed && ok;
    } catch (const InsufficientData& err) {
      item.update({{"error", err.what()}, {"passed", false}});
      passed = false;
    }
    comparisons.push_back(item);
    std::cout << "ensemble: t=" << t << " max_rel_err="
              << (item.contains("max_rel_err") ? item["max_rel_err"].dump() : "n/a")
              << (item["passed"].get<bool>() ? " (pass)" : " (FAIL)") << '\n';
  }
  io::write_json(out("comparison.json"),
                 {{"model", cfg.model.describe()},
                  {"acceptance",
                   {{"proposals", ens.stats.proposals},
                    {"accepted", ens.stats.accepted},
                    {"guard_rejections", ens.stats.guard_rejections},
                    {"rate", ens.stats.rate()}}},
                  {"snapshots", comparisons},
                  {"passed", passed}});
  out.write_manifest("ensemble", cfg, passed);
  return passed ? 0 : kExitChecksFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-oscillator invariants: simulation and certification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  CommonArgs args;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", args.config_path, "Run configuration (JSON)")
        ->check(CLI::ExistingFile);
    sub->add_option("-p,--preset", args.preset, "Named preset (see list-presets)");
    sub->add_option("-o,--out", args.outputs, "Output directory (overrides 'outputs')");
    sub->allow_extras();
    sub->footer("Any config field can be overridden as --dotted.key value.");
  };
  auto* sim = app.add_subcommand("simulate", "Integrate one trajectory and track psi / Psi");
  auto* cert = app.add_subcommand("certify", "Run the identity and invariance battery");
  auto* ens = app.add_subcommand("ensemble", "Sample, evolve and histogram an N = 3 cloud");
  auto* list = app.add_subcommand("list-presets", "Print the named presets");
  for (auto* s : {sim, cert, ens}) add_common(s);

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& p : list_presets()) std::cout << p.name << "\t" << p.description << '\n';
      return 0;
    }
    CLI::App* chosen = sim->parsed() ? sim : cert->parsed() ? cert : ens;
    const RunConfig cfg = load_config(args, chosen->remaining());
    if (chosen == sim) return cmd_simulate(cfg);
    if (chosen == cert) return cmd_certify(cfg);
    return cmd_ensemble(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
