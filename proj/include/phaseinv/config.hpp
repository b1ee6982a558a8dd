#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "phaseinv/certify.hpp"
#include "phaseinv/models.hpp"

namespace phaseinv {

/// Raised for malformed run configurations; the message starts with the
/// offending dotted field path.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct EnsembleConfig {
  std::size_t count = 100000;
  int bins = 50;
  /// Coarser grid used for the density comparison so that bins are heavy.
  int compare_bins = 10;
  std::vector<double> snapshots{0.0};
  double dt = 0.01;
  Permutation q{1, 2, 3};
  double tolerance = 0.08;
  double heavy_threshold = 500.0;
};

struct RunConfig {
  ModelSpec model = ModelSpec::kuramoto_sakaguchi(0.0, 1.0, 0.0);
  int n = 10;
  double t0 = 0.0;
  double t_end = 50.0;
  double dt = 1e-3;
  std::uint64_t seed = 1;
  double guard_epsilon = kDefaultGuardEpsilon;
  double clip = 1e2;
  std::string outputs = "out";
  std::optional<std::vector<double>> initial;
  double initial_separation = 0.05;
  std::size_t record_every = 1;
  std::vector<Permutation> permutations;
  std::vector<std::pair<Permutation, Permutation>> pairs;
  std::optional<double> drift_tolerance;
  EnsembleConfig ensemble;
  CertifyOptions certify;
  /// Fully resolved JSON form, hashed into the manifest.
  nlohmann::json resolved;
};

nlohmann::json default_config_json();

struct PresetInfo {
  std::string name;
  std::string description;
};
std::vector<PresetInfo> list_presets();
/// Partial config to be merged over the defaults. Throws ConfigError for
/// unknown names.
nlohmann::json preset_json(const std::string& name);

/// Sets a dotted path (e.g. "model.K") from command-line text. The value is
/// read as JSON when it parses, otherwise as a string.
void apply_override(nlohmann::json& config, const std::string& dotted_key,
                    const std::string& value);

/// Defaults, then the partial config, merged key by key ("model" is replaced
/// whole when given).
nlohmann::json merge_config(const nlohmann::json& partial);
/// Same merge over an already complete config.
nlohmann::json merge_config(const nlohmann::json& base, const nlohmann::json& partial);

/// Validates and converts a merged config.
RunConfig parse_config(const nlohmann::json& merged);

ModelSpec model_from_json(const nlohmann::json& j, const std::string& path = "model");
nlohmann::json model_to_json(const ModelSpec& model);

/// q1 = identity, q2 = identity with the last two entries swapped.
std::pair<Permutation, Permutation> default_pair(int n);

/// The constant growth rate of the ensemble density: 0 for Theta, -K cos(delta)
/// for KS, and 0 for the higher-order model at cos(delta) = 0. Other
/// higher-order settings have no constant rate and raise InvalidArgument.
double constant_density_rate(const ModelSpec& model);

}  // namespace phaseinv
