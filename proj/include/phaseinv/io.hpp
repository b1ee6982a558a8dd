#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "phaseinv/integrate.hpp"
#include "phaseinv/sampling.hpp"

namespace phaseinv::io {

/// Shortest round-trip text is not required; %.17g always round-trips.
std::string format_double(double x);

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

struct TrajectoryTable {
  std::vector<double> times;
  std::vector<PhaseVector> states;
};
TrajectoryTable read_trajectory_csv(const std::filesystem::path& path);

/// Header `t,<names...>`, one row per time.
void write_series_csv(const std::filesystem::path& path, const std::vector<std::string>& names,
                      const std::vector<double>& times,
                      const std::vector<std::vector<double>>& columns);

void write_ensemble_csv(const std::filesystem::path& path, const Ensemble& ensemble);

/// Writes `bin_x,bin_y,count` and a JSON sidecar next to it (path + ".json").
/// Returns the sidecar path.
std::filesystem::path write_histogram_csv(const std::filesystem::path& path,
                                          const PlaneHistogram& hist, std::uint64_t seed,
                                          double clip, const nlohmann::json& extra = {});

struct ResidualRow {
  std::string model;
  int n = 0;
  std::uint64_t seed = 0;
  int point_id = 0;
  double rel_residual = 0.0;
  double fd_step = 0.0;
};
void write_residual_csv(const std::filesystem::path& path, const std::vector<ResidualRow>& rows);

void write_json(const std::filesystem::path& path, const nlohmann::json& value);
nlohmann::json read_json(const std::filesystem::path& path);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace phaseinv::io
