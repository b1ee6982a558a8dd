#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "phaseinv/io.hpp"

namespace phaseinv {

struct CertifyOptions {
  std::uint64_t seed = 1;
  /// Random states per (model, N) cell and per identity.
  int points = 20;
  double fd_step = 1e-5;
  /// Minimum pairwise separation of evaluation states.
  double min_separation = 0.1;
  /// Largest N used by the rank items.
  int max_rank_n = 8;
  /// Permutation pairs per N in the decomposition item.
  int decomposition_pairs = 20;
  /// Test hook: drop the sign of psi, which must break the N = 4 sum identity.
  bool corrupt_psi_sign = false;
};

struct CertItem {
  std::string name;
  bool passed = false;
  nlohmann::json measured;
};

struct CertReport {
  std::vector<CertItem> items;
  std::vector<io::ResidualRow> residuals;

  bool passed() const;
  nlohmann::json to_json() const;
};

CertReport run_certification(const CertifyOptions& options);

}  // namespace phaseinv
