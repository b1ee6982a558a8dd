#include "phaseinv/io.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include <openssl/evp.h>

namespace phaseinv::io {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", x);
  return buf.data();
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  auto out = open_out(path);
  const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
  out << 't';
  for (std::size_t j = 1; j <= n; ++j) out << ",theta_" << j;
  out << '\n';
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    out << format_double(traj.times[k]);
    for (double v : traj.states[k].phases()) out << ',' << format_double(v);
    out << '\n';
  }
  close_out(out, path);
}

TrajectoryTable read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
  const auto header = split(line, ',');
  if (header.empty() || header.front() != "t") {
    throw std::runtime_error(path.string() + ": expected header starting with 't'");
  }
  TrajectoryTable table;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) {
      throw std::runtime_error(path.string() + ": row " + std::to_string(row) +
                               " has the wrong number of columns");
    }
    table.times.push_back(std::stod(cells[0]));
    std::vector<double> th;
    for (std::size_t j = 1; j < cells.size(); ++j) th.push_back(std::stod(cells[j]));
    table.states.emplace_back(std::move(th));
  }
  return table;
}

void write_series_csv(const std::filesystem::path& path, const std::vector<std::string>& names,
                      const std::vector<double>& times,
                      const std::vector<std::vector<double>>& columns) {
  if (names.size() != columns.size()) {
    throw InvalidArgument("write_series_csv: names and columns differ in length");
  }
  for (const auto& c : columns) {
    if (c.size() != times.size()) throw InvalidArgument("write_series_csv: ragged columns");
  }
  auto out = open_out(path);
  out << 't';
  for (const auto& name : names) out << ',' << name;
  out << '\n';
  for (std::size_t k = 0; k < times.size(); ++k) {
    out << format_double(times[k]);
    for (const auto& c : columns) out << ',' << format_double(c[k]);
    out << '\n';
  }
  close_out(out, path);
}

void write_ensemble_csv(const std::filesystem::path& path, const Ensemble& ensemble) {
  auto out = open_out(path);
  out << "sample_id";
  for (int j = 1; j <= ensemble.n; ++j) out << ",theta_" << j;
  out << '\n';
  for (std::size_t i = 0; i < ensemble.count(); ++i) {
    out << i;
    for (double v : ensemble.sample(i)) out << ',' << format_double(v);
    out << '\n';
  }
  close_out(out, path);
}

std::filesystem::path write_histogram_csv(const std::filesystem::path& path,
                                          const PlaneHistogram& hist, std::uint64_t seed,
                                          double clip, const nlohmann::json& extra) {
  auto out = open_out(path);
  out << "bin_x,bin_y,count\n";
  for (int ix = 0; ix < hist.bins; ++ix) {
    for (int iy = 0; iy < hist.bins; ++iy) {
      out << ix << ',' << iy << ',' << hist.at(ix, iy) << '\n';
    }
  }
  close_out(out, path);

  std::vector<std::array<int, 2>> singular;
  for (int ix = 0; ix < hist.bins; ++ix) {
    for (int iy = 0; iy < hist.bins; ++iy) {
      if (bin_touches_singular_lines(hist, ix, iy)) singular.push_back({ix, iy});
    }
  }
  nlohmann::json side = {
      {"B", hist.bins},
      {"x_range", {hist.edge(0), hist.edge(hist.bins)}},
      {"y_range", {hist.edge(0), hist.edge(hist.bins)}},
      {"x", "theta_1 - theta_2"},
      {"y", "theta_2 - theta_3"},
      {"total", hist.total},
      {"seed", seed},
      {"clip", clip},
      {"singular_bins", singular},
  };
  if (extra.is_object()) side.update(extra);
  std::filesystem::path sidecar = path;
  sidecar += ".json";
  write_json(sidecar, side);
  return sidecar;
}

void write_residual_csv(const std::filesystem::path& path, const std::vector<ResidualRow>& rows) {
  auto out = open_out(path);
  out << "model,N,seed,point_id,rel_residual,fd_step\n";
  for (const auto& r : rows) {
    out << r.model << ',' << r.n << ',' << r.seed << ',' << r.point_id << ','
        << format_double(r.rel_residual) << ',' << format_double(r.fd_step) << '\n';
  }
  close_out(out, path);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
  auto out = open_out(path);
  out << value.dump(2) << '\n';
  close_out(out, path);
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string s;
  s.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    s.push_back(hex[digest[i] >> 4]);
    s.push_back(hex[digest[i] & 0xf]);
  }
  return s;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

}  // namespace phaseinv::io
