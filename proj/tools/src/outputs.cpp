#include "jumpmc_cli/outputs.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "jumpmc_cli/config.hpp"

namespace jumpmc::cli {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

void put_header_comment(std::ofstream& out, const OutputHeader& h) {
  out << "# config_hash=" << hash_hex(h.config_hash) << " seed=" << h.seed
      << "\n";
}

const char* kind_name(dynamics::EventKind k) {
  switch (k) {
    case dynamics::EventKind::move: return "move";
    case dynamics::EventKind::birth: return "birth";
    case dynamics::EventKind::death: return "death";
  }
  return "move";
}

}  // namespace

std::string hash_hex(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory '" + dir +
                             "': " + ec.message());
}

void write_trajectory_csv(const std::string& path,
                          const dynamics::Trajectory& traj, int dim,
                          const OutputHeader& header) {
  std::ofstream out = open_out(path);
  put_header_comment(out, header);
  out << "t,label";
  for (int k = 1; k <= dim; ++k) out << ",x" << k;
  out << "\n";
  for (const auto& [t, xi] : traj.snapshots) {
    for (int i = 0; i < xi.size(); ++i) {
      out << format_double(t) << "," << i;
      const geometry::Point p = xi.point(i);
      for (int k = 0; k < dim; ++k) out << "," << format_double(p[k]);
      out << "\n";
    }
  }
}

void write_events_csv(const std::string& path,
                      const std::vector<dynamics::Event>& events, int dim,
                      const OutputHeader& header) {
  std::ofstream out = open_out(path);
  put_header_comment(out, header);
  out << "t,kind,label,accepted";
  for (int k = 1; k <= dim; ++k) out << ",from_x" << k;
  for (int k = 1; k <= dim; ++k) out << ",to_x" << k;
  out << "\n";
  for (const auto& e : events) {
    out << format_double(e.time) << "," << kind_name(e.kind) << "," << e.label
        << "," << (e.accepted ? 1 : 0);
    for (int k = 0; k < dim; ++k) out << "," << format_double(e.from[k]);
    for (int k = 0; k < dim; ++k) out << "," << format_double(e.to[k]);
    out << "\n";
  }
}

void write_json(const std::string& path, nlohmann::json body,
                const OutputHeader& header) {
  body["config_hash"] = hash_hex(header.config_hash);
  body["seed"] = header.seed;
  std::ofstream out = open_out(path);
  out << body.dump(2) << "\n";
}

void write_error_json(const std::string& path, const std::string& what) {
  nlohmann::json body;
  body["error"] = what;
  std::ofstream out = open_out(path);
  out << body.dump(2) << "\n";
}

}  // namespace jumpmc::cli
