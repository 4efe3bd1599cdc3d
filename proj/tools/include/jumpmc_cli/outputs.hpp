#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "jumpmc/dynamics.hpp"

namespace jumpmc::cli {

// Stamped into every output so a result file identifies its run.
struct OutputHeader {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};

void ensure_dir(const std::string& dir);

// trajectory.csv: one row per particle per snapshot, columns t,label,x1..xd.
void write_trajectory_csv(const std::string& path,
                          const dynamics::Trajectory& traj, int dim,
                          const OutputHeader& header);

// events.csv: t,kind,label,accepted,from_x*,to_x*.
void write_events_csv(const std::string& path,
                      const std::vector<dynamics::Event>& events, int dim,
                      const OutputHeader& header);

// JSON carries the hash and seed as fields (comments are not JSON).
void write_json(const std::string& path, nlohmann::json body,
                const OutputHeader& header);

void write_error_json(const std::string& path, const std::string& what);

std::string hash_hex(std::uint64_t h);

}  // namespace jumpmc::cli
