#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "jumpmc/dynamics.hpp"
#include "jumpmc/functionals.hpp"
#include "jumpmc/geometry.hpp"
#include "jumpmc/kernels.hpp"
#include "jumpmc/potentials.hpp"
#include "jumpmc/rates.hpp"

namespace jumpmc::cli {

// Parse or validation failure; the message carries line and section context.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// One archivable INI file describes a run end to end; flags only override.
struct RunConfig {
  geometry::Domain domain;
  potentials::PotentialSpec potential;
  kernels::KernelSpec kernel;
  double alpha_base = 1.0;       // stable-like index field a(x) = base + ...
  double alpha_amplitude = 0.0;  // ... amplitude * sin(x_1); 0 means constant
  double envelope_beta = 0.0;    // origin exponent override; 0 means derived
  rates::RateMode rate_mode = rates::RateMode::gibbs_closed_form;
  double ginibre_radius = 0.0;   // 0 means the box half-width

  dynamics::SimParams params;
  int n_init = 5;  // initial particle count for the jump chains

  double kappa = 0.0;  // intensity growth exponent used by the checks
  int n_bins = 16;
  int samples = 1000;
  double intensity = 1.0;
  double a_lo = -0.5, a_hi = 0.5;  // test interval of the jump-mass check

  // Bump-polynomial observable. Points are ';'-separated, coordinates
  // space-separated (short points are zero-padded to the dimension); each
  // coefficient entry is "coeff p_1 .. p_l" with one power per bump.
  int testfn_degree = 4;
  std::string testfn_centers = "0";
  std::string testfn_radii = "0.5";
  std::string testfn_coefficients = "1 1";
  functionals::TestFunction testfn;  // built by finalize()

  int replicas = 1;
  std::string out_dir = "out";

  // Rebuilds derived members (the kernel index field) and cross-validates
  // every section. Call after any direct field mutation.
  void finalize();

  // Rate table for the jump dynamics, with the envelope overrides applied.
  rates::RateSpec make_rate() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Canonical form: every known key in a fixed order, shortest round-trip
// number formatting. parse(serialize(parse(x))) == parse(x).
std::string serialize_config(const RunConfig& cfg);

// `--set section.key=value`: same key table and checks as the file parser.
void apply_override(RunConfig& cfg, const std::string& assignment);

// FNV-1a over the canonical serialization; embedded in output headers.
std::uint64_t config_hash(const RunConfig& cfg);

// Shortest decimal string that parses back to exactly v.
std::string format_double(double v);

}  // namespace jumpmc::cli
