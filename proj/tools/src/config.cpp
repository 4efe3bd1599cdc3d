#include "jumpmc_cli/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace jumpmc::cli {

using geometry::BoundaryMode;
using kernels::ConstantMode;
using kernels::KernelKind;
using potentials::PairKind;
using potentials::SelfKind;
using rates::RateMode;

namespace {

struct Context {
  int line = 0;                // 0: not from a file
  std::string section;
  std::string key;

  std::string where() const {
    char buf[160];
    if (line > 0)
      std::snprintf(buf, sizeof buf, "config line %d, section [%s], key '%s'",
                    line, section.c_str(), key.c_str());
    else
      std::snprintf(buf, sizeof buf, "override %s.%s", section.c_str(),
                    key.c_str());
    return buf;
  }
};

[[noreturn]] void fail(const Context& ctx, const std::string& msg) {
  throw ConfigError(ctx.where() + ": " + msg);
}

double to_double(const Context& ctx, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') fail(ctx, "'" + v + "' is not a number");
  return x;
}

long to_long(const Context& ctx, const std::string& v) {
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    fail(ctx, "'" + v + "' is not an integer");
  return x;
}

std::uint64_t to_u64(const Context& ctx, const std::string& v) {
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    fail(ctx, "'" + v + "' is not an unsigned integer");
  return x;
}

bool to_bool(const Context& ctx, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail(ctx, "'" + v + "' is not a boolean (true/false)");
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Applies one key.  The single table shared by the file parser, --set
// overrides, and the serializer keeps the three in lockstep.
void set_key(RunConfig& cfg, const Context& ctx, const std::string& value) {
  const std::string& s = ctx.section;
  const std::string& k = ctx.key;

  if (s == "run") {
    if (k == "seed") { cfg.params.seed = to_u64(ctx, value); return; }
    if (k == "out") { cfg.out_dir = value; return; }
    if (k == "replicas") {
      const long r = to_long(ctx, value);
      if (r < 1) fail(ctx, "replicas must be >= 1");
      cfg.replicas = static_cast<int>(r);
      return;
    }
  } else if (s == "domain") {
    if (k == "dim") {
      const long d = to_long(ctx, value);
      if (d < 1 || d > geometry::kMaxDim)
        fail(ctx, "dim = " + value + " out of range [1,3]");
      cfg.domain.dim = static_cast<int>(d);
      return;
    }
    if (k == "half_width") {
      const double w = to_double(ctx, value);
      if (!(w > 0.0)) fail(ctx, "half_width must be > 0");
      cfg.domain.half_width = w;
      return;
    }
    if (k == "boundary") {
      if (value == "reject") cfg.domain.boundary = BoundaryMode::reject;
      else if (value == "reflect") cfg.domain.boundary = BoundaryMode::reflect;
      else fail(ctx, "boundary must be reject or reflect");
      return;
    }
  } else if (s == "potential") {
    if (k == "self") {
      if (value == "zero") cfg.potential.self = SelfKind::zero;
      else if (value == "quadratic") cfg.potential.self = SelfKind::quadratic;
      else fail(ctx, "self must be zero or quadratic");
      return;
    }
    if (k == "self_strength") {
      cfg.potential.self_strength = to_double(ctx, value);
      return;
    }
    if (k == "pair") {
      if (value == "zero") cfg.potential.pair = PairKind::zero;
      else if (value == "lennard_jones")
        cfg.potential.pair = PairKind::lennard_jones;
      else if (value == "riesz") cfg.potential.pair = PairKind::riesz;
      else if (value == "logarithmic")
        cfg.potential.pair = PairKind::logarithmic;
      else if (value == "hard_core") cfg.potential.pair = PairKind::hard_core;
      else
        fail(ctx,
             "pair must be one of zero, lennard_jones, riesz, logarithmic, "
             "hard_core");
      return;
    }
    if (k == "riesz_a") { cfg.potential.riesz_a = to_double(ctx, value); return; }
    if (k == "log_beta") {
      cfg.potential.log_beta = to_double(ctx, value);
      return;
    }
    if (k == "log_sign") {
      const long sg = to_long(ctx, value);
      if (sg != 1 && sg != -1) fail(ctx, "log_sign must be 1 or -1");
      cfg.potential.log_sign = static_cast<int>(sg);
      return;
    }
    if (k == "hard_core_radius") {
      cfg.potential.hard_core_radius = to_double(ctx, value);
      return;
    }
    if (k == "scale") { cfg.potential.scale = to_double(ctx, value); return; }
  } else if (s == "kernel") {
    if (k == "kind") {
      if (value == "alpha_stable") cfg.kernel.kind = KernelKind::alpha_stable;
      else if (value == "stable_like")
        cfg.kernel.kind = KernelKind::stable_like;
      else if (value == "truncated_range")
        cfg.kernel.kind = KernelKind::truncated_range;
      else
        fail(ctx,
             "kind must be alpha_stable, stable_like or truncated_range");
      return;
    }
    if (k == "alpha") {
      const double a = to_double(ctx, value);
      if (!(a > 0.0 && a < 2.0))
        fail(ctx, "alpha = " + value + " out of range (0,2)");
      cfg.kernel.alpha = a;
      return;
    }
    if (k == "alpha_base") {
      const double a = to_double(ctx, value);
      if (!(a > 0.0 && a < 2.0))
        fail(ctx, "alpha_base = " + value + " out of range (0,2)");
      cfg.alpha_base = a;
      return;
    }
    if (k == "alpha_amplitude") {
      cfg.alpha_amplitude = to_double(ctx, value);
      return;
    }
    if (k == "constant_mode") {
      if (value == "unit") cfg.kernel.constant_mode = ConstantMode::unit;
      else if (value == "closed_form")
        cfg.kernel.constant_mode = ConstantMode::closed_form;
      else fail(ctx, "constant_mode must be unit or closed_form");
      return;
    }
    if (k == "trunc_radius") {
      cfg.kernel.trunc_radius = to_double(ctx, value);
      return;
    }
    if (k == "trunc_power") {
      cfg.kernel.trunc_power = to_double(ctx, value);
      return;
    }
    if (k == "r_min") {
      const double r = to_double(ctx, value);
      if (r < 0.0) fail(ctx, "r_min must be >= 0");
      cfg.kernel.r_min = r;
      return;
    }
  } else if (s == "envelope") {
    if (k == "beta") {
      const double b = to_double(ctx, value);
      if (b != 0.0 && !(b > 0.0 && b < 2.0))
        fail(ctx, "beta = " + value + " out of range (0,2) (0 means derived)");
      cfg.envelope_beta = b;
      return;
    }
    if (k == "C1") {
      const double c = to_double(ctx, value);
      if (!(c >= 1.0)) fail(ctx, "C1 must be >= 1");
      cfg.kernel.C1 = c;
      return;
    }
  } else if (s == "rate") {
    if (k == "mode") {
      if (value == "gibbs_closed_form")
        cfg.rate_mode = RateMode::gibbs_closed_form;
      else if (value == "free") cfg.rate_mode = RateMode::free;
      else if (value == "ginibre_truncated")
        cfg.rate_mode = RateMode::ginibre_truncated;
      else
        fail(ctx, "mode must be gibbs_closed_form, free or ginibre_truncated");
      return;
    }
    if (k == "ginibre_radius") {
      const double r = to_double(ctx, value);
      if (r < 0.0) fail(ctx, "ginibre_radius must be >= 0 (0 means default)");
      cfg.ginibre_radius = r;
      return;
    }
  } else if (s == "dynamics") {
    if (k == "steps") {
      const long n = to_long(ctx, value);
      if (n < 0) fail(ctx, "steps must be >= 0");
      cfg.params.steps = n;
      return;
    }
    if (k == "horizon") {
      const double h = to_double(ctx, value);
      if (h < 0.0) fail(ctx, "horizon must be >= 0");
      cfg.params.horizon = h;
      return;
    }
    if (k == "gamma") {
      const double g = to_double(ctx, value);
      if (!(g >= 1.0)) fail(ctx, "gamma must be >= 1");
      cfg.params.gamma = g;
      return;
    }
    if (k == "stride") {
      const long n = to_long(ctx, value);
      if (n < 1) fail(ctx, "stride must be >= 1");
      cfg.params.stride = n;
      return;
    }
    if (k == "record_events") {
      cfg.params.record_events = to_bool(ctx, value);
      return;
    }
    if (k == "activity") {
      const double z = to_double(ctx, value);
      if (!(z > 0.0)) fail(ctx, "activity must be > 0");
      cfg.params.activity = z;
      return;
    }
    if (k == "energy_floor") {
      cfg.params.energy_floor = to_double(ctx, value);
      return;
    }
    if (k == "n_init") {
      const long n = to_long(ctx, value);
      if (n < 0) fail(ctx, "n_init must be >= 0");
      cfg.n_init = static_cast<int>(n);
      return;
    }
  } else if (s == "testfn") {
    if (k == "degree") {
      const long n = to_long(ctx, value);
      if (n < 1) fail(ctx, "degree must be >= 1");
      cfg.testfn_degree = static_cast<int>(n);
      return;
    }
    if (k == "centers") { cfg.testfn_centers = value; return; }
    if (k == "radii") { cfg.testfn_radii = value; return; }
    if (k == "coefficients") { cfg.testfn_coefficients = value; return; }
  } else if (s == "diagnostics") {
    if (k == "kappa") {
      const double kp = to_double(ctx, value);
      if (kp < 0.0) fail(ctx, "kappa must be >= 0");
      cfg.kappa = kp;
      return;
    }
    if (k == "n_bins") {
      const long n = to_long(ctx, value);
      if (n < 1) fail(ctx, "n_bins must be >= 1");
      cfg.n_bins = static_cast<int>(n);
      return;
    }
    if (k == "samples") {
      const long n = to_long(ctx, value);
      if (n < 2) fail(ctx, "samples must be >= 2");
      cfg.samples = static_cast<int>(n);
      return;
    }
    if (k == "intensity") {
      const double z = to_double(ctx, value);
      if (!(z > 0.0)) fail(ctx, "intensity must be > 0");
      cfg.intensity = z;
      return;
    }
    if (k == "a_lo") { cfg.a_lo = to_double(ctx, value); return; }
    if (k == "a_hi") { cfg.a_hi = to_double(ctx, value); return; }
  } else {
    fail(ctx, "unknown section [" + s + "]");
  }
  fail(ctx, "unknown key '" + k + "' in section [" + s + "]");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

std::vector<double> parse_numbers(const std::string& entry,
                                  const std::string& what) {
  std::vector<double> out;
  const char* p = entry.c_str();
  while (*p) {
    while (*p == ' ' || *p == ',' || *p == '\t') ++p;
    if (!*p) break;
    char* end = nullptr;
    const double v = std::strtod(p, &end);
    if (end == p)
      throw ConfigError("section [testfn]: cannot parse " + what + " '" +
                        entry + "'");
    out.push_back(v);
    p = end;
  }
  return out;
}

functionals::TestFunction build_testfn(const RunConfig& cfg) {
  functionals::TestFunction f;
  const auto centers = split(cfg.testfn_centers, ';');
  const auto radii = split(cfg.testfn_radii, ';');
  if (centers.size() != radii.size())
    throw ConfigError("section [testfn]: centers and radii count mismatch");
  for (std::size_t k = 0; k < centers.size(); ++k) {
    auto coords = parse_numbers(centers[k], "center");
    if (static_cast<int>(coords.size()) > cfg.domain.dim)
      throw ConfigError("section [testfn]: center has too many coordinates");
    coords.resize(cfg.domain.dim, 0.0);  // short points pad with zeros
    functionals::TestFunction::Bump b;
    b.center.dim = cfg.domain.dim;
    for (int c = 0; c < cfg.domain.dim; ++c) b.center.x[c] = coords[c];
    const auto r = parse_numbers(radii[k], "radius");
    if (r.size() != 1 || !(r[0] > 0.0))
      throw ConfigError("section [testfn]: each radius must be one positive "
                        "number");
    b.radius = r[0];
    f.bumps.push_back(b);
  }
  for (const std::string& entry : split(cfg.testfn_coefficients, ';')) {
    const auto vals = parse_numbers(entry, "coefficient entry");
    if (vals.size() != 1 + f.bumps.size())
      throw ConfigError(
          "section [testfn]: each coefficient entry needs a coefficient plus "
          "one power per bump");
    functionals::TestFunction::Term t;
    t.coeff = vals[0];
    int total = 0;
    for (std::size_t k = 1; k < vals.size(); ++k) {
      const int p = static_cast<int>(vals[k]);
      if (p < 0 || static_cast<double>(p) != vals[k])
        throw ConfigError("section [testfn]: powers must be nonnegative "
                          "integers");
      t.powers.push_back(p);
      total += p;
    }
    if (total > cfg.testfn_degree)
      throw ConfigError("section [testfn]: term degree exceeds 'degree'");
    f.terms.push_back(t);
  }
  f.validate();
  return f;
}

}  // namespace

void RunConfig::finalize() {
  // The index field is derived; rebuild it so base/amplitude edits take hold.
  if (alpha_amplitude == 0.0)
    kernel.alpha_field = kernels::AlphaField::constant(alpha_base);
  else
    kernel.alpha_field = kernels::AlphaField::sine(alpha_base, alpha_amplitude);

  if (potential.pair == PairKind::riesz && potential.riesz_a == 0.0)
    throw ConfigError(
        "missing required key 'riesz_a' in section [potential] (pair = riesz)");
  if (potential.pair == PairKind::hard_core &&
      potential.hard_core_radius == 0.0)
    throw ConfigError(
        "missing required key 'hard_core_radius' in section [potential] "
        "(pair = hard_core)");
  if (potential.pair == PairKind::logarithmic && potential.log_beta == 0.0)
    throw ConfigError(
        "missing required key 'log_beta' in section [potential] "
        "(pair = logarithmic)");
  if (!(a_lo < a_hi))
    throw ConfigError("section [diagnostics]: need a_lo < a_hi");

  try {
    domain.validate();
    potential.validate(domain.dim);
    kernel.validate(domain.dim);
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config validation: ") + e.what());
  }
  testfn = build_testfn(*this);
}

rates::RateSpec RunConfig::make_rate() const {
  rates::RateSpec spec =
      rates::RateSpec::build(domain, kernel, potential, rate_mode);
  if (ginibre_radius > 0.0) spec.ginibre_radius = ginibre_radius;
  if (envelope_beta > 0.0) spec.envelope.beta_origin = envelope_beta;
  spec.validate();
  return spec;
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  Context ctx;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        ctx.line = line_no;
        ctx.key = "";
        fail(ctx, "malformed section header '" + line + "'");
      }
      ctx.section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      ctx.line = line_no;
      ctx.key = line;
      fail(ctx, "expected key = value");
    }
    ctx.line = line_no;
    ctx.key = trim(line.substr(0, eq));
    if (ctx.section.empty()) fail(ctx, "key before any [section] header");
    set_key(cfg, ctx, trim(line.substr(eq + 1)));
  }
  cfg.finalize();
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  const std::size_t dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    throw ConfigError("--set expects section.key=value, got '" + assignment +
                      "'");
  Context ctx;
  ctx.section = trim(assignment.substr(0, dot));
  ctx.key = trim(assignment.substr(dot + 1, eq - dot - 1));
  set_key(cfg, ctx, trim(assignment.substr(eq + 1)));
}

std::string format_double(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  const auto d = [](double v) { return format_double(v); };

  out << "[run]\n";
  out << "seed = " << cfg.params.seed << "\n";
  out << "out = " << cfg.out_dir << "\n";
  out << "replicas = " << cfg.replicas << "\n";

  out << "\n[domain]\n";
  out << "dim = " << cfg.domain.dim << "\n";
  out << "half_width = " << d(cfg.domain.half_width) << "\n";
  out << "boundary = "
      << (cfg.domain.boundary == BoundaryMode::reject ? "reject" : "reflect")
      << "\n";

  out << "\n[potential]\n";
  out << "self = "
      << (cfg.potential.self == SelfKind::quadratic ? "quadratic" : "zero")
      << "\n";
  out << "self_strength = " << d(cfg.potential.self_strength) << "\n";
  const char* pair = "zero";
  switch (cfg.potential.pair) {
    case PairKind::zero: pair = "zero"; break;
    case PairKind::lennard_jones: pair = "lennard_jones"; break;
    case PairKind::riesz: pair = "riesz"; break;
    case PairKind::logarithmic: pair = "logarithmic"; break;
    case PairKind::hard_core: pair = "hard_core"; break;
  }
  out << "pair = " << pair << "\n";
  out << "riesz_a = " << d(cfg.potential.riesz_a) << "\n";
  out << "log_beta = " << d(cfg.potential.log_beta) << "\n";
  out << "log_sign = " << cfg.potential.log_sign << "\n";
  out << "hard_core_radius = " << d(cfg.potential.hard_core_radius) << "\n";
  out << "scale = " << d(cfg.potential.scale) << "\n";

  out << "\n[kernel]\n";
  const char* kind = "alpha_stable";
  switch (cfg.kernel.kind) {
    case KernelKind::alpha_stable: kind = "alpha_stable"; break;
    case KernelKind::stable_like: kind = "stable_like"; break;
    case KernelKind::truncated_range: kind = "truncated_range"; break;
  }
  out << "kind = " << kind << "\n";
  out << "alpha = " << d(cfg.kernel.alpha) << "\n";
  out << "alpha_base = " << d(cfg.alpha_base) << "\n";
  out << "alpha_amplitude = " << d(cfg.alpha_amplitude) << "\n";
  out << "constant_mode = "
      << (cfg.kernel.constant_mode == ConstantMode::unit ? "unit"
                                                         : "closed_form")
      << "\n";
  out << "trunc_radius = " << d(cfg.kernel.trunc_radius) << "\n";
  out << "trunc_power = " << d(cfg.kernel.trunc_power) << "\n";
  out << "r_min = " << d(cfg.kernel.r_min) << "\n";

  out << "\n[envelope]\n";
  out << "beta = " << d(cfg.envelope_beta) << "\n";
  out << "C1 = " << d(cfg.kernel.C1) << "\n";

  out << "\n[rate]\n";
  const char* mode = "gibbs_closed_form";
  switch (cfg.rate_mode) {
    case RateMode::gibbs_closed_form: mode = "gibbs_closed_form"; break;
    case RateMode::free: mode = "free"; break;
    case RateMode::ginibre_truncated: mode = "ginibre_truncated"; break;
  }
  out << "mode = " << mode << "\n";
  out << "ginibre_radius = " << d(cfg.ginibre_radius) << "\n";

  out << "\n[dynamics]\n";
  out << "steps = " << cfg.params.steps << "\n";
  out << "horizon = " << d(cfg.params.horizon) << "\n";
  out << "gamma = " << d(cfg.params.gamma) << "\n";
  out << "stride = " << cfg.params.stride << "\n";
  out << "record_events = " << (cfg.params.record_events ? "true" : "false")
      << "\n";
  out << "activity = " << d(cfg.params.activity) << "\n";
  out << "energy_floor = " << d(cfg.params.energy_floor) << "\n";
  out << "n_init = " << cfg.n_init << "\n";

  out << "\n[testfn]\n";
  out << "degree = " << cfg.testfn_degree << "\n";
  out << "centers = " << cfg.testfn_centers << "\n";
  out << "radii = " << cfg.testfn_radii << "\n";
  out << "coefficients = " << cfg.testfn_coefficients << "\n";

  out << "\n[diagnostics]\n";
  out << "kappa = " << d(cfg.kappa) << "\n";
  out << "n_bins = " << cfg.n_bins << "\n";
  out << "samples = " << cfg.samples << "\n";
  out << "intensity = " << d(cfg.intensity) << "\n";
  out << "a_lo = " << d(cfg.a_lo) << "\n";
  out << "a_hi = " << d(cfg.a_hi) << "\n";
  return out.str();
}

std::uint64_t config_hash(const RunConfig& cfg) {
  // The hash identifies the run semantics, so the output location is pinned
  // to its default before serializing.
  RunConfig keyed = cfg;
  keyed.out_dir = "out";
  const std::string s = serialize_config(keyed);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace jumpmc::cli
