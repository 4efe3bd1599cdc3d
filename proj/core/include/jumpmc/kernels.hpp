#pragma once

#include <functional>
#include <string>
#include <vector>

#include "jumpmc/geometry.hpp"
#include "jumpmc/rng.hpp"

namespace jumpmc::kernels {

// Spatially varying stability index for the stable-like kernel. The declared
// range [lo, hi] must satisfy 0 < lo <= hi < 2 and contain every evaluated
// value; the envelope construction leans on it.
struct AlphaField {
  enum class Tag { constant, sine, custom };
  Tag tag = Tag::constant;
  double base = 1.0;       // constant value, or offset for sine
  double amplitude = 0.0;  // sine: alpha(x) = base + amplitude * sin(x_1)
  std::function<double(const geometry::Point&)> custom;
  double lo = 1.0;
  double hi = 1.0;

  double eval(const geometry::Point& x) const;
  static AlphaField constant(double value);
  static AlphaField sine(double base, double amplitude);
};

enum class KernelKind { alpha_stable, stable_like, truncated_range };
enum class ConstantMode { unit, closed_form };

struct KernelSpec {
  KernelKind kind = KernelKind::alpha_stable;
  double alpha = 1.0;  // alpha_stable index, in (0,2)
  AlphaField alpha_field = AlphaField::constant(1.0);
  ConstantMode constant_mode = ConstantMode::unit;
  double trunc_radius = 1.0;  // truncated_range: support cutoff
  double trunc_power = 0.0;   // truncated_range: nu = r^{-power} on r <= radius
  double C1 = 1.0;            // envelope dominance constant, >= 1
  double r_min = 0.0;         // small-jump cutoff; 0 means 1e-3 * half_width

  void validate(int dim) const;
};

// Normalizing constant c(d, alpha) of the rotation-invariant stable kernel.
// unit mode returns 1 (the constant only rescales time); closed_form mode
// evaluates 2^{-alpha+1} pi^{(d+1)/d} / (Gamma(alpha/2+1) Gamma((alpha+d)/2)
// sin(pi alpha / 2)) as printed.
double stable_constant(int d, double alpha,
                       ConstantMode mode = ConstantMode::closed_form);

// nu(xi, x; y). The implemented kernels ignore xi beyond x, which makes the
// configuration-symmetry axiom trivial. Raw density: no range truncation here.
double eval_kernel(const KernelSpec& spec, const geometry::Configuration& xi,
                   const geometry::Point& x, const geometry::Point& y);

// nu_q = nu * 1(nu <= q): nondecreasing in q, -> nu pointwise as q grows.
double truncate_nu_q(const KernelSpec& spec, const geometry::Configuration& xi,
                     const geometry::Point& x, const geometry::Point& y,
                     double q);

// Two-regime radial envelope p(r) = scale * r^{-(d+alpha_tail)} for r >= 1
// and scale * r^{-(d+beta_origin)} for r < 1, supported on [r_min, r_max].
struct EnvelopeSpec {
  double alpha_tail = 1.0;
  double beta_origin = 1.0;
  double scale = 1.0;
  double r_min = 1e-3;
  double r_max = 1.0;

  // Defaults that dominate the kernel with C1 = 1 on the domain:
  // alpha_stable -> both exponents alpha, scale 1/constant; stable_like ->
  // tail lo, origin hi, scale 1; truncated_range -> matched power.
  static EnvelopeSpec for_domain(const KernelSpec& kernel,
                                 const geometry::Domain& domain);

  void validate() const;
};

double envelope_value(const EnvelopeSpec& env, double r, int d);

// Total mass of p(|u|) du over the shell r_min <= |u| <= r_max (closed form).
double envelope_mass(const EnvelopeSpec& env, int d);

// CDF / quantile of the radius law with density proportional to
// p(r) r^{d-1} on [r_min, r_max].
double envelope_radius_cdf(const EnvelopeSpec& env, double r, int d);
double envelope_radius_quantile(const EnvelopeSpec& env, double u, int d);

// Displacement proposal: radius by inverse CDF, direction uniform.
geometry::Point sample_displacement(const EnvelopeSpec& env, rng::Rng& gen,
                                    int d);

struct KernelValidationReport {
  struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
  };
  bool ok = false;
  std::vector<Check> checks;
};

// Numeric confirmation on the given box: (a) the jump-size moment
// integral(1 ^ |y-x|^2) nu dy is finite at probe points, (b) nu <= C1 * p on
// a log-spaced grid, (c) stable_like only: 1/alpha and 1/(2-alpha) are
// integrable over the box; the large-jump tail condition holds by range
// truncation on a bounded domain and is reported as such.
KernelValidationReport validate_kernel(const KernelSpec& spec,
                                       const geometry::Domain& domain);

}  // namespace jumpmc::kernels
