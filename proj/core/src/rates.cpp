#include "jumpmc/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace jumpmc::rates {

using geometry::Configuration;
using geometry::Domain;
using geometry::Point;
using kernels::eval_kernel;
using potentials::PairKind;
using potentials::SelfKind;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logsumexp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

bool in_range_mask(const RateSpec& spec, const Point& x, const Point& y) {
  const double r = geometry::distance(x, y);
  if (r < spec.envelope.r_min || r > spec.envelope.r_max) return false;
  return spec.domain.contains(y);
}

double ginibre_log_product(const RateSpec& spec, const Configuration& xi,
                           int i, const Point& y) {
  const Point x = xi.point(i);
  double log_prod = 0.0;
  for (int j = 0; j < xi.size(); ++j) {
    if (j == i) continue;
    const Point p = xi.point(j);
    if (geometry::norm(p) >= spec.ginibre_radius) continue;
    const double num = geometry::distance(y, p);
    const double den = geometry::distance(x, p);
    if (num == 0.0 || den == 0.0)
      throw std::invalid_argument(
          "ginibre_truncated_rate: coincident particle");
    log_prod += 2.0 * (std::log(num) - std::log(den));
  }
  return log_prod;
}

}  // namespace

RateSpec RateSpec::build(const Domain& domain,
                         const kernels::KernelSpec& kernel,
                         const potentials::PotentialSpec& potential,
                         RateMode mode) {
  RateSpec spec;
  spec.domain = domain;
  spec.kernel = kernel;
  spec.potential = potential;
  spec.mode = mode;
  spec.envelope = kernels::EnvelopeSpec::for_domain(kernel, domain);
  if (mode == RateMode::ginibre_truncated)
    spec.ginibre_radius = domain.half_width;
  spec.validate();
  return spec;
}

void RateSpec::validate() const {
  domain.validate();
  kernel.validate(domain.dim);
  potential.validate(domain.dim);
  envelope.validate();
  if (mode == RateMode::free &&
      (potential.pair != PairKind::zero || potential.self != SelfKind::zero))
    throw std::invalid_argument(
        "RateSpec: free mode requires zero self and pair potentials");
  if (mode == RateMode::ginibre_truncated) {
    if (domain.dim != 2)
      throw std::invalid_argument("RateSpec: ginibre mode requires d = 2");
    if (!(ginibre_radius > 0.0))
      throw std::invalid_argument("RateSpec: ginibre radius must be > 0");
  }
}

double jump_rate(const RateSpec& spec, const Configuration& xi, int i,
                 const Point& y) {
  const Point x = xi.point(i);
  if (geometry::coords_equal(x, y, 0.0))
    throw std::invalid_argument("jump_rate: y coincides with x_i");
  if (!in_range_mask(spec, x, y)) return 0.0;
  const double nu_fwd = eval_kernel(spec.kernel, xi, x, y);
  switch (spec.mode) {
    case RateMode::free:
      return 2.0 * nu_fwd;
    case RateMode::gibbs_closed_form: {
      const Configuration moved = geometry::apply_move(xi, i, y);
      const double nu_bwd = eval_kernel(spec.kernel, moved, y, x);
      const double delta =
          potentials::move_energy_delta(spec.potential, xi, i, y);
      if (delta == kInf) return nu_fwd;  // reversed term vanishes
      return nu_fwd + nu_bwd * std::exp(-delta);
    }
    case RateMode::ginibre_truncated:
      return ginibre_truncated_rate(spec, xi, i, y);
  }
  return 0.0;
}

double ginibre_truncated_rate(const RateSpec& spec, const Configuration& xi,
                              int i, const Point& y) {
  if (spec.domain.dim != 2)
    throw std::invalid_argument("ginibre_truncated_rate: requires d = 2");
  const Point x = xi.point(i);
  if (geometry::coords_equal(x, y, 0.0))
    throw std::invalid_argument("ginibre_truncated_rate: y coincides with x");
  if (!in_range_mask(spec, x, y)) return 0.0;
  const double nu_fwd = eval_kernel(spec.kernel, xi, x, y);
  const Configuration moved = geometry::apply_move(xi, i, y);
  const double nu_bwd = eval_kernel(spec.kernel, moved, y, x);
  return nu_fwd + nu_bwd * std::exp(ginibre_log_product(spec, xi, i, y));
}

std::optional<double> detailed_balance_residual(const RateSpec& spec,
                                                const Configuration& xi, int i,
                                                const Point& y) {
  const Point x = xi.point(i);
  const Configuration moved = geometry::apply_move(xi, i, y);
  const double h_before = potentials::hamiltonian(spec.potential, xi);
  const double h_after = potentials::hamiltonian(spec.potential, moved);
  if (h_before == kInf || h_after == kInf) return std::nullopt;
  if (!in_range_mask(spec, x, y)) return 0.0;  // both rates masked to zero

  const double log_nu_fwd = std::log(eval_kernel(spec.kernel, xi, x, y));
  const double log_nu_bwd = std::log(eval_kernel(spec.kernel, moved, y, x));

  double log_c_fwd, log_c_bwd;
  switch (spec.mode) {
    case RateMode::free:
      log_c_fwd = std::log(2.0) + log_nu_fwd;
      log_c_bwd = std::log(2.0) + log_nu_bwd;
      break;
    case RateMode::gibbs_closed_form: {
      const double delta_fwd =
          potentials::move_energy_delta(spec.potential, xi, i, y);
      const double delta_bwd =
          potentials::move_energy_delta(spec.potential, moved, i, x);
      log_c_fwd = logsumexp(log_nu_fwd, log_nu_bwd - delta_fwd);
      log_c_bwd = logsumexp(log_nu_bwd, log_nu_fwd - delta_bwd);
      break;
    }
    case RateMode::ginibre_truncated: {
      const double lp_fwd = ginibre_log_product(spec, xi, i, y);
      const double lp_bwd = ginibre_log_product(spec, moved, i, x);
      log_c_fwd = logsumexp(log_nu_fwd, log_nu_bwd + lp_fwd);
      log_c_bwd = logsumexp(log_nu_bwd, log_nu_fwd + lp_bwd);
      break;
    }
  }
  const double log_flux_fwd = log_c_fwd - h_before;
  const double log_flux_bwd = log_c_bwd - h_after;
  return 1.0 - std::exp(-std::abs(log_flux_fwd - log_flux_bwd));
}

double glauber_birth_rate(const potentials::PotentialSpec& potential,
                          const Configuration& xi, const Point& y, double z) {
  if (!(z > 0.0))
    throw std::invalid_argument("glauber_birth_rate: activity must be > 0");
  const double e = potentials::local_energy(potential, xi, y);
  if (e == kInf) return 0.0;
  return z * std::exp(-e);
}

double glauber_death_rate(const Configuration& xi, int i) {
  if (i < 0 || i >= xi.size())
    throw std::out_of_range("glauber_death_rate: index out of range");
  return 1.0;
}

}  // namespace jumpmc::rates
