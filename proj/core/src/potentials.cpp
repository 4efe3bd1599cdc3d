#include "jumpmc/potentials.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace jumpmc::potentials {

using geometry::Configuration;
using geometry::Point;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::function<void(const std::string&)>& warning_handler() {
  static std::function<void(const std::string&)> h =
      [](const std::string& msg) { std::cerr << "[energy] " << msg << "\n"; };
  return h;
}

// Clamp a raw extended-real energy into (-kEnergyClamp, +inf].
double clamp_low(double e, const char* where) {
  if (e == -kInf || e < -kEnergyClamp) {
    warning_handler()(std::string(where) +
                      ": energy below clamp, pinned to -1e30");
    return -kEnergyClamp;
  }
  return e;
}

}  // namespace

void set_energy_warning_handler(std::function<void(const std::string&)> h) {
  warning_handler() = std::move(h);
}

void PotentialSpec::validate(int dim) const {
  if (dim < 1 || dim > geometry::kMaxDim)
    throw std::invalid_argument("PotentialSpec: bad dimension");
  if (!(scale > 0.0))
    throw std::invalid_argument("PotentialSpec: scale must be positive");
  if (self == SelfKind::table && !self_table)
    throw std::invalid_argument("PotentialSpec: table self potential unset");
  switch (pair) {
    case PairKind::riesz:
      if (!(riesz_a > dim))
        throw std::invalid_argument(
            "PotentialSpec: riesz exponent must exceed the dimension");
      break;
    case PairKind::logarithmic:
      if (!(log_beta >= 0.0))
        throw std::invalid_argument("PotentialSpec: log coupling < 0");
      if (log_sign != 1 && log_sign != -1)
        throw std::invalid_argument("PotentialSpec: log sign must be +-1");
      break;
    case PairKind::hard_core:
      if (!(hard_core_radius > 0.0))
        throw std::invalid_argument("PotentialSpec: hard core radius <= 0");
      break;
    default:
      break;
  }
}

Energy self_potential(const PotentialSpec& spec, const Point& x) {
  switch (spec.self) {
    case SelfKind::zero:
      return 0.0;
    case SelfKind::quadratic: {
      const double r = geometry::norm(x);
      return spec.self_strength * r * r;
    }
    case SelfKind::table:
      return spec.self_table(x);
  }
  return 0.0;
}

Energy pair_potential(const PotentialSpec& spec, const Point& x,
                      const Point& y) {
  if (spec.pair == PairKind::zero) return 0.0;
  const double r = geometry::distance(x, y);
  switch (spec.pair) {
    case PairKind::lennard_jones: {
      if (r == 0.0) return kInf;
      const double r6 = std::pow(r, -6.0);
      return spec.scale * (r6 * r6 - r6);
    }
    case PairKind::riesz:
      if (r == 0.0) return kInf;
      return spec.scale * std::pow(r, -spec.riesz_a);
    case PairKind::logarithmic: {
      if (r == 0.0)
        return spec.log_sign < 0 ? kInf
                                 : clamp_low(-kInf, "pair_potential(log)");
      return spec.scale * spec.log_sign * spec.log_beta * std::log(r);
    }
    case PairKind::hard_core:
      return r < spec.hard_core_radius ? kInf : 0.0;
    default:
      return 0.0;
  }
}

Energy local_energy(const PotentialSpec& spec, const Configuration& xi,
                    const Point& x, int skip) {
  double e = self_potential(spec, x);
  for (int j = 0; j < xi.size(); ++j) {
    if (j == skip) continue;
    const double p = pair_potential(spec, xi.point(j), x);
    if (p == kInf) return kInf;
    e += p;
  }
  return clamp_low(e, "local_energy");
}

Energy local_energy_of(const PotentialSpec& spec, const Configuration& xi,
                       int i) {
  return local_energy(spec, xi, xi.point(i), i);
}

Energy hamiltonian(const PotentialSpec& spec, const Configuration& xi,
                   std::optional<double> sub_half_width) {
  const auto inside = [&](const Point& p) {
    if (!sub_half_width) return true;
    for (int k = 0; k < p.dim; ++k)
      if (std::abs(p[k]) > *sub_half_width) return false;
    return true;
  };
  double h = 0.0;
  for (int i = 0; i < xi.size(); ++i) {
    const Point pi = xi.point(i);
    if (!inside(pi)) continue;
    h += self_potential(spec, pi);
    for (int j = i + 1; j < xi.size(); ++j) {
      const Point pj = xi.point(j);
      if (!inside(pj)) continue;
      const double p = pair_potential(spec, pi, pj);
      if (p == kInf) return kInf;
      h += p;
    }
  }
  return clamp_low(h, "hamiltonian");
}

Energy move_energy_delta(const PotentialSpec& spec, const Configuration& xi,
                         int i, const Point& y) {
  const double after = local_energy(spec, xi, y, i);
  if (after == kInf) return kInf;  // also covers inf - inf: still rejected
  const double before = local_energy_of(spec, xi, i);
  if (before == kInf) return clamp_low(-kInf, "move_energy_delta");
  return clamp_low(after - before, "move_energy_delta");
}

int energy_indicator_lambda_q(const PotentialSpec& spec,
                              const Configuration& xi, double q) {
  if (!(q > 0.0))
    throw std::invalid_argument("energy_indicator_lambda_q: q must be > 0");
  for (int i = 0; i < xi.size(); ++i)
    if (!(std::abs(local_energy_of(spec, xi, i)) <= q)) return 0;
  return 1;
}

int energy_indicator_lambda_q(const PotentialSpec& spec,
                              const Configuration& xi, double q,
                              const Point& probe) {
  if (!(q > 0.0))
    throw std::invalid_argument("energy_indicator_lambda_q: q must be > 0");
  return std::abs(local_energy(spec, xi, probe)) <= q ? 1 : 0;
}

}  // namespace jumpmc::potentials
