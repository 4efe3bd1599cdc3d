#include "jumpmc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "jumpmc/kernels.hpp"
#include "jumpmc/potentials.hpp"

namespace jumpmc::dynamics {

using geometry::Configuration;
using geometry::Domain;
using geometry::Point;
using kernels::envelope_mass;
using kernels::envelope_value;
using kernels::sample_displacement;
using rates::jump_rate;
using rates::RateSpec;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Acceptance ratios may exceed 1 by pure roundoff; anything beyond this
// slack is a genuinely mis-sized envelope.
constexpr double kEnvelopeSlack = 1.0 + 1e-9;

std::string witness(const char* who, double c, double bound, const Point& x,
                    const Point& y) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%s: rate %.6g exceeds envelope %.6g at x=(%.6g,%.6g,%.6g) "
                "y=(%.6g,%.6g,%.6g)",
                who, c, bound, x.x[0], x.x[1], x.x[2], y.x[0], y.x[1],
                y.x[2]);
  return buf;
}

void require_reject_boundary(const Domain& domain, const char* who) {
  if (domain.boundary != geometry::BoundaryMode::reject)
    throw std::invalid_argument(std::string(who) +
                                ": only the rejecting boundary is supported");
}

void snapshot(Trajectory& traj, double t, const Configuration& xi) {
  traj.snapshots.emplace_back(t, xi);
}

// One thinning decision. The envelope contract is on the kernel pair: if
// nu(x;y) + nu(y;x) outgrows gamma * chat the envelope is mis-sized and the
// run aborts. The detailed-balance factor e^{-delta} of an attractive
// potential is unbounded, so c itself may overshoot near deep wells; there
// the acceptance saturates at 1 and the event is counted in traj.capped.
bool accept_move(const RateSpec& rate, const SimParams& params,
                 const Configuration& xi, int i, const Point& x,
                 const Point& y, double r, double accept_u, const char* who,
                 Trajectory& traj) {
  const double c = jump_rate(rate, xi, i, y);
  if (c <= 0.0) return false;
  const double bound = params.gamma * 2.0 * rate.kernel.C1 *
                       envelope_value(rate.envelope, r, rate.domain.dim);
  const double ratio = c / bound;
  if (ratio > traj.max_ratio) traj.max_ratio = ratio;
  if (ratio > kEnvelopeSlack) {
    const Configuration moved = geometry::apply_move(xi, i, y);
    const double base = kernels::eval_kernel(rate.kernel, xi, x, y) +
                        kernels::eval_kernel(rate.kernel, moved, y, x);
    if (base > bound * kEnvelopeSlack)
      throw EnvelopeViolation(witness(who, base, bound, x, y));
    ++traj.capped;
  }
  return accept_u < std::min(1.0, ratio);
}

}  // namespace

void SimParams::validate() const {
  if (steps < 0) throw std::invalid_argument("SimParams: negative steps");
  if (horizon < 0.0)
    throw std::invalid_argument("SimParams: negative horizon");
  if (!(gamma >= 1.0))
    throw std::invalid_argument("SimParams: gamma must be >= 1");
  if (stride < 1) throw std::invalid_argument("SimParams: stride must be >= 1");
  if (!(time_stride >= 0.0) || !std::isfinite(time_stride))
    throw std::invalid_argument("SimParams: time_stride must be >= 0");
  if (!(activity > 0.0))
    throw std::invalid_argument("SimParams: activity must be > 0");
}

Trajectory run_jump_chain(const RateSpec& rate, const SimParams& params,
                          const Configuration& xi0) {
  rate.validate();
  params.validate();
  require_reject_boundary(rate.domain, "run_jump_chain");
  if (potentials::hamiltonian(rate.potential, xi0) == kInf)
    throw std::invalid_argument("run_jump_chain: infinite initial energy");

  const int d = rate.domain.dim;
  rng::Rng gen(params.seed);
  Configuration xi = xi0;
  Trajectory traj;
  snapshot(traj, 0.0, xi);

  for (long step = 1; step <= params.steps; ++step) {
    if (xi.size() == 0) break;  // absorbing: no particle can move
    const int i = static_cast<int>(gen.integer(xi.size()));
    const Point x = xi.point(i);
    const Point u = sample_displacement(rate.envelope, gen, d);
    Point y;
    y.dim = d;
    for (int k = 0; k < d; ++k) y.x[k] = x[k] + u[k];
    const double accept_u = gen.uniform();

    ++traj.proposals;
    bool accepted = false;
    if (rate.domain.contains(y))
      accepted = accept_move(rate, params, xi, i, x, y, geometry::norm(u),
                             accept_u, "run_jump_chain", traj);
    if (accepted) {
      xi = geometry::apply_move(xi, i, y);
      ++traj.accepted;
    }
    if (params.record_events)
      traj.events.push_back({static_cast<double>(step), EventKind::move, i, x,
                             y, accepted});
    if (step % params.stride == 0 || step == params.steps)
      snapshot(traj, static_cast<double>(step), xi);
  }
  if (traj.snapshots.back().first < static_cast<double>(params.steps))
    snapshot(traj, static_cast<double>(params.steps), xi);
  return traj;
}

Trajectory run_thinning(const RateSpec& rate, const SimParams& params,
                        const Configuration& xi0, double horizon) {
  rate.validate();
  params.validate();
  require_reject_boundary(rate.domain, "run_thinning");
  if (horizon < 0.0)
    throw std::invalid_argument("run_thinning: negative horizon");
  if (potentials::hamiltonian(rate.potential, xi0) == kInf)
    throw std::invalid_argument("run_thinning: infinite initial energy");

  const int d = rate.domain.dim;
  // Per-particle envelope intensity: integral of gamma * 2 C1 p(|u|) du.
  const double per_particle = params.gamma * 2.0 * rate.kernel.C1 *
                              envelope_mass(rate.envelope, d);
  rng::Rng gen(params.seed);
  Configuration xi = xi0;
  Trajectory traj;
  snapshot(traj, 0.0, xi);

  double t = 0.0;
  long n_events = 0;
  double next_grid = params.time_stride;
  while (xi.size() > 0) {
    const double total = static_cast<double>(xi.size()) * per_particle;
    t += gen.exponential(total);
    // The state is held on (previous t, t); grid times in there see it.
    while (params.time_stride > 0.0 && next_grid <= std::min(t, horizon)) {
      snapshot(traj, next_grid, xi);
      next_grid += params.time_stride;
    }
    if (t > horizon) break;
    const int i = static_cast<int>(gen.integer(xi.size()));
    const Point x = xi.point(i);
    const Point u = sample_displacement(rate.envelope, gen, d);
    Point y;
    y.dim = d;
    for (int k = 0; k < d; ++k) y.x[k] = x[k] + u[k];
    const double accept_u = gen.uniform();

    ++traj.proposals;
    ++n_events;
    bool accepted = false;
    if (rate.domain.contains(y))
      accepted = accept_move(rate, params, xi, i, x, y, geometry::norm(u),
                             accept_u, "run_thinning", traj);
    if (accepted) {
      xi = geometry::apply_move(xi, i, y);
      ++traj.accepted;
    }
    if (params.record_events)
      traj.events.push_back({t, EventKind::move, i, x, y, accepted});
    if (params.time_stride <= 0.0 && n_events % params.stride == 0)
      snapshot(traj, t, xi);
  }
  // An absorbing exit leaves the rest of the grid showing the empty state.
  while (params.time_stride > 0.0 && next_grid <= horizon) {
    snapshot(traj, next_grid, xi);
    next_grid += params.time_stride;
  }
  if (horizon > 0.0) snapshot(traj, horizon, xi);
  return traj;
}

Trajectory run_glauber(const Domain& domain,
                       const potentials::PotentialSpec& potential,
                       const SimParams& params, const Configuration& xi0,
                       double horizon) {
  domain.validate();
  potential.validate(domain.dim);
  params.validate();
  require_reject_boundary(domain, "run_glauber");
  if (horizon < 0.0)
    throw std::invalid_argument("run_glauber: negative horizon");
  if (xi0.dim() != domain.dim)
    throw std::invalid_argument("run_glauber: dimension mismatch");

  const double z = params.activity;
  const double birth_envelope =
      z * domain.volume() * std::max(1.0, std::exp(-params.energy_floor));
  rng::Rng gen(params.seed);
  Configuration xi = xi0;
  Trajectory traj;
  snapshot(traj, 0.0, xi);

  double t = 0.0;
  long n_events = 0;
  double next_grid = params.time_stride;
  for (;;) {
    const double total = birth_envelope + static_cast<double>(xi.size());
    t += gen.exponential(total);
    while (params.time_stride > 0.0 && next_grid <= std::min(t, horizon)) {
      snapshot(traj, next_grid, xi);
      next_grid += params.time_stride;
    }
    if (t > horizon) break;
    ++traj.proposals;
    ++n_events;
    if (gen.uniform() * total < birth_envelope) {
      const Point y = gen.uniform_in_box(domain);
      const double b = rates::glauber_birth_rate(potential, xi, y, z);
      if (b > birth_envelope / domain.volume() * kEnvelopeSlack)
        throw EnvelopeViolation(
            witness("run_glauber", b, birth_envelope / domain.volume(), y, y));
      const bool accepted =
          gen.uniform() < b * domain.volume() / birth_envelope;
      int label = -1;
      if (accepted) {
        xi = geometry::add_point(xi, y);
        label = xi.size() - 1;
        ++traj.accepted;
      }
      if (params.record_events)
        traj.events.push_back({t, EventKind::birth, label, y, y, accepted});
    } else {
      const int i = static_cast<int>(gen.integer(xi.size()));
      const Point x = xi.point(i);
      xi = geometry::remove_point(xi, i);
      ++traj.accepted;
      if (params.record_events)
        traj.events.push_back({t, EventKind::death, i, x, x, true});
    }
    if (params.time_stride <= 0.0 && n_events % params.stride == 0)
      snapshot(traj, t, xi);
  }
  if (horizon > 0.0) snapshot(traj, horizon, xi);
  return traj;
}

double generator_apply(const RateSpec& rate,
                       const std::function<double(const Configuration&)>& f,
                       const Configuration& xi,
                       const quadrature::Options& opt) {
  rate.validate();
  const double f_xi = f(xi);
  double sum = 0.0;
  for (int i = 0; i < xi.size(); ++i) {
    const Point x = xi.point(i);
    sum += quadrature::integrate_box_shell(
        rate.domain, x, rate.envelope.r_min, rate.envelope.r_max,
        [&](const Point& y) {
          const double c = jump_rate(rate, xi, i, y);
          if (c == 0.0) return 0.0;
          return c * (f(geometry::apply_move(xi, i, y)) - f_xi);
        },
        opt);
  }
  return sum;
}

Configuration sample_poisson_configuration(const Domain& domain,
                                           double intensity, rng::Rng& gen) {
  domain.validate();
  if (!(intensity >= 0.0))
    throw std::invalid_argument("sample_poisson_configuration: intensity < 0");
  const long n = gen.poisson(intensity * domain.volume());
  Configuration xi(domain.dim);
  for (long k = 0; k < n; ++k)
    xi = geometry::add_point(xi, gen.uniform_in_box(domain));
  return xi;
}

}  // namespace jumpmc::dynamics
