#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jumpmc/geometry.hpp"
#include "jumpmc/quadrature.hpp"
#include "jumpmc/rates.hpp"
#include "jumpmc/rng.hpp"

namespace jumpmc::dynamics {

struct SimParams {
  long steps = 0;            // discrete jump chain
  double horizon = 0.0;      // continuous-time chains
  std::uint64_t seed = 1;
  double gamma = 1.0;        // envelope inflation factor, >= 1
  long stride = 1;           // snapshot every stride-th step/event
  // Continuous-time runs: when > 0, snapshot the held state at times
  // k * time_stride instead of every stride-th event. Event sampling sees
  // the embedded chain, whose law is size-biased; the time grid sees the
  // occupation law that stationarity statements are about.
  double time_stride = 0.0;
  bool record_events = true; // long runs can switch the event log off
  double activity = 1.0;     // Glauber birth activity z > 0
  double energy_floor = 0.0; // Glauber: local energies assumed >= this

  void validate() const;
};

enum class EventKind { move, birth, death };

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::move;
  int label = 0;        // particle index at event time
  geometry::Point from; // birth: equals to; death: the removed point
  geometry::Point to;
  bool accepted = false;
};

struct Trajectory {
  std::vector<std::pair<double, geometry::Configuration>> snapshots;
  std::vector<Event> events;
  long proposals = 0;
  long accepted = 0;
  // Proposals whose rate exceeded gamma * chat: the acceptance saturated at 1.
  // The detailed-balance factor e^{-delta} is unbounded near deep wells of an
  // attractive potential, so these are counted instead of hidden; a nonzero
  // count means the law carries a bias of that order and gamma was too small.
  long capped = 0;
  double max_ratio = 0.0;  // max c / (gamma * chat) seen over all proposals
};

// Thrown when the kernel pair nu(x;y) + nu(y;x) itself exceeds the thinning
// envelope: the envelope is mis-sized and every run with it would be biased,
// so the simulation stops loudly with the witness state.
struct EnvelopeViolation : std::runtime_error {
  explicit EnvelopeViolation(const std::string& what)
      : std::runtime_error(what) {}
};

// Discrete-time chain: per step pick a particle uniformly, propose a
// displacement from the envelope law, accept with min(1, c / (gamma * chat))
// where chat = 2 C1 p(|u|). Proposals leaving the box are rejected (the
// simulators support the rejecting boundary only). Deterministic given the
// seed. Saturated acceptances are tallied in Trajectory::capped.
Trajectory run_jump_chain(const rates::RateSpec& rate, const SimParams& params,
                          const geometry::Configuration& xi0);

// Continuous-time thinning of the proposal Poisson measure: exponential
// clock at rate n * gamma * 2 C1 * envelope mass, uniform particle pick,
// envelope displacement, acceptance min(1, c / (gamma * chat)). Both accepted
// and rejected events are recorded (subject to record_events).
Trajectory run_thinning(const rates::RateSpec& rate, const SimParams& params,
                        const geometry::Configuration& xi0, double horizon);

// Birth-death chain: births proposed uniformly on the box at total rate
// z |box| max(1, e^{-energy_floor}) and thinned by e^{-local energy}; deaths
// at unit rate per particle. Local energy below energy_floor aborts.
Trajectory run_glauber(const geometry::Domain& domain,
                       const potentials::PotentialSpec& potential,
                       const SimParams& params,
                       const geometry::Configuration& xi0, double horizon);

// L0 f(xi) = sum_i integral over the truncated jump range of
// c(xi, x_i; y) (f(xi^{x_i y}) - f(xi)) dy, by adaptive quadrature.
double generator_apply(
    const rates::RateSpec& rate,
    const std::function<double(const geometry::Configuration&)>& f,
    const geometry::Configuration& xi, const quadrature::Options& opt = {});

// Poisson(intensity) sample on the box: count then i.i.d. uniform points.
geometry::Configuration sample_poisson_configuration(
    const geometry::Domain& domain, double intensity, rng::Rng& gen);

}  // namespace jumpmc::dynamics
