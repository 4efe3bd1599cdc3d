#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "jumpmc/dynamics.hpp"
#include "jumpmc/geometry.hpp"
#include "jumpmc/kernels.hpp"
#include "jumpmc/potentials.hpp"
#include "jumpmc/rates.hpp"
#include "jumpmc/rng.hpp"
#include "jumpmc/stats.hpp"

using namespace jumpmc::dynamics;
namespace geometry = jumpmc::geometry;
namespace kernels = jumpmc::kernels;
namespace potentials = jumpmc::potentials;
namespace rates = jumpmc::rates;
namespace stats = jumpmc::stats;
using geometry::Configuration;
using geometry::make_point;

namespace {

geometry::Domain box(int d, double half) {
  geometry::Domain dom;
  dom.dim = d;
  dom.half_width = half;
  return dom;
}

rates::RateSpec free_rate(int d, double half) {
  kernels::KernelSpec k;
  k.alpha = 1.0;
  return rates::RateSpec::build(box(d, half), k, {}, rates::RateMode::free);
}

}  // namespace

TEST_CASE("free chain with the exact envelope accepts every in-box proposal") {
  // Unit alpha-stable kernel: c = 2 nu equals the thinning bound 2 C1 p
  // pointwise, so acceptance is decided by the box alone.
  const auto rate = free_rate(1, 2.0);
  SimParams params;
  params.steps = 2000;
  params.seed = 3;
  const Configuration xi0 = Configuration::from_points(1, {make_point({0.0})});
  const Trajectory traj = run_jump_chain(rate, params, xi0);
  CHECK(traj.proposals == 2000);
  long in_box = 0;
  for (const auto& ev : traj.events) {
    if (rate.domain.contains(ev.to)) {
      ++in_box;
      CHECK(ev.accepted);
    } else {
      CHECK(!ev.accepted);
    }
  }
  CHECK(traj.accepted == in_box);
  CHECK(in_box > 0);
  CHECK(in_box < 2000);
}

TEST_CASE("gamma inflation halves the acceptance probability") {
  const auto rate = free_rate(1, 2.0);
  SimParams params;
  params.steps = 20000;
  params.seed = 5;
  params.gamma = 2.0;
  const Configuration xi0 = Configuration::from_points(1, {make_point({0.0})});
  const Trajectory traj = run_jump_chain(rate, params, xi0);
  long in_box = 0, accepted_in_box = 0;
  for (const auto& ev : traj.events) {
    if (rate.domain.contains(ev.to)) {
      ++in_box;
      accepted_in_box += ev.accepted ? 1 : 0;
    }
  }
  const double phat = static_cast<double>(accepted_in_box) / in_box;
  const double sd = std::sqrt(0.25 / in_box);
  CHECK(std::abs(phat - 0.5) < 4.0 * sd);
}

TEST_CASE("snapshots follow the stride and close at the final step") {
  const auto rate = free_rate(1, 2.0);
  SimParams params;
  params.steps = 10;
  params.stride = 3;
  const Configuration xi0 = Configuration::from_points(1, {make_point({0.0})});
  const Trajectory traj = run_jump_chain(rate, params, xi0);
  std::vector<double> times;
  for (const auto& s : traj.snapshots) times.push_back(s.first);
  CHECK(times == std::vector<double>{0.0, 3.0, 6.0, 9.0, 10.0});

  SimParams zero;
  zero.steps = 0;
  const Trajectory still = run_jump_chain(rate, zero, xi0);
  REQUIRE(still.snapshots.size() == 1);
  CHECK(still.snapshots[0].first == 0.0);
  CHECK(geometry::multiset_equal(still.snapshots[0].second, xi0));
}

TEST_CASE("identical seeds reproduce the trajectory exactly") {
  auto pot = potentials::PotentialSpec{};
  pot.pair = potentials::PairKind::lennard_jones;
  kernels::KernelSpec k;
  k.alpha = 1.0;
  const auto rate = rates::RateSpec::build(box(1, 2.0), k, pot);
  SimParams params;
  params.steps = 500;
  params.seed = 11;
  Configuration xi0(1);
  xi0.add(make_point({-1.0}));
  xi0.add(make_point({0.0}));
  xi0.add(make_point({1.0}));
  const Trajectory a = run_jump_chain(rate, params, xi0);
  const Trajectory b = run_jump_chain(rate, params, xi0);
  REQUIRE(a.events.size() == b.events.size());
  for (std::size_t e = 0; e < a.events.size(); ++e) {
    CHECK(a.events[e].label == b.events[e].label);
    CHECK(geometry::coords_equal(a.events[e].to, b.events[e].to));
    CHECK(a.events[e].accepted == b.events[e].accepted);
  }
  params.seed = 12;
  const Trajectory c = run_jump_chain(rate, params, xi0);
  CHECK(a.accepted != c.accepted);
}

TEST_CASE("a mis-sized envelope stops the run with a witness") {
  auto rate = free_rate(1, 2.0);
  rate.envelope.scale /= 16.0;  // bound now sits far below the true rate
  SimParams params;
  params.steps = 1000;
  const Configuration xi0 = Configuration::from_points(1, {make_point({0.0})});
  CHECK_THROWS_AS(run_jump_chain(rate, params, xi0), EnvelopeViolation);
}

TEST_CASE("a deep potential well saturates acceptance instead of aborting") {
  // A compressed pair relaxing downhill has e^{-delta} beyond any fixed
  // gamma. The kernel envelope still dominates the kernel pair, so the run
  // continues with the acceptance capped at 1 and reports how often.
  kernels::KernelSpec k;
  k.alpha = 1.0;
  potentials::PotentialSpec pot;
  pot.pair = potentials::PairKind::lennard_jones;
  const auto rate = rates::RateSpec::build(
      box(1, 2.0), k, pot, rates::RateMode::gibbs_closed_form);
  const Configuration xi0 = Configuration::from_points(
      1, {make_point({-0.35}), make_point({0.35})});  // r = 0.7: LJ = 63.7
  SimParams params;
  params.steps = 4000;
  params.seed = 9;
  const Trajectory traj = run_jump_chain(rate, params, xi0);
  CHECK(traj.capped > 0);
  CHECK(traj.max_ratio > 1.0);
  CHECK(traj.accepted > 0);
}

TEST_CASE("thinning proposal count follows the envelope clock") {
  // The proposal stream is Poisson(n gamma 2 C1 mass) regardless of the
  // acceptance layer, so its mean count over [0, T] is exact.
  const auto rate = free_rate(1, 2.0);
  const double per_particle =
      2.0 * rate.kernel.C1 * kernels::envelope_mass(rate.envelope, 1);
  const double horizon = 3.0;
  SimParams params;
  params.record_events = false;
  stats::RunningStat count;
  const Configuration xi0 = Configuration::from_points(1, {make_point({0.0})});
  for (int rep = 0; rep < 400; ++rep) {
    params.seed = 1000 + rep;
    const Trajectory traj = run_thinning(rate, params, xi0, horizon);
    count.add(static_cast<double>(traj.proposals));
  }
  const double expected = per_particle * horizon;
  CHECK(std::abs(count.mean - expected) < 4.0 * count.stderr_mean());
  // Poisson: variance matches the mean.
  CHECK(count.variance() == doctest::Approx(expected).epsilon(0.2));
}

TEST_CASE("thinning and the discrete chain share the acceptance rule") {
  const auto rate = free_rate(1, 2.0);
  SimParams params;
  params.seed = 21;
  const Configuration xi0 = Configuration::from_points(1, {make_point({0.3})});
  const Trajectory traj = run_thinning(rate, params, xi0, 50.0);
  for (const auto& ev : traj.events)
    CHECK(ev.accepted == rate.domain.contains(ev.to));
  CHECK(traj.snapshots.back().first == doctest::Approx(50.0));
}

TEST_CASE("glauber chain with zero potential is an M/M/infinity queue") {
  const auto dom = box(1, 1.0);
  SimParams params;
  params.activity = 1.5;
  params.seed = 31;
  // Sampling at events would see the size-biased embedded law; the time
  // grid sees the Poisson occupation law.
  params.time_stride = 1.0;
  params.record_events = false;
  const double mean_target = params.activity * dom.volume();  // 3
  const Trajectory traj =
      run_glauber(dom, {}, params, Configuration(1), 4000.0);
  stats::RunningStat counts;
  // Skip the burn-in quarter; grid points are one relaxation time apart.
  for (std::size_t s = traj.snapshots.size() / 4; s < traj.snapshots.size();
       ++s)
    counts.add(static_cast<double>(traj.snapshots[s].second.size()));
  CHECK(counts.mean == doctest::Approx(mean_target).epsilon(0.1));
  // Poisson stationary law: index of dispersion near one.
  CHECK(counts.variance() / counts.mean ==
        doctest::Approx(1.0).epsilon(0.25));
}

TEST_CASE("glauber birth thinning respects the hard core") {
  potentials::PotentialSpec pot;
  pot.pair = potentials::PairKind::hard_core;
  pot.hard_core_radius = 0.3;
  const auto dom = box(1, 1.0);
  SimParams params;
  params.activity = 2.0;
  params.seed = 41;
  const Trajectory traj = run_glauber(dom, pot, params, Configuration(1), 500.0);
  for (const auto& s : traj.snapshots) {
    const auto& xi = s.second;
    for (int i = 0; i < xi.size(); ++i)
      for (int j = i + 1; j < xi.size(); ++j)
        CHECK(geometry::distance(xi.point(i), xi.point(j)) >=
              pot.hard_core_radius);
  }
  // Rejected births are labeled -1 and never touch the configuration.
  bool saw_rejected_birth = false;
  for (const auto& ev : traj.events)
    if (ev.kind == EventKind::birth && !ev.accepted) {
      saw_rejected_birth = true;
      CHECK(ev.label == -1);
    }
  CHECK(saw_rejected_birth);
}

TEST_CASE("glauber aborts when a local energy undercuts the floor") {
  potentials::PotentialSpec pot;
  pot.self = potentials::SelfKind::quadratic;
  pot.self_strength = -0.5;  // negative energies, below the default floor 0
  const auto dom = box(1, 1.0);
  SimParams params;
  params.activity = 1.0;
  params.seed = 51;
  CHECK_THROWS_AS(run_glauber(dom, pot, params, Configuration(1), 100.0),
                  EnvelopeViolation);
  // Declaring the floor makes the same run legal.
  params.energy_floor = -0.5;
  const Trajectory traj =
      run_glauber(dom, pot, params, Configuration(1), 100.0);
  CHECK(traj.proposals > 0);
}

TEST_CASE("generator on hand-integrable functions") {
  const auto rate = free_rate(1, 1.0);
  const Configuration xi = Configuration::from_points(1, {make_point({0.3})});

  // Constants are in the kernel of the generator.
  CHECK(generator_apply(rate, [](const Configuration&) { return 7.0; }, xi) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  // Moves preserve the particle count.
  CHECK(generator_apply(
            rate,
            [](const Configuration& c) { return static_cast<double>(c.size()); },
            xi) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));

  // f = sum of first coordinates, one free particle at x, unit alpha = 1
  // kernel: L f = 2 integral (y-x)/|y-x|^2 dy over the box, and the
  // small-jump cutoff cancels by symmetry: 2 log((L-x)/(L+x)).
  const double lhs = generator_apply(
      rate,
      [](const Configuration& c) {
        double s = 0.0;
        for (int i = 0; i < c.size(); ++i) s += c.point(i)[0];
        return s;
      },
      xi);
  CHECK(lhs == doctest::Approx(2.0 * std::log(0.7 / 1.3)).epsilon(1e-6));
}

TEST_CASE("poisson configuration sampler hits the target intensity") {
  const auto dom = box(2, 1.5);
  jumpmc::rng::Rng gen(61);
  stats::RunningStat n;
  for (int rep = 0; rep < 2000; ++rep) {
    const Configuration xi = sample_poisson_configuration(dom, 0.7, gen);
    for (int i = 0; i < xi.size(); ++i) REQUIRE(dom.contains(xi.point(i)));
    n.add(static_cast<double>(xi.size()));
  }
  const double target = 0.7 * dom.volume();
  CHECK(std::abs(n.mean - target) < 4.0 * n.stderr_mean());
}
