#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "jumpmc/geometry.hpp"
#include "jumpmc/kernels.hpp"
#include "jumpmc/potentials.hpp"
#include "jumpmc/rates.hpp"
#include "jumpmc/rng.hpp"

using namespace jumpmc::rates;
namespace geometry = jumpmc::geometry;
namespace kernels = jumpmc::kernels;
namespace potentials = jumpmc::potentials;
using geometry::Configuration;
using geometry::make_point;

namespace {

geometry::Domain box(int d, double half) {
  geometry::Domain dom;
  dom.dim = d;
  dom.half_width = half;
  return dom;
}

kernels::KernelSpec unit_stable(double alpha) {
  kernels::KernelSpec k;
  k.kind = kernels::KernelKind::alpha_stable;
  k.alpha = alpha;
  return k;
}

potentials::PotentialSpec pair(potentials::PairKind kind) {
  potentials::PotentialSpec p;
  p.pair = kind;
  return p;
}

}  // namespace

TEST_CASE("free mode doubles the kernel and rejects interactions") {
  const auto spec =
      RateSpec::build(box(1, 2.0), unit_stable(1.0), {}, RateMode::free);
  const Configuration xi =
      Configuration::from_points(1, {make_point({0.0}), make_point({1.0})});
  // |x_0 - y| = 0.5: nu = 0.5^{-2} = 4, c = 2 nu = 8.
  CHECK(jump_rate(spec, xi, 0, make_point({0.5})) == doctest::Approx(8.0));

  auto bad = spec;
  bad.potential = pair(potentials::PairKind::lennard_jones);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("jump range mask and box confinement") {
  const auto spec =
      RateSpec::build(box(1, 2.0), unit_stable(1.0), {}, RateMode::free);
  const Configuration xi = Configuration::from_points(1, {make_point({0.0})});
  // Outside the box: zero.
  CHECK(jump_rate(spec, xi, 0, make_point({2.5})) == 0.0);
  // Below the small-jump cutoff (default 1e-3 * L = 2e-3): zero.
  CHECK(jump_rate(spec, xi, 0, make_point({1e-4})) == 0.0);
  // Coincident target is a caller error, not a zero rate.
  CHECK_THROWS_AS(jump_rate(spec, xi, 0, make_point({0.0})),
                  std::invalid_argument);
}

TEST_CASE("gibbs rate composes kernel and energy difference") {
  auto pot = pair(potentials::PairKind::riesz);
  pot.riesz_a = 2.0;
  const auto spec = RateSpec::build(box(1, 4.0), unit_stable(1.0), pot);
  const Configuration xi =
      Configuration::from_points(1, {make_point({0.0}), make_point({1.0})});
  const geometry::Point y = make_point({2.0});
  // Move particle 0 from 0 to 2: r = 2 so nu = 1/4 both ways; the energy
  // goes from 1 to 1 (distance to the spectator is 1 either side).
  const double delta = potentials::move_energy_delta(pot, xi, 0, y);
  CHECK(delta == doctest::Approx(0.0));
  CHECK(jump_rate(spec, xi, 0, y) == doctest::Approx(0.5));

  // Asymmetric move: 0 -> 0.5 halves the spectator distance, delta = 3.
  const geometry::Point y2 = make_point({0.5});
  const double d2 = potentials::move_energy_delta(pot, xi, 0, y2);
  CHECK(d2 == doctest::Approx(3.0));
  const double nu2 = 4.0;  // r = 0.5
  CHECK(jump_rate(spec, xi, 0, y2) ==
        doctest::Approx(nu2 + nu2 * std::exp(-3.0)));
}

TEST_CASE("forbidden targets keep only the forward term") {
  auto pot = pair(potentials::PairKind::hard_core);
  pot.hard_core_radius = 0.5;
  const auto spec = RateSpec::build(box(1, 4.0), unit_stable(1.0), pot);
  const Configuration xi =
      Configuration::from_points(1, {make_point({0.0}), make_point({2.0})});
  // Target overlaps the spectator: delta = +inf, c = nu only.
  const geometry::Point y = make_point({1.8});
  CHECK(jump_rate(spec, xi, 0, y) ==
        doctest::Approx(std::pow(1.8, -2.0)));
}

TEST_CASE("detailed balance residual vanishes across potentials") {
  jumpmc::rng::Rng gen(101);
  const auto dom = box(1, 3.0);

  std::vector<potentials::PotentialSpec> pots;
  pots.push_back({});
  pots.push_back(pair(potentials::PairKind::lennard_jones));
  auto r2 = pair(potentials::PairKind::riesz);
  r2.riesz_a = 2.0;
  pots.push_back(r2);
  auto lg = pair(potentials::PairKind::logarithmic);
  lg.log_beta = 2.0;
  pots.push_back(lg);

  for (const auto& pot : pots) {
    const auto spec = RateSpec::build(dom, unit_stable(1.0), pot);
    int checked = 0;
    while (checked < 100) {
      Configuration xi(1);
      const int n = 2 + static_cast<int>(gen.integer(4));
      for (int k = 0; k < n; ++k) xi.add(gen.uniform_in_box(dom));
      const double h_before = potentials::hamiltonian(pot, xi);
      if (!(h_before >= -200.0 && h_before <= 100.0)) continue;
      const int i = static_cast<int>(gen.integer(xi.size()));
      const geometry::Point y = gen.uniform_in_box(dom);
      // Near-overlaps put 1e9 in the hamiltonian and the identity drowns
      // in cancellation noise; the energy window keeps it conditioned.
      const double h_after =
          potentials::hamiltonian(pot, geometry::apply_move(xi, i, y));
      if (!(h_after >= -200.0 && h_after <= 200.0)) continue;
      const auto res = detailed_balance_residual(spec, xi, i, y);
      if (!res) continue;
      ++checked;
      CHECK(*res <= 1e-10);
    }
  }
}

TEST_CASE("residual is vacuous on forbidden states and zero when masked") {
  auto pot = pair(potentials::PairKind::hard_core);
  pot.hard_core_radius = 1.0;
  const auto spec = RateSpec::build(box(1, 4.0), unit_stable(1.0), pot);
  const Configuration stuck =
      Configuration::from_points(1, {make_point({0.0}), make_point({0.5})});
  CHECK(!detailed_balance_residual(spec, stuck, 0, make_point({3.0})));

  const Configuration ok =
      Configuration::from_points(1, {make_point({0.0}), make_point({2.0})});
  // Target outside the box: both rates vanish, residual is exactly zero.
  const auto masked = detailed_balance_residual(spec, ok, 0, make_point({5.0}));
  REQUIRE(masked.has_value());
  CHECK(*masked == 0.0);
}

TEST_CASE("truncated product rate on a hand computation") {
  const auto spec = RateSpec::build(box(2, 4.0), unit_stable(1.0), {},
                                    RateMode::ginibre_truncated);
  // Spectator at the origin, mover from (1,0) to (2,0): the product factor
  // is |y|^2 / |x|^2 = 4, and r = 1 makes both kernel values 1.
  const Configuration xi = Configuration::from_points(
      2, {make_point({1.0, 0.0}), make_point({0.0, 0.0})});
  CHECK(ginibre_truncated_rate(spec, xi, 0, make_point({2.0, 0.0})) ==
        doctest::Approx(5.0));

  // The window is the centered ball, so the origin spectator survives any
  // radius while an offset one drops out and leaves the bare rate nu + nu.
  auto small = spec;
  small.ginibre_radius = 0.5;
  CHECK(ginibre_truncated_rate(small, xi, 0, make_point({2.0, 0.0})) ==
        doctest::Approx(5.0));
  const Configuration offset = Configuration::from_points(
      2, {make_point({1.0, 0.0}), make_point({0.6, 0.0})});
  CHECK(ginibre_truncated_rate(small, offset, 0, make_point({2.0, 0.0})) ==
        doctest::Approx(2.0));
  small.ginibre_radius = 1.0;
  // product |y - s|^2 / |x - s|^2 = 1.96 / 0.16
  CHECK(ginibre_truncated_rate(small, offset, 0, make_point({2.0, 0.0})) ==
        doctest::Approx(1.0 + 1.96 / 0.16));
}

TEST_CASE("full-window product equals the log-gas gibbs rate") {
  // With every spectator inside the truncation window, the quadratic product
  // is exactly exp(-delta H) of the beta = 2 logarithmic pair energy.
  auto lg = pair(potentials::PairKind::logarithmic);
  lg.log_beta = 2.0;
  const auto dom = box(2, 2.0);
  auto gibbs = RateSpec::build(dom, unit_stable(1.0), lg);
  auto gini = RateSpec::build(dom, unit_stable(1.0), {},
                              RateMode::ginibre_truncated);
  gini.ginibre_radius = 10.0;  // covers the whole box

  jumpmc::rng::Rng gen(5);
  for (int rep = 0; rep < 40; ++rep) {
    Configuration xi(2);
    for (int k = 0; k < 4; ++k) xi.add(gen.uniform_in_box(dom));
    const int i = static_cast<int>(gen.integer(xi.size()));
    const geometry::Point y = gen.uniform_in_box(dom);
    const double a = jump_rate(gibbs, xi, i, y);
    const double b = jump_rate(gini, xi, i, y);
    if (a == 0.0) {
      CHECK(b == 0.0);
      continue;
    }
    CHECK(b == doctest::Approx(a).epsilon(1e-12));
  }
}

TEST_CASE("birth and death rates of the grand-canonical chain") {
  auto pot = pair(potentials::PairKind::hard_core);
  pot.hard_core_radius = 0.5;
  const Configuration xi =
      Configuration::from_points(1, {make_point({0.0})});
  CHECK(glauber_birth_rate(pot, xi, make_point({0.25}), 1.5) == 0.0);
  CHECK(glauber_birth_rate(pot, xi, make_point({1.0}), 1.5) ==
        doctest::Approx(1.5));
  CHECK_THROWS_AS(glauber_birth_rate(pot, xi, make_point({1.0}), 0.0),
                  std::invalid_argument);
  CHECK(glauber_death_rate(xi, 0) == 1.0);
  CHECK_THROWS_AS(glauber_death_rate(xi, 1), std::out_of_range);

  // Quantitative balance of the weight z^n e^{-H}: birth flux out of xi
  // equals death flux out of xi + y.
  auto lj = pair(potentials::PairKind::lennard_jones);
  jumpmc::rng::Rng gen(9);
  const auto dom = box(1, 2.0);
  const double z = 1.7;
  for (int rep = 0; rep < 50; ++rep) {
    Configuration cfg(1);
    for (int k = 0; k < 3; ++k) cfg.add(gen.uniform_in_box(dom));
    if (potentials::hamiltonian(lj, cfg) > 50.0) continue;
    const geometry::Point y = gen.uniform_in_box(dom);
    const Configuration grown = geometry::add_point(cfg, y);
    // A birth into the core makes both sides huge and the comparison moot.
    if (potentials::hamiltonian(lj, grown) > 100.0) continue;
    const double lhs = static_cast<double>(cfg.size()) * std::log(z) -
                       potentials::hamiltonian(lj, cfg) +
                       std::log(glauber_birth_rate(lj, cfg, y, z));
    const double rhs = static_cast<double>(grown.size()) * std::log(z) -
                       potentials::hamiltonian(lj, grown) +
                       std::log(glauber_death_rate(grown, grown.size() - 1));
    CHECK(1.0 - std::exp(-std::abs(lhs - rhs)) <= 1e-10);
  }
}
