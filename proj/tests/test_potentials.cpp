#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "jumpmc/geometry.hpp"
#include "jumpmc/potentials.hpp"
#include "jumpmc/rng.hpp"

using namespace jumpmc::potentials;
namespace geometry = jumpmc::geometry;
using geometry::Configuration;
using geometry::make_point;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PotentialSpec lj() {
  PotentialSpec s;
  s.pair = PairKind::lennard_jones;
  return s;
}

PotentialSpec riesz(double a) {
  PotentialSpec s;
  s.pair = PairKind::riesz;
  s.riesz_a = a;
  return s;
}

PotentialSpec log_pair(double beta, int sign) {
  PotentialSpec s;
  s.pair = PairKind::logarithmic;
  s.log_beta = beta;
  s.log_sign = sign;
  return s;
}

PotentialSpec hard(double radius) {
  PotentialSpec s;
  s.pair = PairKind::hard_core;
  s.hard_core_radius = radius;
  return s;
}

}  // namespace

TEST_CASE("pair potentials at pinned radii") {
  const auto at = [](const PotentialSpec& s, double r) {
    return pair_potential(s, make_point({0.0}), make_point({r}));
  };
  // r^{-12} - r^{-6}: zero crossing at 1, minimum -1/4 at 2^{1/6}.
  CHECK(at(lj(), 1.0) == doctest::Approx(0.0));
  CHECK(at(lj(), std::pow(2.0, 1.0 / 6.0)) == doctest::Approx(-0.25));
  CHECK(at(lj(), 0.0) == kInf);

  CHECK(at(riesz(2.0), 2.0) == doctest::Approx(0.25));
  CHECK(at(riesz(2.0), 0.5) == doctest::Approx(4.0));

  // The two-dimensional log-gas pair interaction: -2 log r.
  CHECK(at(log_pair(2.0, -1), std::exp(1.0)) == doctest::Approx(-2.0));
  CHECK(at(log_pair(2.0, -1), 1.0) == doctest::Approx(0.0));
  CHECK(at(log_pair(2.0, -1), 0.0) == kInf);

  CHECK(at(hard(0.5), 0.4) == kInf);
  CHECK(at(hard(0.5), 0.5) == doctest::Approx(0.0));

  PotentialSpec scaled = lj();
  scaled.scale = 3.0;
  CHECK(at(scaled, std::pow(2.0, 1.0 / 6.0)) == doctest::Approx(-0.75));
}

TEST_CASE("self potential kinds") {
  PotentialSpec s;
  CHECK(self_potential(s, make_point({5.0})) == 0.0);
  s.self = SelfKind::quadratic;
  s.self_strength = 2.0;
  CHECK(self_potential(s, make_point({3.0, 4.0})) == doctest::Approx(50.0));
  s.self = SelfKind::table;
  s.self_table = [](const geometry::Point& p) { return p[0] + 1.0; };
  CHECK(self_potential(s, make_point({0.25})) == doctest::Approx(1.25));
}

TEST_CASE("validation rejects ill-posed specs") {
  PotentialSpec bad = riesz(1.0);
  CHECK_THROWS_AS(bad.validate(1), std::invalid_argument);  // needs a > d
  bad = riesz(2.5);
  bad.validate(2);
  CHECK_THROWS_AS(bad.validate(3), std::invalid_argument);
  bad = hard(0.0);
  CHECK_THROWS_AS(bad.validate(1), std::invalid_argument);
  bad = lj();
  bad.scale = -1.0;
  CHECK_THROWS_AS(bad.validate(1), std::invalid_argument);
  PotentialSpec table;
  table.self = SelfKind::table;
  CHECK_THROWS_AS(table.validate(1), std::invalid_argument);
}

TEST_CASE("hamiltonian sums pairs once and respects the subwindow") {
  const Configuration two = Configuration::from_points(
      1, {make_point({0.0}), make_point({std::pow(2.0, 1.0 / 6.0)})});
  CHECK(hamiltonian(lj(), two) == doctest::Approx(-0.25));

  const Configuration three = Configuration::from_points(
      1, {make_point({0.0}), make_point({1.0}), make_point({3.0})});
  const auto r2 = riesz(2.0);
  CHECK(hamiltonian(r2, three) ==
        doctest::Approx(1.0 + 1.0 / 9.0 + 1.0 / 4.0));
  // Restricting to [-2, 2] drops every pair with the point at 3.
  CHECK(hamiltonian(r2, three, 2.0) == doctest::Approx(1.0));
  CHECK(hamiltonian(r2, Configuration(1)) == 0.0);

  PotentialSpec quad;
  quad.self = SelfKind::quadratic;
  CHECK(hamiltonian(quad, three) == doctest::Approx(0.0 + 1.0 + 9.0));
}

TEST_CASE("local energy excludes the skipped particle") {
  const Configuration xi = Configuration::from_points(
      1, {make_point({0.0}), make_point({1.0}), make_point({2.0})});
  const auto r2 = riesz(2.0);
  // Particle 1 against 0 and 2: 1 + 1 = 2.
  CHECK(local_energy_of(r2, xi, 1) == doctest::Approx(2.0));
  // Probe at the position of particle 1 without skipping: hits it, infinite.
  CHECK(local_energy(r2, xi, make_point({1.0})) == kInf);
}

TEST_CASE("move energy delta against the brute-force difference") {
  jumpmc::rng::Rng gen(31);
  geometry::Domain dom;
  dom.dim = 2;
  dom.half_width = 2.0;
  std::vector<PotentialSpec> specs = {lj(), riesz(3.0), log_pair(2.0, -1)};
  specs[0].self = SelfKind::quadratic;
  specs[0].self_strength = 0.5;
  for (const auto& spec : specs) {
    for (int rep = 0; rep < 50; ++rep) {
      Configuration xi(2);
      const int n = 2 + static_cast<int>(gen.integer(4));
      for (int i = 0; i < n; ++i) xi.add(gen.uniform_in_box(dom));
      const int i = static_cast<int>(gen.integer(xi.size()));
      const geometry::Point y = gen.uniform_in_box(dom);
      const double before = hamiltonian(spec, xi);
      const double after = hamiltonian(spec, geometry::apply_move(xi, i, y));
      const double delta = move_energy_delta(spec, xi, i, y);
      REQUIRE(std::isfinite(before));
      REQUIRE(std::isfinite(after));
      // The subtraction loses digits when the hamiltonians are large, so
      // the comparison is relative to their size, not to the difference.
      CHECK(delta == doctest::Approx(after - before)
                         .epsilon(1e-12)
                         .scale(std::abs(before) + std::abs(after)));
    }
  }
}

TEST_CASE("infinite energies resolve in the rejecting direction") {
  const auto h = hard(0.5);
  // Overlapping pair: moves that stay overlapped keep delta = +inf.
  const Configuration stuck = Configuration::from_points(
      1, {make_point({0.0}), make_point({0.3})});
  CHECK(move_energy_delta(h, stuck, 1, make_point({0.2})) == kInf);
  // Escaping move: before-side infinity alone clamps to a huge negative
  // delta, and the clamp announces itself through the warning hook.
  std::vector<std::string> warnings;
  set_energy_warning_handler(
      [&](const std::string& msg) { warnings.push_back(msg); });
  const double esc = move_energy_delta(h, stuck, 1, make_point({5.0}));
  set_energy_warning_handler({});
  CHECK(esc == -kEnergyClamp);
  CHECK(warnings.size() == 1);
}

TEST_CASE("bounded-energy indicator with and without a probe") {
  const auto r2 = riesz(2.0);
  const Configuration xi = Configuration::from_points(
      1, {make_point({0.0}), make_point({1.0})});
  CHECK(energy_indicator_lambda_q(r2, xi, 2.0) == 1);
  CHECK(energy_indicator_lambda_q(r2, xi, 0.5) == 0);
  // Probe halfway between the two points: 4 + 4 = 8.
  CHECK(energy_indicator_lambda_q(r2, xi, 10.0, make_point({0.5})) == 1);
  CHECK(energy_indicator_lambda_q(r2, xi, 7.0, make_point({0.5})) == 0);
  CHECK_THROWS_AS(energy_indicator_lambda_q(r2, xi, 0.0),
                  std::invalid_argument);
}
