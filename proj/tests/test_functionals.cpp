#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "jumpmc/dynamics.hpp"
#include "jumpmc/functionals.hpp"
#include "jumpmc/geometry.hpp"
#include "jumpmc/kernels.hpp"
#include "jumpmc/rng.hpp"

using namespace jumpmc::functionals;
namespace geometry = jumpmc::geometry;
namespace kernels = jumpmc::kernels;
namespace dynamics = jumpmc::dynamics;
using geometry::Configuration;
using geometry::make_point;

namespace {

geometry::Domain box(int d, double half) {
  geometry::Domain dom;
  dom.dim = d;
  dom.half_width = half;
  return dom;
}

TestFunction linear_bump(double center, double radius) {
  TestFunction f;
  f.bumps.push_back({make_point({center}), radius});
  f.terms.push_back({1.0, {1}});
  return f;
}

}  // namespace

TEST_CASE("bump is a normalized mollifier") {
  const TestFunction::Bump b{make_point({0.5}), 2.0};
  CHECK(bump_value(b, make_point({0.5})) == doctest::Approx(1.0));
  CHECK(bump_value(b, make_point({2.5})) == 0.0);
  CHECK(bump_value(b, make_point({3.0})) == 0.0);
  // s = 1/2: exp(1 - 1/(1 - 1/4)) = exp(-1/3).
  CHECK(bump_value(b, make_point({1.5})) ==
        doctest::Approx(std::exp(-1.0 / 3.0)));
  // Radial symmetry.
  CHECK(bump_value(b, make_point({-0.5})) ==
        doctest::Approx(bump_value(b, make_point({1.5}))));
}

TEST_CASE("polynomial evaluation over bump masses") {
  TestFunction f;
  f.bumps.push_back({make_point({0.0}), 1.0});
  f.terms.push_back({2.0, {2}});
  const Configuration xi =
      Configuration::from_points(1, {make_point({0.0}), make_point({0.5})});
  const double mass = 1.0 + std::exp(-1.0 / 3.0);
  CHECK(eval_polynomial(f, xi) == doctest::Approx(2.0 * mass * mass));
  // Empty configuration: all bump masses vanish.
  CHECK(eval_polynomial(f, Configuration(1)) == 0.0);

  f.validate();
  TestFunction bad = f;
  bad.terms[0].powers = {1, 2};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("discrete gradient is the move difference") {
  const TestFunction f = linear_bump(0.0, 1.0);
  const Configuration xi =
      Configuration::from_points(1, {make_point({0.5}), make_point({2.0})});
  const double g = discrete_gradient(f, xi, 0, make_point({0.25}));
  const double direct =
      eval_polynomial(f, geometry::apply_move(xi, 0, make_point({0.25}))) -
      eval_polynomial(f, xi);
  CHECK(g == doctest::Approx(direct));
  CHECK(g > 0.0);  // moved toward the bump center
}

TEST_CASE("square field against a fixed-grid oracle") {
  const auto dom = box(1, 1.0);
  kernels::KernelSpec kernel;  // unit alpha-stable, alpha = 1: nu = r^{-2}
  const TestFunction f = linear_bump(0.2, 0.6);
  const Configuration xi = Configuration::from_points(1, {make_point({0.1})});
  const double r_min = 1e-3;

  // Midpoint rule in r on both sides of the particle, well away from the
  // adaptive scheme used by the implementation.
  const double x = 0.1;
  double oracle = 0.0;
  const int m = 400000;
  for (int side : {-1, +1}) {
    const double lo = r_min;
    const double hi = side < 0 ? x + 1.0 : 1.0 - x;
    const double h = (hi - lo) / m;
    for (int k = 0; k < m; ++k) {
      const double r = lo + (k + 0.5) * h;
      const double y = x + side * r;
      const double diff =
          bump_value(f.bumps[0], make_point({y})) -
          bump_value(f.bumps[0], make_point({x}));
      oracle += 0.5 * diff * diff / (r * r) * h;
    }
  }
  CHECK(square_field(f, f, kernel, dom, xi, r_min) ==
        doctest::Approx(oracle).epsilon(1e-5));
}

TEST_CASE("square field is symmetric, bilinear, and cauchy-schwarz") {
  const auto dom = box(1, 1.0);
  kernels::KernelSpec kernel;
  const TestFunction f = linear_bump(0.2, 0.6);
  const TestFunction g = linear_bump(-0.3, 0.5);
  const Configuration xi = Configuration::from_points(
      1, {make_point({0.0}), make_point({-0.4}), make_point({0.55})});

  const double dff = square_field(f, f, kernel, dom, xi);
  const double dgg = square_field(g, g, kernel, dom, xi);
  const double dfg = square_field(f, g, kernel, dom, xi);
  const double dgf = square_field(g, f, kernel, dom, xi);
  CHECK(dfg == doctest::Approx(dgf).epsilon(1e-9));
  CHECK(dff >= 0.0);
  CHECK(dgg >= 0.0);
  CHECK(dfg * dfg <= dff * dgg * (1.0 + 1e-8));

  // D[f+g, f+g] expands bilinearly.
  const ConfigFn fg = [&](const Configuration& c) {
    return eval_polynomial(f, c) + eval_polynomial(g, c);
  };
  const double dsum = square_field(fg, fg, kernel, dom, xi);
  CHECK(dsum == doctest::Approx(dff + 2.0 * dfg + dgg).epsilon(1e-7));
}

TEST_CASE("product rule bound for the cutoff multiplier") {
  const auto dom = box(1, 2.0);
  kernels::KernelSpec kernel;
  const CutoffSequence seq{2, 1, 0.0};
  const TestFunction f = linear_bump(0.0, 1.0);
  jumpmc::rng::Rng gen(77);

  const ConfigFn chi = [&](const Configuration& c) { return chi_a(c, seq); };
  const ConfigFn fv = [&](const Configuration& c) {
    return eval_polynomial(f, c);
  };
  const ConfigFn prod = [&](const Configuration& c) { return chi(c) * fv(c); };

  for (int rep = 0; rep < 10; ++rep) {
    Configuration xi(1);
    const int n = 2 + static_cast<int>(gen.integer(3));
    for (int i = 0; i < n; ++i) xi.add(gen.uniform_in_box(dom));
    const double lhs = square_field(prod, prod, kernel, dom, xi);
    const double fxi = fv(xi);
    const double rhs = 2.0 * (square_field(chi, chi, kernel, dom, xi) * fxi * fxi +
                              square_field(fv, fv, kernel, dom, xi));
    CHECK(lhs <= rhs * (1.0 + 1e-8) + 1e-12);
  }
}

TEST_CASE("monte-carlo dirichlet energy matches the first-moment identity") {
  // For a linear observable F = <phi, xi> under a Poisson(z) field,
  // E D[F,F] = (z/2) integral over x of integral over y of
  // (phi(y) - phi(x))^2 nu(|y - x|) restricted to the jump range.
  const auto dom = box(1, 1.0);
  kernels::KernelSpec kernel;
  const double z = 1.2;
  const double r_min = 1e-3 * dom.half_width;
  const TestFunction f = linear_bump(0.2, 0.6);

  // Independent oracle: midpoint sum in (x, r).
  const int mx = 1500, mr = 3000;
  const double hx = 2.0 / mx;
  double oracle = 0.0;
  for (int ix = 0; ix < mx; ++ix) {
    const double x = -1.0 + (ix + 0.5) * hx;
    const double phix = bump_value(f.bumps[0], make_point({x}));
    for (int side : {-1, +1}) {
      const double hi = side < 0 ? x + 1.0 : 1.0 - x;
      if (hi <= r_min) continue;
      const double hr = (hi - r_min) / mr;
      for (int k = 0; k < mr; ++k) {
        const double r = r_min + (k + 0.5) * hr;
        const double diff =
            bump_value(f.bumps[0], make_point({x + side * r})) - phix;
        oracle += 0.5 * z * diff * diff / (r * r) * hr * hx;
      }
    }
  }

  jumpmc::rng::Rng gen(99);
  const ConfigFn F = [&](const Configuration& c) {
    return eval_polynomial(f, c);
  };
  const Estimate est = dirichlet_energy(
      F, kernel, dom,
      [&]() { return dynamics::sample_poisson_configuration(dom, z, gen); },
      400, r_min);
  CHECK(std::abs(est.value - oracle) <
        4.0 * est.stderr_ + 0.02 * std::abs(oracle));
}

TEST_CASE("cutoff sequence is dyadic in the combined exponent") {
  const CutoffSequence seq{3, 2, 0.5};
  CHECK(seq.a(0) == 3.0);
  CHECK(seq.a(2) == doctest::Approx(3.0 * 32.0));
  CHECK(seq.a(1) == doctest::Approx(3.0 * std::pow(2.0, 2.5)));
  CHECK_THROWS_AS((CutoffSequence{0, 1, 0.0}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS((CutoffSequence{1, 1, -0.1}).validate(),
                  std::invalid_argument);
}

TEST_CASE("dyadic distance on hand-computed configurations") {
  const CutoffSequence seq{1, 1, 0.0};  // a_r = 2^r
  CHECK(d_a(Configuration(1), seq) == 0.0);

  // Two points inside the unit ball: every J_r is empty for a_r = 2^r.
  const Configuration two =
      Configuration::from_points(1, {make_point({0.0}), make_point({0.5})});
  CHECK(d_a(two, seq) == 0.0);
  CHECK(chi_a(two, seq) == 1.0);

  // Four points, one far away: only r = 1 contributes, with the third point
  // at norm 0.3 giving min(2 - 0.3, 1) / (1 * 2) = 1/2.
  const Configuration four = Configuration::from_points(
      1, {make_point({0.1}), make_point({0.2}), make_point({0.3}),
          make_point({3.0})});
  CHECK(d_a(four, seq) == doctest::Approx(0.5));
  CHECK(chi_a(four, seq) == doctest::Approx(0.5));

  // Crowding the unit ball pushes the sum past one and chi to exactly zero.
  std::vector<geometry::Point> crowd;
  for (int i = 0; i < 12; ++i)
    crowd.push_back(make_point({0.05 * (i + 1)}));
  CHECK(d_a(Configuration::from_points(1, crowd), seq) >= 1.0);
  CHECK(chi_a(Configuration::from_points(1, crowd), seq) == 0.0);
}

TEST_CASE("profile function corners") {
  CHECK(rho_profile(-0.5) == 1.0);
  CHECK(rho_profile(0.0) == 1.0);
  CHECK(rho_profile(0.3) == doctest::Approx(0.7));
  CHECK(rho_profile(1.0) == 0.0);
  CHECK(rho_profile(1.5) == 0.0);
}

TEST_CASE("cutoff is exactly one on M[a] and zero off M[2a+]") {
  const auto dom = box(1, 4.0);
  jumpmc::rng::Rng gen(123);
  for (int n : {1, 2}) {
    const CutoffSequence seq{n, 1, 0.0};
    for (int rep = 0; rep < 100; ++rep) {
      // At most n points in the unit ball, so every dyadic count is within
      // its cap and the configuration lies in M[a].
      Configuration inside(1);
      for (int i = 0; i < n; ++i)
        inside.add(make_point({gen.uniform(-1.0, 1.0)}));
      REQUIRE(in_M_a(inside, seq, dom));
      CHECK(chi_a(inside, seq) == 1.0);

      // ceil(2 a_1) + 1 points in the unit ball violate the doubled shifted
      // cap at r = 0.
      Configuration outside(1);
      const int m = static_cast<int>(std::ceil(2.0 * seq.a(1))) + 1;
      for (int i = 0; i < m; ++i)
        outside.add(make_point({gen.uniform(-1.0, 1.0)}));
      REQUIRE(!in_M_2a_plus(outside, seq, dom));
      CHECK(chi_a(outside, seq) == 0.0);
    }
  }
}

TEST_CASE("series sums stay under their closed-form majorants") {
  // n = 1 attains the geometric closed forms of the first two series.
  const BoundSumsReport one = bound_sums(1, 1, 0.0, 1.0);
  CHECK(one.ok);
  CHECK(one.sum1 == doctest::Approx(one.bound1).epsilon(1e-9));
  CHECK(one.sum2 == doctest::Approx(one.bound2).epsilon(1e-9));
  CHECK(one.sum3 <= one.bound3);

  // Larger n only helps.
  const BoundSumsReport two = bound_sums(2, 1, 0.0, 1.0);
  CHECK(two.ok);
  CHECK(two.sum1 < one.sum1);
  CHECK(two.sum2 < one.sum2);
  CHECK(two.sum3 < one.sum3);
  CHECK(two.sum1 <= two.bound1 * (1.0 + 1e-9));
  CHECK(two.sum2 <= two.bound2 * (1.0 + 1e-9));
  CHECK(two.sum3 <= two.bound3 * (1.0 + 1e-9));

  // A second parameter point with kappa > 0.
  const BoundSumsReport k = bound_sums(3, 2, 0.5, 1.5);
  CHECK(k.ok);

  CHECK_THROWS_AS(bound_sums(1, 1, 1.0, 0.5), std::invalid_argument);
}
