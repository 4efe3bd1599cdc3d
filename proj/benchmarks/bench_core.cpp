#include <benchmark/benchmark.h>

#include "jumpmc/dynamics.hpp"
#include "jumpmc/functionals.hpp"
#include "jumpmc/geometry.hpp"
#include "jumpmc/kernels.hpp"
#include "jumpmc/potentials.hpp"
#include "jumpmc/rates.hpp"
#include "jumpmc/rng.hpp"

namespace {

using namespace jumpmc;

geometry::Domain box(int d, double half) {
  geometry::Domain dom;
  dom.dim = d;
  dom.half_width = half;
  return dom;
}

geometry::Configuration random_config(const geometry::Domain& dom, int n,
                                      std::uint64_t seed) {
  rng::Rng gen(seed);
  geometry::Configuration xi(dom.dim);
  for (int i = 0; i < n; ++i)
    xi = geometry::add_point(xi, gen.uniform_in_box(dom));
  return xi;
}

rates::RateSpec lj_rate(int d, int n_hint) {
  (void)n_hint;
  kernels::KernelSpec kernel;
  kernel.kind = kernels::KernelKind::alpha_stable;
  kernel.alpha = 1.0;
  potentials::PotentialSpec pot;
  pot.pair = potentials::PairKind::lennard_jones;
  return rates::RateSpec::build(box(d, 2.0), kernel, pot);
}

void BM_jump_rate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto rate = lj_rate(1, n);
  const auto xi = random_config(rate.domain, n, 7);
  rng::Rng gen(11);
  for (auto _ : state) {
    const int i = static_cast<int>(gen.integer(xi.size()));
    geometry::Point y = xi.point(i);
    y.x[0] += 0.25 + 0.5 * gen.uniform();
    if (!rate.domain.contains(y)) y.x[0] -= 1.0;
    benchmark::DoNotOptimize(rates::jump_rate(rate, xi, i, y));
  }
}
BENCHMARK(BM_jump_rate)->Arg(8)->Arg(64)->Arg(512);

void BM_move_energy_delta(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto dom = box(1, 2.0);
  potentials::PotentialSpec pot;
  pot.pair = potentials::PairKind::lennard_jones;
  const auto xi = random_config(dom, n, 7);
  rng::Rng gen(11);
  for (auto _ : state) {
    const int i = static_cast<int>(gen.integer(xi.size()));
    geometry::Point y = gen.uniform_in_box(dom);
    benchmark::DoNotOptimize(potentials::move_energy_delta(pot, xi, i, y));
  }
}
BENCHMARK(BM_move_energy_delta)->Arg(8)->Arg(64)->Arg(512);

void BM_square_field(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto dom = box(1, 2.0);
  kernels::KernelSpec kernel;
  kernel.alpha = 1.0;
  const auto xi = random_config(dom, n, 7);
  functionals::TestFunction f;
  f.bumps.push_back({geometry::make_point({0.0}), 1.0});
  f.terms.push_back({1.0, {1}});
  const functionals::ConfigFn F = [&](const geometry::Configuration& c) {
    return functionals::eval_polynomial(f, c);
  };
  for (auto _ : state)
    benchmark::DoNotOptimize(
        functionals::square_field(F, F, kernel, dom, xi));
}
BENCHMARK(BM_square_field)->Arg(2)->Arg(8);

void BM_d_a(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto dom = box(1, 4.0);
  const auto xi = random_config(dom, n, 7);
  const functionals::CutoffSequence seq{1, 1, 0.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(functionals::d_a(xi, seq));
}
BENCHMARK(BM_d_a)->Arg(16)->Arg(256)->Arg(4096);

void BM_thinning_step(benchmark::State& state) {
  const auto rate = lj_rate(1, 8);
  const auto xi0 = random_config(rate.domain, 8, 7);
  dynamics::SimParams params;
  params.horizon = 0.05;
  params.record_events = false;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    params.seed = seed++;
    benchmark::DoNotOptimize(
        dynamics::run_thinning(rate, params, xi0, params.horizon));
  }
}
BENCHMARK(BM_thinning_step);

}  // namespace

BENCHMARK_MAIN();
