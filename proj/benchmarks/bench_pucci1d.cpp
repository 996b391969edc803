#include <benchmark/benchmark.h>

#include <cmath>

#include "pucci1d/bvp.hpp"
#include "pucci1d/homoclinic.hpp"
#include "pucci1d/scalar.hpp"

using namespace pucci1d;

namespace {

Nonlinearity square() { return Nonlinearity::power_sum({{1.0, 2.0}}, 0.5); }

void BM_GroundState(benchmark::State& state) {
  ScalarLandscape ls(square(), 1.0);
  PucciParams p(1.0, 2.0, Branch::plus);
  double h = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    GroundState gs = build_ground_state(p, ls, 44.0, h);
    benchmark::DoNotOptimize(gs.max_value());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GroundState)->Arg(50)->Arg(100)->Arg(200)->Complexity();

void BM_FrozenSolve(benchmark::State& state) {
  PucciParams p(1.0, 2.0, Branch::plus);
  double h = 10.0 / static_cast<double>(state.range(0));
  DiscreteOperator op(p, Potential::constant(1.0), square(), 5.0,
                      5.0 / std::llround(5.0 / h));
  Profile rhs = op.zero_profile();
  for (std::size_t i = 0; i < rhs.size(); ++i)
    rhs[i] = 1.0 + std::sin(rhs.x(i));
  for (auto _ : state) {
    Profile u = solve_frozen(op, rhs);
    benchmark::DoNotOptimize(u.sup_norm());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FrozenSolve)->Range(1 << 10, 1 << 14)->Complexity();

void BM_FullSolve(benchmark::State& state) {
  ScalarLandscape ls(square(), 1.0);
  PucciParams p(1.0, 2.0, Branch::plus);
  auto V = Potential::well(1.0, 0.3, 3.0);
  DiscreteOperator op(p, V, square(), 30.0, 1e-2);
  Bump bump(0.1);
  GroundState gs = build_ground_state(p, ls, 48.0, 1e-2);
  Profile init = gs.restricted(30.0);
  for (auto _ : state) {
    auto [u, info] = solve_full(op, 0.0, init, bump);
    benchmark::DoNotOptimize(info.residual);
  }
}
BENCHMARK(BM_FullSolve);

void BM_Trajectory(benchmark::State& state) {
  ScalarLandscape ls(square(), 1.0);
  for (auto _ : state) {
    Trajectory tr = integrate_ivp(ls, 1.0, 1.2, 20.0, 1e-3);
    benchmark::DoNotOptimize(tr.size());
  }
}
BENCHMARK(BM_Trajectory);

}  // namespace

BENCHMARK_MAIN();
