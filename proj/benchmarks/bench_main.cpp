#include <benchmark/benchmark.h>

#include "fracpulse/infidelity.hpp"
#include "fracpulse/montecarlo.hpp"
#include "fracpulse/operators.hpp"
#include "fracpulse/special.hpp"

using namespace fracpulse;

static void BM_GenExpIntegral(benchmark::State& state) {
  double z = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gen_exp_integral(1.4, z));
    z = (z < 10.0) ? z * 1.7 : 1e-3;
  }
}
BENCHMARK(BM_GenExpIntegral);

static void BM_MakeGrid(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto g = make_grid(GridScheme::jacobi, n, -0.25, -0.25);
    benchmark::DoNotOptimize(g.nodes.data());
  }
}
BENCHMARK(BM_MakeGrid)->Arg(64)->Arg(256);

static void BM_OperatorAssembly(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = make_grid(GridScheme::legendre, n);
  for (auto _ : state) {
    auto op = rl_integral(0.5, Side::left, g);
    benchmark::DoNotOptimize(op.matrix().data());
  }
}
BENCHMARK(BM_OperatorAssembly)->Arg(64)->Arg(128)->Arg(256);

static void BM_LagProfile(benchmark::State& state) {
  const ShapeFn s = ShapeFn::beta(1.4);
  for (auto _ : state) {
    auto pr = build_lag_profile(s, s);
    benchmark::DoNotOptimize(pr.g_hi.data());
  }
}
BENCHMARK(BM_LagProfile);

static void BM_QuadraticFormFromProfile(benchmark::State& state) {
  const auto m = TlfEnsembleModel::paper_preset(0.5);
  const ShapeFn s = ShapeFn::square();
  const LagProfile pr = build_lag_profile(s, s);
  double t = 1e-8;
  for (auto _ : state) {
    benchmark::DoNotOptimize(quadratic_form_from_profile(pr, exact_kernel(m, t)).value);
    t = (t < 1e-6) ? t * 1.3 : 1e-8;
  }
}
BENCHMARK(BM_QuadraticFormFromProfile);

static void BM_Trajectory(benchmark::State& state) {
  const auto m = TlfEnsembleModel::paper_preset(1.0, 1e-10);
  const auto ens = discretize_ensemble(m, 64);
  std::uint64_t i = 0;
  for (auto _ : state) {
    auto tr = sample_trajectory(ens, 1e-8, 4096, substream_seed(1, i++));
    benchmark::DoNotOptimize(tr.values.data());
  }
}
BENCHMARK(BM_Trajectory);

BENCHMARK_MAIN();
