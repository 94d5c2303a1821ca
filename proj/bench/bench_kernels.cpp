// Serial reference against the OpenMP kernels.

#include "ncdil/dilation.hpp"
#include "ncdil/freemodel.hpp"
#include "ncdil/mrange.hpp"
#include "ncdil/rotreps.hpp"
#include "ncdil/torus_max.hpp"

#include <benchmark/benchmark.h>

using namespace ncdil;

namespace {

TorusProblem d3_problem(long long m, long long n) {
  const IrrepFamily fam = irrep_family(RationalAngle::make(m, n), 3);
  TorusProblem p;
  p.terms = fam.generators;
  p.period = fam.period;
  return p;
}

void BM_torus_max(benchmark::State& state) {
  const TorusProblem p = d3_problem(3, 7);
  TorusSearchOptions opt;
  opt.grid_step = 1e-2;
  opt.policy = state.range(0) ? ExecPolicy::parallel : ExecPolicy::serial;
  for (auto _ : state) benchmark::DoNotOptimize(maximize_top_eigenvalue(p, opt).upper);
}
BENCHMARK(BM_torus_max)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_hf_norm(benchmark::State& state) {
  SampleConfig cfg;
  cfg.N = 200;
  cfg.trials = 4;
  cfg.policy = state.range(0) ? ExecPolicy::parallel : ExecPolicy::serial;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_hf_norm(cfg).mean);
}
BENCHMARK(BM_hf_norm)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_support_profile(benchmark::State& state) {
  const OperatorFamily f = OperatorFamily::rotation(RationalAngle::make(1, 3), 2);
  const DirectionNet net = make_direction_net(2, 0.1, false);
  const auto policy = state.range(0) ? ExecPolicy::parallel : ExecPolicy::serial;
  for (auto _ : state) benchmark::DoNotOptimize(support_profile(f, net, 0.1, policy).upper.size());
}
BENCHMARK(BM_support_profile)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
