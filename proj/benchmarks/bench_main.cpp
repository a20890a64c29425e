#include <benchmark/benchmark.h>

#include "khess/analysis.hpp"
#include "khess/closedform.hpp"
#include "khess/selfsimilar.hpp"
#include "khess/shooting.hpp"

namespace {

using namespace khess;

void BM_IntegrateExactK1(benchmark::State& state) {
  const Params p = exact_profile_k1(5, 3.0).params();
  for (auto _ : state) {
    ProfileSolution prof = integrate(p);
    benchmark::DoNotOptimize(prof.samples.size());
  }
}
BENCHMARK(BM_IntegrateExactK1)->Unit(benchmark::kMillisecond);

void BM_IntegrateK3(benchmark::State& state) {
  const Params p = make_params(7, 3, 6.0, 2.0, static_cast<double>(state.range(0)));
  for (auto _ : state) {
    ProfileSolution prof = integrate(p);
    benchmark::DoNotOptimize(prof.samples.size());
  }
}
BENCHMARK(BM_IntegrateK3)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_IntegrateRForm(benchmark::State& state) {
  const Params p = make_params(7, 3, 6.0, 2.0, 1.0);
  for (auto _ : state) {
    ProfileSolution prof = integrate_r_form(p);
    benchmark::DoNotOptimize(prof.samples.size());
  }
}
BENCHMARK(BM_IntegrateRForm)->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& state) {
  const Params p = make_params(3, 1, 3.0, 1.0, 2.0);
  for (auto _ : state) {
    ClassificationResult r = classify(p);
    benchmark::DoNotOptimize(r.L_estimate);
  }
}
BENCHMARK(BM_Classify)->Unit(benchmark::kMillisecond);

void BM_ShootK1(benchmark::State& state) {
  const Params p = make_params(3, 1, 3.0, 1.0, 1.0);
  for (auto _ : state) {
    ShootResult s = shoot(p);
    benchmark::DoNotOptimize(s.gamma_star);
  }
}
BENCHMARK(BM_ShootK1)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_Sweep(benchmark::State& state) {
  const Params p = make_params(3, 1, 2.0, 2.0, 1.0);
  const std::vector<double> grid{1, 2, 3, 4, 5, 6, 7, 8};
  SweepConfig scfg;
  scfg.jobs = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    auto rows = sweep(p, grid, {}, scfg);
    benchmark::DoNotOptimize(rows.size());
  }
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_LpNorm(benchmark::State& state) {
  const ProfileSolution prof = integrate(make_params(3, 1, 6.0, 0.4, 1.0));
  const SelfSimilarFrame frame = make_frame(prof);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lp_norm(frame, 10.0, 2.0));
  }
}
BENCHMARK(BM_LpNorm)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
