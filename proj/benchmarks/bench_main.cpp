#include <benchmark/benchmark.h>

#include "canbound/families.hpp"
#include "canbound/phi.hpp"
#include "canbound/pipeline.hpp"

namespace {

using namespace canbound;

void BM_PhiUpperClosedForm(benchmark::State& state) {
  const PhiQuery q(3.0, 2.5);
  for (auto _ : state) benchmark::DoNotOptimize(phi_upper(q));
}
BENCHMARK(BM_PhiUpperClosedForm);

void BM_PhiUpperFallback(benchmark::State& state) {
  const PhiQuery q(2.25, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(phi_upper(q));
}
BENCHMARK(BM_PhiUpperFallback);

void BM_PhiOracle(benchmark::State& state) {
  const PhiQuery q(3.0, 2.5);
  const int res = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(phi_oracle(q, res));
}
BENCHMARK(BM_PhiOracle)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_NextRho(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(next_rho(2.2, 2.8, 2.8 + 1.6e-5, 1e-8));
}
BENCHMARK(BM_NextRho);

void BM_RunSchedule(benchmark::State& state) {
  const Schedule s = Schedule::uniform(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_schedule(s));
}
BENCHMARK(BM_RunSchedule)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_VerifyCertificate(benchmark::State& state) {
  const BoundCertificate c = run_schedule(Schedule::uniform(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(verify_certificate(c, 1));
}
BENCHMARK(BM_VerifyCertificate)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_IsCancellativeTripleBlocks(benchmark::State& state) {
  const FamilyPair fp = triple_blocks(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(is_cancellative(fp));
}
BENCHMARK(BM_IsCancellativeTripleBlocks)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_ExhaustiveMaxCk(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_max_ck(5, 2));
}
BENCHMARK(BM_ExhaustiveMaxCk)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
