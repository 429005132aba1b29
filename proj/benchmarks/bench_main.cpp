#include <benchmark/benchmark.h>

#include "henon/local_heights.hpp"
#include "henon/mod_p.hpp"
#include "henon/periodic_search.hpp"

using namespace henon;

static void BM_CycleDecomposition(benchmark::State& state) {
  const auto p = static_cast<std::uint64_t>(state.range(0));
  const FpMap map(p, 3);
  for (auto _ : state) benchmark::DoNotOptimize(cycle_decomposition(map));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * p * p));
}
BENCHMARK(BM_CycleDecomposition)->Arg(31)->Arg(101)->Arg(307)->Arg(1009);

static void BM_PeriodFilter(benchmark::State& state) {
  const BigRational b = parse_rational("-9/16");
  for (auto _ : state) benchmark::DoNotOptimize(intersect_filters(b, default_filter_primes(b)));
}
BENCHMARK(BM_PeriodFilter);

// Grid search for b = -n/s^2 with growing s.
static void BM_GridSearch(benchmark::State& state) {
  const long s = state.range(0);
  const BigRational b = make_rational(BigInt(-7), BigInt(s * s));
  for (auto _ : state) benchmark::DoNotOptimize(find_rational_periodic_points(b));
}
BENCHMARK(BM_GridSearch)->Arg(2)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);

static void BM_CanonicalHeightPeriodic(benchmark::State& state) {
  const QMap map = quadratic_map(parse_rational("-9/16"));
  const QPoint p{parse_rational("1/4"), parse_rational("-3/4")};
  for (auto _ : state) benchmark::DoNotOptimize(canonical_height(map, p));
}
BENCHMARK(BM_CanonicalHeightPeriodic);

static void BM_CanonicalHeightEscaping(benchmark::State& state) {
  const QMap map = quadratic_map(parse_rational("1/9"));
  const QPoint p{parse_rational("2/3"), parse_rational("5/7")};
  for (auto _ : state) benchmark::DoNotOptimize(canonical_height(map, p));
}
BENCHMARK(BM_CanonicalHeightEscaping)->Unit(benchmark::kMicrosecond);

static void BM_BatchVerify(benchmark::State& state) {
  BatchOptions opts;
  opts.max_height = static_cast<std::uint64_t>(state.range(0));
  opts.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(batch_verify(opts));
}
BENCHMARK(BM_BatchVerify)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
