#include <benchmark/benchmark.h>

#include "discsym/csts.hpp"
#include "discsym/disc_potential.hpp"
#include "discsym/polygon.hpp"

using namespace discsym;

static void BM_StreamPatch(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PatchSpec disc = PatchSpec::disc({0.25, 0.0}, 0.2, 256);
  DiscPoisson::get(n);
  for (auto _ : state) benchmark::DoNotOptimize(stream_patch(disc, n));
}
BENCHMARK(BM_StreamPatch)->Arg(65)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond);

static void BM_StreamBoundary(benchmark::State& state) {
  const PatchSpec disc = PatchSpec::disc({0.25, 0.0}, 0.2, static_cast<std::size_t>(state.range(0)));
  double s = 0.0;
  for (auto _ : state) {
    s += 1e-3;
    benchmark::DoNotOptimize(stream_boundary(disc, {0.5 * std::cos(s), 0.5 * std::sin(s)}));
  }
}
BENCHMARK(BM_StreamBoundary)->Arg(64)->Arg(256)->Arg(1024);

static void BM_CstsField(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GridField u = GridField::sample(n, [](Point2 x) {
    const double d2 = ((x.x1 - 0.3) * (x.x1 - 0.3) + x.x2 * x.x2) / 0.16;
    return d2 < 1.0 ? (1.0 - d2) * (1.0 - d2) : 0.0;
  });
  for (auto _ : state) benchmark::DoNotOptimize(csts_field(u, 0.25));
}
BENCHMARK(BM_CstsField)->Arg(65)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond);

static void BM_CstsEngineRows(benchmark::State& state) {
  const GridField u = GridField::sample(129, [](Point2 x) {
    const double d2 = ((x.x1 - 0.3) * (x.x1 - 0.3) + x.x2 * x.x2) / 0.16;
    return d2 < 1.0 ? (1.0 - d2) * (1.0 - d2) : 0.0;
  });
  const CstsEngine engine(u);
  double t = 0.0;
  for (auto _ : state) {
    t += 1e-3;
    benchmark::DoNotOptimize(engine.rows(t));
  }
}
BENCHMARK(BM_CstsEngineRows)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
