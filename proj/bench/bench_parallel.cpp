// Serial reference paths against their OpenMP versions. Argument 0 runs
// serial, 1 parallel.

#include <benchmark/benchmark.h>

#include "fbm/characters.hpp"
#include "fbm/enumerate.hpp"
#include "fbm/gkm.hpp"
#include "fbm/lattice.hpp"

using namespace fbm;

static void BM_CharacterUnits(benchmark::State& state) {
  ch::compare_character_forms(1, true);  // warm the per-order context
  for (auto _ : state) {
    auto r = ch::compare_character_forms(1, state.range(0) != 0);
    benchmark::DoNotOptimize(r.keys_compared);
  }
}
BENCHMARK(BM_CharacterUnits)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_EnumeratorTasks(benchmark::State& state) {
  const auto dual = lat::dual_lattice(lat::barnes_wall_16());
  const en::EllipsoidEnumerator e(dual.gram, 4);
  auto visit = [](std::uint64_t& n, std::span<const std::int64_t>, en::i128) { ++n; };
  for (auto _ : state) {
    const auto parts = state.range(0) ? e.map_tasks_parallel(3, std::uint64_t{0}, visit)
                                      : e.map_tasks_serial(3, std::uint64_t{0}, visit);
    std::uint64_t total = 0;
    for (auto p : parts) total += p;
    benchmark::DoNotOptimize(total);
  }
}
BENCHMARK(BM_EnumeratorTasks)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_WeylOrbit(benchmark::State& state) {
  for (auto _ : state) {
    auto pts = gkm::weyl_orbit_points(Rational(2), state.range(0) != 0);
    benchmark::DoNotOptimize(pts.size());
  }
}
BENCHMARK(BM_WeylOrbit)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
