#include <benchmark/benchmark.h>

#include "pcl/lie_skewer.hpp"
#include "pcl/marked_box.hpp"
#include "pcl/poncelet.hpp"
#include "pcl/steiner.hpp"

namespace {

void BM_CurveDimension(benchmark::State& state) {
  pcl::CurveDimensionOptions opts;
  opts.depth = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pcl::pappus_curve_dimension(0.3, 0.2, opts));
}
BENCHMARK(BM_CurveDimension)->Arg(10)->Arg(12)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_SquareLaw(benchmark::State& state) {
  pcl::Rng rng(5);
  const auto s = pcl::random_complex_sample(rng);
  for (auto _ : state) benchmark::DoNotOptimize(pcl::verify_square_law(s.a, s.o, 1e-9));
}
BENCHMARK(BM_SquareLaw);

void BM_CausticSearch(benchmark::State& state) {
  const pcl::ConfocalFamily family(2.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(pcl::find_caustic_for_n(family, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_CausticSearch)->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_PonceletSuite(benchmark::State& state) {
  const pcl::ConfocalFamily family(2.0, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(pcl::run_poncelet_suite(family, static_cast<int>(state.range(0)), 0));
}
BENCHMARK(BM_PonceletSuite)->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_SkewerPentagramOrbit(benchmark::State& state) {
  pcl::Rng rng(3);
  const auto lines = pcl::random_euclidean_lines(7, rng);
  pcl::SkewerPentagramOptions opts;
  opts.record_matrices = false;
  for (auto _ : state)
    benchmark::DoNotOptimize(pcl::skewer_pentagram_orbit(lines, static_cast<std::size_t>(state.range(0)), opts));
}
BENCHMARK(BM_SkewerPentagramOrbit)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
