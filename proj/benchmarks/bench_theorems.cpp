#include <benchmark/benchmark.h>

#include "pcl/dsl/verify.hpp"
#include "pcl/lie_skewer.hpp"
#include "pcl/marked_box.hpp"
#include "pcl/pentagram.hpp"

namespace {

void BM_DslVerify(benchmark::State& state, const char* name) {
  const auto script = pcl::dsl::builtin_script(name);
  pcl::dsl::VerifyOptions opts;
  opts.trials = 20;
  for (auto _ : state) benchmark::DoNotOptimize(pcl::dsl::verify(script, opts));
}
BENCHMARK_CAPTURE(BM_DslVerify, pappus, "pappus")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_DslVerify, desargues, "desargues")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_DslVerify, pascal, "pascal")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_DslVerify, brianchon, "brianchon")->Unit(benchmark::kMillisecond);

void BM_DslFloat(benchmark::State& state) {
  const auto script = pcl::dsl::builtin_script("pascal");
  pcl::dsl::VerifyOptions opts;
  opts.trials = 20;
  opts.backend = pcl::dsl::Backend::Float;
  for (auto _ : state) benchmark::DoNotOptimize(pcl::dsl::verify(script, opts));
}
BENCHMARK(BM_DslFloat)->Unit(benchmark::kMillisecond);

void BM_MarkedBoxRelations(benchmark::State& state) {
  const auto box = pcl::box_from_coords<pcl::Rational>(pcl::Rational(3, 10), pcl::Rational(1, 5));
  for (auto _ : state) benchmark::DoNotOptimize(pcl::apply_word(box, "t1 i t2"));
}
BENCHMARK(BM_MarkedBoxRelations);

void BM_Pentagram(benchmark::State& state, const char* id) {
  for (auto _ : state) benchmark::DoNotOptimize(pcl::run_pentagram_theorem(id, 10, 0));
}
BENCHMARK_CAPTURE(BM_Pentagram, six_T2, "6-T2")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Pentagram, twelve_T3434343, "12-T3434343")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Pentagram, twelve_T31313_circ, "12-T31313-circ")->Unit(benchmark::kMillisecond);

void BM_Skewer(benchmark::State& state, const char* id) {
  for (auto _ : state) benchmark::DoNotOptimize(pcl::run_skewer_theorem(id, 20, 0));
}
BENCHMARK_CAPTURE(BM_Skewer, pappus_E, "sk-pappus-E")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Skewer, pappus_H, "sk-pappus-H")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Skewer, clifford_2, "clifford-2-E")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
