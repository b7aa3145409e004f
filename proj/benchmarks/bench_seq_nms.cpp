#include <benchmark/benchmark.h>

#include <vector>

#include "seqnms/evaluation.hpp"
#include "seqnms/nms.hpp"
#include "seqnms/seq_nms.hpp"
#include "seqnms/synthesis.hpp"

namespace {

using namespace seqnms;

void BM_SeqNms(benchmark::State& state) {
  const ClipDetections clip =
      dense_clip(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(seq_nms(clip, {}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(clip.num_detections()));
}
BENCHMARK(BM_SeqNms)->Args({100, 100})->Args({1000, 100})->Args({1000, 20})->Unit(benchmark::kMillisecond);

void BM_BuildLinks(benchmark::State& state) {
  const ClipDetections clip = dense_clip(1000, static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(build_links(clip, kDefaultLinkThreshold));
}
BENCHMARK(BM_BuildLinks)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_NmsClip(benchmark::State& state) {
  const ClipDetections clip = dense_clip(1000, static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(nms_clip(clip, kDefaultNmsThreshold));
}
BENCHMARK(BM_NmsClip)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& state) {
  std::vector<ClipDetections> dets;
  std::vector<GroundTruthClip> gts;
  for (const SyntheticClip& c : scenario_suite(0)) {
    dets.push_back(seq_nms(c.detections, {}));
    gts.push_back(c.ground_truth);
  }
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(dets, gts));
}
BENCHMARK(BM_Evaluate)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
