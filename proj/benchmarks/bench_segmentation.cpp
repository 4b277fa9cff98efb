#include <benchmark/benchmark.h>

#include "dmlrn/corruption.hpp"
#include "dmlrn/scene.hpp"
#include "dmlrn/segmentation.hpp"

namespace {

dmlrn::RGBDSample scene(int hw) {
  dmlrn::SceneConfig cfg;
  cfg.height = hw;
  cfg.width = hw;
  cfg.rng_seed = 5;
  return dmlrn::generate_scene(cfg);
}

void BM_SegmentGraphBased(benchmark::State& state) {
  const auto sample = scene(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(dmlrn::segment_graph_based(sample.rgb, 500.0, 10, 0.8));
}
BENCHMARK(BM_SegmentGraphBased)->Arg(64)->Arg(128)->Arg(256);

void BM_Corrupt(benchmark::State& state) {
  const auto sample = scene(static_cast<int>(state.range(0)));
  dmlrn::CorruptionConfig cfg;
  cfg.min_size = 10;
  cfg.area_threshold = 800;
  cfg.spatter_prob = 0.07;
  for (auto _ : state) benchmark::DoNotOptimize(dmlrn::corrupt(sample, cfg));
}
BENCHMARK(BM_Corrupt)->Arg(64)->Arg(128);

}  // namespace
