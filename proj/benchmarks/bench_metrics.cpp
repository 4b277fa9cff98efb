#include <benchmark/benchmark.h>

#include "dmlrn/metrics.hpp"
#include "dmlrn/rng.hpp"

namespace {

dmlrn::DepthMap random_depth(uint64_t seed, int hw) {
  dmlrn::Rng rng(seed);
  dmlrn::DepthMap d(hw, hw);
  for (double& x : d.v) x = 0.5 + 9.0 * rng.uniform();
  return d;
}

void BM_Evaluate(benchmark::State& state) {
  const int hw = static_cast<int>(state.range(0));
  const auto pred = random_depth(1, hw);
  const auto gt = random_depth(2, hw);
  for (auto _ : state) benchmark::DoNotOptimize(dmlrn::evaluate(pred, gt));
}
BENCHMARK(BM_Evaluate)->Arg(64)->Arg(256);

void BM_Ssim(benchmark::State& state) {
  const int hw = static_cast<int>(state.range(0));
  const auto pred = random_depth(3, hw);
  const auto gt = random_depth(4, hw);
  for (auto _ : state) benchmark::DoNotOptimize(dmlrn::ssim(pred, gt));
}
BENCHMARK(BM_Ssim)->Arg(64)->Arg(256);

}  // namespace
