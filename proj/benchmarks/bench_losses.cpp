#include <benchmark/benchmark.h>

#include "dmlrn/losses.hpp"
#include "dmlrn/rng.hpp"

namespace {

dmlrn::ValidSet make_set(int n) {
  dmlrn::Rng rng(7);
  dmlrn::LogDepthMap pl(1, n);
  dmlrn::DepthMap gt(1, n);
  for (int i = 0; i < n; ++i) {
    pl.v[i] = -1.0 + 3.0 * rng.uniform();
    gt.v[i] = 0.5 + 9.0 * rng.uniform();
  }
  return dmlrn::build_valid_set(pl, gt);
}

void BM_PairwiseLogL1Sorted(benchmark::State& state) {
  const auto vs = make_set(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dmlrn::pairwise_log_l1(vs));
}
BENCHMARK(BM_PairwiseLogL1Sorted)->Arg(256)->Arg(1024)->Arg(4096)->Arg(16384);

void BM_PairwiseBruteForce(benchmark::State& state) {
  const auto vs = make_set(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(dmlrn::pairwise_brute_force(vs, dmlrn::LossKind::PAIRWISE_LOG_L1));
}
BENCHMARK(BM_PairwiseBruteForce)->Arg(256)->Arg(1024)->Arg(4096);

void BM_PairwiseLogL1Grad(benchmark::State& state) {
  const auto vs = make_set(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(dmlrn::loss_grad(dmlrn::LossKind::PAIRWISE_LOG_L1, vs));
}
BENCHMARK(BM_PairwiseLogL1Grad)->Arg(1024)->Arg(16384);

}  // namespace
