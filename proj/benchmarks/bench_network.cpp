#include <benchmark/benchmark.h>

#include "dmlrn/losses.hpp"
#include "dmlrn/net/model.hpp"
#include "dmlrn/scene.hpp"

namespace {

void BM_ForwardEval(benchmark::State& state) {
  dmlrn::ModelConfig cfg;
  cfg.tier = static_cast<dmlrn::SizeTier>(state.range(0));
  dmlrn::Model model(dmlrn::resolve(cfg), 1);
  dmlrn::SceneConfig sc;
  sc.rng_seed = 2;
  const dmlrn::RGBDSample sample = dmlrn::generate_scene(sc);
  const std::vector<const dmlrn::RGBDSample*> batch{&sample};
  const dmlrn::Tensor in = dmlrn::make_input_tensor(batch, model.config());
  const dmlrn::Tensor mask = dmlrn::make_mask_tensor(batch);
  for (auto _ : state) benchmark::DoNotOptimize(model.forward(in, mask, false));
}
BENCHMARK(BM_ForwardEval)->Arg(0)->Arg(2)->Arg(4);

void BM_TrainStep(benchmark::State& state) {
  dmlrn::ModelConfig cfg;
  dmlrn::Model model(dmlrn::resolve(cfg), 1);
  dmlrn::SceneConfig sc;
  std::vector<dmlrn::RGBDSample> samples;
  for (int i = 0; i < 8; ++i) {
    sc.rng_seed = 10 + i;
    samples.push_back(dmlrn::generate_scene(sc));
  }
  std::vector<const dmlrn::RGBDSample*> batch;
  for (const auto& s : samples) batch.push_back(&s);
  const dmlrn::Tensor in = dmlrn::make_input_tensor(batch, model.config());
  const dmlrn::Tensor mask = dmlrn::make_mask_tensor(batch);

  for (auto _ : state) {
    const dmlrn::Tensor pred = model.forward(in, mask, true);
    dmlrn::Tensor dpred(pred.n, pred.c, pred.h, pred.w);
    for (int n = 0; n < pred.n; ++n) {
      dmlrn::LogDepthMap pl(pred.h, pred.w);
      std::copy(pred.sample(n), pred.sample(n) + pl.v.size(), pl.v.begin());
      const dmlrn::ValidSet vs = dmlrn::build_valid_set(pl, *samples[n].gt);
      const auto g = dmlrn::loss_grad(dmlrn::LossKind::PAIRWISE_LOG_L1, vs);
      for (size_t i = 0; i < vs.indices.size(); ++i)
        dpred.sample(n)[vs.indices[i]] = g[i] / pred.n;
    }
    model.zero_grad();
    model.backward(dpred);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_TrainStep)->Unit(benchmark::kMillisecond);

}  // namespace
