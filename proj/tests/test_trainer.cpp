#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "dmlrn/image_ops.hpp"
#include "dmlrn/scene.hpp"
#include "dmlrn/trainer.hpp"
#include "test_util.hpp"

using namespace dmlrn;

namespace {

std::vector<RGBDSample> tiny_dataset(int n, uint64_t base_seed, int hw = 32) {
  std::vector<RGBDSample> out;
  for (int i = 0; i < n; ++i) {
    SceneConfig cfg;
    cfg.height = hw;
    cfg.width = hw;
    cfg.rng_seed = base_seed + i;
    out.push_back(generate_scene(cfg));
  }
  return out;
}

TrainConfig tiny_config() {
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_size = 2;
  cfg.seed = 5;
  cfg.augment_flip = false;
  cfg.validate_each_epoch = false;
  cfg.corruption.k = 500.0;
  cfg.corruption.min_size = 8;
  cfg.corruption.area_threshold = 60;
  cfg.corruption.spatter_prob = 0.05;
  return cfg;
}

}  // namespace

TEST_CASE("make_training_pair honors the three strategies") {
  const auto data = tiny_dataset(1, 100);
  const RGBDSample& s = data[0];
  TrainConfig cfg = tiny_config();

  SUBCASE("none passes sensor and gt through unchanged") {
    auto [input, supervision] = make_training_pair(s, Strategy::None, cfg, 1);
    CHECK(input.sensor.v == s.sensor.v);
    CHECK(supervision.v == s.gt->v);
  }

  SUBCASE("semi-dense corruption only removes pixels; supervision untouched") {
    auto [input, supervision] = make_training_pair(s, Strategy::SemiDenseCorruption, cfg, 2);
    CHECK(supervision.v == s.gt->v);  // bit-exact
    for (size_t i = 0; i < input.sensor.v.size(); ++i) {
      if (input.sensor.v[i] > 0.0) {
        CHECK(input.sensor.v[i] == s.gt->v[i]);
        CHECK(supervision.v[i] > 0.0);  // input validity subset of supervision
      }
    }
    CHECK(input.mask.flags == mask_from_depth(input.sensor).flags);
  }

  SUBCASE("uniform sparse keeps exactly the configured points") {
    cfg.sparse_points = 500;
    auto [input, supervision] = make_training_pair(s, Strategy::UniformSparse, cfg, 3);
    int64_t count = 0;
    for (double x : input.sensor.v) count += x > 0.0;
    CHECK(count == 500);
    CHECK(supervision.v == s.gt->v);
  }

  SUBCASE("strategy none without gt is an error") {
    RGBDSample no_gt = s;
    no_gt.gt.reset();
    CHECK_THROWS(make_training_pair(no_gt, Strategy::None, cfg, 4));
  }

  SUBCASE("flipped samples pair with flipped supervision") {
    const RGBDSample flipped = hflip(s);
    auto [input, supervision] = make_training_pair(flipped, Strategy::SemiDenseCorruption, cfg, 5);
    CHECK(supervision.v == hflip(*s.gt).v);
  }
}

TEST_CASE("zero learning rate leaves parameters and losses unchanged") {
  const auto data = tiny_dataset(4, 200);
  ModelConfig mc;
  Model model(mc, 1);

  TrainConfig cfg = tiny_config();
  cfg.lr = 0.0;
  cfg.epochs = 3;
  cfg.strategy = Strategy::None;  // fixed inputs so every epoch sees the same batches
  cfg.bn_freeze_after_epoch = 0;  // keep statistics frozen too

  std::vector<Tensor> before;
  for (Param* p : model.params()) before.push_back(p->value);

  const TrainHistory history = train(model, data, {}, cfg);

  size_t i = 0;
  for (Param* p : model.params()) CHECK(p->value.v == before[i++].v);
  REQUIRE(history.epochs.size() == 3);
  CHECK(history.epochs[0].mean_train_loss == history.epochs[1].mean_train_loss);
  CHECK(history.epochs[1].mean_train_loss == history.epochs[2].mean_train_loss);
}

TEST_CASE("bn statistics and affine terms freeze after the first epoch") {
  const auto data = tiny_dataset(6, 300);
  ModelConfig mc;
  Model model(mc, 2);

  TrainConfig cfg = tiny_config();
  cfg.epochs = 3;
  cfg.bn_freeze_after_epoch = 1;

  std::vector<Tensor> stats_after_1;
  std::vector<Tensor> bn_affine_after_1;
  int calls = 0;
  const TrainHistory history =
      train(model, data, {}, cfg, 0, nullptr,
            [&](const EpochStats& stats, Model& m, const Adam&) {
              ++calls;
              if (stats.epoch == 1) {
                for (auto& [name, buf] : m.buffers()) stats_after_1.push_back(*buf);
                for (Param* p : m.params())
                  if (p->name.ends_with(".gamma") || p->name.ends_with(".beta"))
                    bn_affine_after_1.push_back(p->value);
              }
            });
  CHECK(calls == 3);
  REQUIRE(!stats_after_1.empty());

  size_t i = 0;
  for (auto& [name, buf] : model.buffers()) CHECK(buf->v == stats_after_1[i++].v);
  size_t j = 0;
  for (Param* p : model.params())
    if (p->name.ends_with(".gamma") || p->name.ends_with(".beta"))
      CHECK(p->value.v == bn_affine_after_1[j++].v);
  CHECK(model.norm_frozen());
  // training still made progress on conv weights after the freeze
  REQUIRE(history.epochs.size() == 3);
}

TEST_CASE("training is reproducible for a fixed seed and config") {
  const auto data = tiny_dataset(4, 400);
  TrainConfig cfg = tiny_config();
  cfg.epochs = 2;
  cfg.augment_flip = true;

  ModelConfig mc;
  Model m1(mc, 3), m2(mc, 3);
  const TrainHistory h1 = train(m1, data, {}, cfg);
  const TrainHistory h2 = train(m2, data, {}, cfg);
  REQUIRE(h1.epochs.size() == h2.epochs.size());
  for (size_t e = 0; e < h1.epochs.size(); ++e)
    CHECK(h1.epochs[e].mean_train_loss == h2.epochs[e].mean_train_loss);
  auto p1 = m1.params();
  auto p2 = m2.params();
  for (size_t i = 0; i < p1.size(); ++i) CHECK(p1[i]->value.v == p2[i]->value.v);
}

TEST_CASE("non-finite parameters trip the divergence guard") {
  const auto data = tiny_dataset(2, 500);
  ModelConfig mc;
  Model model(mc, 4);
  model.params()[0]->value.v[0] = std::nan("");
  TrainConfig cfg = tiny_config();
  CHECK_THROWS_AS(train(model, data, {}, cfg), TrainingDiverged);
}

TEST_CASE("checkpoint resume reproduces the uninterrupted trajectory") {
  namespace fs = std::filesystem;
  const std::string path = (fs::temp_directory_path() / "dmlrn_resume_test.bin").string();
  const auto data = tiny_dataset(4, 600);
  TrainConfig cfg = tiny_config();
  cfg.epochs = 4;

  ModelConfig mc;
  Model straight(mc, 5);
  const TrainHistory h_straight = train(straight, data, {}, cfg);

  Model part(mc, 5);
  TrainConfig cfg_half = cfg;
  cfg_half.epochs = 2;
  Adam adam(cfg);
  const TrainHistory h_first = train(part, data, {}, cfg_half, 0, &adam);
  save_train_checkpoint(path, part, adam, 2, "{}");

  const TrainCheckpoint ckpt = load_train_checkpoint(path);
  Model resumed(mc, 999);
  model_from_archive(resumed, ckpt.archive);
  Adam adam2(cfg);
  adam2.from_archive(ckpt.archive, resumed.params());
  const TrainHistory h_rest = train(resumed, data, {}, cfg, ckpt.completed_epochs, &adam2);

  REQUIRE(h_straight.epochs.size() == 4);
  REQUIRE(h_rest.epochs.size() == 2);
  CHECK(h_rest.epochs.back().mean_train_loss ==
        doctest::Approx(h_straight.epochs.back().mean_train_loss).epsilon(1e-12));
  auto pa = straight.params();
  auto pb = resumed.params();
  for (size_t i = 0; i < pa.size(); ++i)
    for (size_t j = 0; j < pa[i]->value.v.size(); ++j)
      CHECK(pa[i]->value.v[j] == doctest::Approx(pb[i]->value.v[j]).epsilon(1e-12));
  fs::remove(path);
}

TEST_CASE("validation reports appear when a val split is given") {
  const auto train_data = tiny_dataset(4, 700);
  const auto val_data = tiny_dataset(2, 800);
  ModelConfig mc;
  Model model(mc, 6);
  TrainConfig cfg = tiny_config();
  cfg.epochs = 1;
  cfg.validate_each_epoch = true;
  const TrainHistory history = train(model, train_data, val_data, cfg);
  REQUIRE(history.epochs.size() == 1);
  REQUIRE(history.epochs[0].val.has_value());
  CHECK(history.epochs[0].val->rmse > 0.0);
  CHECK(history.epochs[0].val->valid_pixel_count > 0);
}
