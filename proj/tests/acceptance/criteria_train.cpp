#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "acceptance.hpp"
#include "dmlrn/dataset.hpp"
#include "dmlrn/scene.hpp"
#include "dmlrn/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace dmlrn::acceptance {

namespace {

// ---------------------------------------------------------------------------
// the fixed synthetic benchmark protocol shared by criteria 8-10:
// 512 train / 64 test scenes at 64x64, T0 size tier, 20 epochs, 3 seeds

constexpr int kTrainScenes = 512;
constexpr int kTestScenes = 64;
constexpr int kImageSize = 64;
constexpr int kEpochs = 20;
constexpr uint64_t kSeeds[3] = {1, 2, 3};

struct Bench {
  std::vector<RGBDSample> train;
  std::vector<RGBDSample> test;
};

Bench make_bench() {
  Bench b;
  b.train.reserve(kTrainScenes);
  b.test.reserve(kTestScenes);
  SceneConfig cfg;
  cfg.height = kImageSize;
  cfg.width = kImageSize;
  cfg.primitive_count = 6;
  for (int i = 0; i < kTrainScenes; ++i) {
    cfg.rng_seed = 20000 + i;
    b.train.push_back(generate_scene(cfg));
  }
  for (int i = 0; i < kTestScenes; ++i) {
    cfg.rng_seed = 90000 + i;
    b.test.push_back(generate_scene(cfg));
  }
  return b;
}

CorruptionConfig bench_corruption() {
  CorruptionConfig c;
  c.k = 500.0;
  c.min_size = 10;
  c.area_threshold = 800;  // 64x64 scale; zeroes roughly a third of a scene
  c.spatter_prob = 0.07;
  c.gaussian_presmooth_sigma = 0.8;
  return c;
}

TrainConfig bench_train_config(uint64_t seed, Strategy strategy) {
  TrainConfig cfg;
  cfg.epochs = kEpochs;
  cfg.batch_size = 8;
  cfg.seed = seed;
  // the benchmark needs every model trained to usefulness inside 20 desk
  // epochs: anchored log-L1 (RMSE needs an absolute scale the pairwise
  // losses do not constrain) and a desk-scale constant rate
  cfg.lr = 1e-3;
  cfg.loss = LossKind::LOG_L1;
  cfg.strategy = strategy;
  cfg.corruption = bench_corruption();
  cfg.augment_flip = true;
  cfg.validate_each_epoch = false;
  return cfg;
}

ModelConfig bench_model_config(Variant variant, SizeTier tier) {
  ModelConfig cfg;
  cfg.variant = variant;
  cfg.tier = tier;
  return resolve(cfg);
}

/// Identical corrupted test inputs for every evaluated model.
std::vector<RGBDSample> make_test_inputs(const std::vector<RGBDSample>& test,
                                         Strategy strategy) {
  TrainConfig eval_cfg = bench_train_config(/*seed=*/777, strategy);
  std::vector<RGBDSample> inputs;
  inputs.reserve(test.size());
  for (size_t i = 0; i < test.size(); ++i)
    inputs.push_back(make_eval_input(test[i], strategy, eval_cfg, i));
  return inputs;
}

double mean_test_rmse(Model& model, const std::vector<RGBDSample>& inputs,
                      const std::vector<RGBDSample>& test) {
  EvalProfile profile;
  profile.max_depth = model.config().max_depth;
  double acc = 0.0;
  for (size_t i = 0; i < inputs.size(); ++i) {
    const DepthMap pred = predict_depth(model, inputs[i]);
    acc += evaluate(pred, *test[i].gt, profile).rmse;
  }
  return acc / static_cast<double>(inputs.size());
}

/// Copy the sensor input and fill holes with the per-image mean of the
/// valid pixels.
double baseline_rmse(const std::vector<RGBDSample>& inputs,
                     const std::vector<RGBDSample>& test) {
  EvalProfile profile;
  double acc = 0.0;
  for (size_t i = 0; i < inputs.size(); ++i) {
    const DepthMap& sensor = inputs[i].sensor;
    double mean = 0.0;
    int64_t count = 0;
    for (double x : sensor.v)
      if (x > 0.0) {
        mean += x;
        ++count;
      }
    mean = count > 0 ? mean / count : 1.0;
    DepthMap pred = sensor;
    for (double& x : pred.v)
      if (x <= 0.0) x = mean;
    acc += evaluate(pred, *test[i].gt, profile).rmse;
  }
  return acc / static_cast<double>(inputs.size());
}

double train_and_score(const Bench& bench, Variant variant, SizeTier tier,
                       uint64_t seed, Strategy strategy,
                       const std::vector<RGBDSample>& test_inputs) {
  Model model(bench_model_config(variant, tier), seed);
  const TrainConfig cfg = bench_train_config(seed, strategy);
  train(model, bench.train, {}, cfg);
  return mean_test_rmse(model, test_inputs, bench.test);
}

double mean3(const double* v) { return (v[0] + v[1] + v[2]) / 3.0; }

}  // namespace

Result criterion8_table1_trend() {
  const auto t0 = std::chrono::steady_clock::now();
  const Bench bench = make_bench();
  const auto test_inputs = make_test_inputs(bench.test, Strategy::SemiDenseCorruption);
  const double base = baseline_rmse(test_inputs, bench.test);

  double dm[3], lrn[3];
  for (int s = 0; s < 3; ++s) {
    dm[s] = train_and_score(bench, Variant::DM_LRN, SizeTier::T0, kSeeds[s],
                            Strategy::SemiDenseCorruption, test_inputs);
    std::printf("  seed %llu DM_LRN rmse %.4f\n", (unsigned long long)kSeeds[s], dm[s]);
    std::fflush(stdout);
    lrn[s] = train_and_score(bench, Variant::LRN, SizeTier::T0, kSeeds[s],
                             Strategy::SemiDenseCorruption, test_inputs);
    std::printf("  seed %llu LRN    rmse %.4f\n", (unsigned long long)kSeeds[s], lrn[s]);
    std::fflush(stdout);
  }
  const double mean_dm = mean3(dm), mean_lrn = mean3(lrn);
  const double minutes =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / 60.0;

  Result r;
  r.pass = mean_dm <= mean_lrn && mean_dm <= 0.7 * base && mean_lrn <= 0.7 * base &&
           minutes < 90.0;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "DM_LRN %.4f m, LRN %.4f m, mean-fill baseline %.4f m, %.1f min",
                mean_dm, mean_lrn, base, minutes);
  r.detail = buf;
  return r;
}

Result criterion9_backbone_trend() {
  const Bench bench = make_bench();
  const auto test_inputs = make_test_inputs(bench.test, Strategy::SemiDenseCorruption);

  const SizeTier tiers[3] = {SizeTier::T0, SizeTier::T1, SizeTier::T2};
  double rmse[3][3];  // [seed][tier]
  for (int s = 0; s < 3; ++s)
    for (int t = 0; t < 3; ++t) {
      rmse[s][t] = train_and_score(bench, Variant::DM_LRN, tiers[t], kSeeds[s],
                                   Strategy::SemiDenseCorruption, test_inputs);
      std::printf("  seed %llu T%d rmse %.4f\n", (unsigned long long)kSeeds[s], t,
                  rmse[s][t]);
      std::fflush(stdout);
    }

  int monotone_seeds = 0;
  for (int s = 0; s < 3; ++s)
    if (rmse[s][0] >= rmse[s][1] && rmse[s][1] >= rmse[s][2]) ++monotone_seeds;

  Result r;
  r.pass = monotone_seeds >= 2;
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "non-increasing in %d/3 seeds (T0/T1/T2: %.3f/%.3f/%.3f, %.3f/%.3f/%.3f, "
                "%.3f/%.3f/%.3f)",
                monotone_seeds, rmse[0][0], rmse[0][1], rmse[0][2], rmse[1][0], rmse[1][1],
                rmse[1][2], rmse[2][0], rmse[2][1], rmse[2][2]);
  r.detail = buf;
  return r;
}

Result criterion10_strategy_value() {
  const Bench bench = make_bench();
  // both models face the corrupted-input evaluation protocol
  const auto test_inputs = make_test_inputs(bench.test, Strategy::SemiDenseCorruption);

  double semi[3], sparse[3];
  for (int s = 0; s < 3; ++s) {
    semi[s] = train_and_score(bench, Variant::DM_LRN, SizeTier::T0, kSeeds[s],
                              Strategy::SemiDenseCorruption, test_inputs);
    std::printf("  seed %llu semi-dense rmse %.4f\n", (unsigned long long)kSeeds[s],
                semi[s]);
    std::fflush(stdout);
    sparse[s] = train_and_score(bench, Variant::DM_LRN, SizeTier::T0, kSeeds[s],
                                Strategy::UniformSparse, test_inputs);
    std::printf("  seed %llu sparse-500 rmse %.4f\n", (unsigned long long)kSeeds[s],
                sparse[s]);
    std::fflush(stdout);
  }

  Result r;
  r.pass = mean3(semi) < mean3(sparse);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "semi-dense %.4f m vs sparse-500 %.4f m", mean3(semi),
                mean3(sparse));
  r.detail = buf;
  return r;
}

// ---------------------------------------------------------------------------
// criterion 11: the CLI reruns and resumes reproducibly

namespace {

#ifdef DMLRN_CLI_PATH
constexpr const char* kCli = DMLRN_CLI_PATH;
#else
constexpr const char* kCli = "dmlrn";
#endif

int run_cli(const std::string& args) {
  const std::string cmd = std::string(kCli) + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing " + path.string());
  json j;
  in >> j;
  return j;
}

bool files_identical(const fs::path& a, const fs::path& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  if (!fa || !fb) return false;
  std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
  std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
  return sa == sb;
}

double final_loss(const fs::path& history) {
  const json h = read_json(history);
  return h.at("epochs").back().at("mean_train_loss").get<double>();
}

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

Result criterion11_determinism() {
  const fs::path root = fs::temp_directory_path() / "dmlrn_acceptance_c11";
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string base = root.string();

  Result r;
  r.pass = false;

  // identical datasets from identical seeds
  if (run_cli("--seed 5 --out " + base + "/data gen-data -n 24 --height 32 --width 32") ||
      run_cli("--seed 5 --out " + base + "/data2 gen-data -n 24 --height 32 --width 32")) {
    r.detail = "gen-data failed";
    return r;
  }
  for (const char* rel : {"rgb/000000.png", "depth/000011.png", "gt/000023.png"})
    if (!files_identical(fs::path(base) / "data" / rel, fs::path(base) / "data2" / rel)) {
      r.detail = std::string("gen-data rerun differs at ") + rel;
      return r;
    }

  // corrupt is deterministic per seed
  const std::string ccommon = " corrupt --data " + base + "/data --area-threshold 60 "
                              "--spatter-prob 0.05 --min-size 6";
  if (run_cli("--seed 9 --out " + base + "/c1" + ccommon) ||
      run_cli("--seed 9 --out " + base + "/c2" + ccommon)) {
    r.detail = "corrupt failed";
    return r;
  }
  if (!files_identical(fs::path(base) / "c1/depth/000007.png",
                       fs::path(base) / "c2/depth/000007.png")) {
    r.detail = "corrupt rerun differs";
    return r;
  }

  // train twice with one config; histories must agree
  const std::string tcommon = " train --data " + base + "/c1 --epochs 4 --batch-size 4 "
                              "--checkpoint-every 2 --strategy semi_dense_corruption";
  if (run_cli("--seed 7 --out " + base + "/run1" + tcommon) ||
      run_cli("--seed 7 --out " + base + "/run2" + tcommon)) {
    r.detail = "train failed";
    return r;
  }
  const double l1 = final_loss(fs::path(base) / "run1/history.json");
  const double l2 = final_loss(fs::path(base) / "run2/history.json");
  if (!close_rel(l1, l2, 1e-5)) {
    r.detail = "train rerun loss differs: " + std::to_string(l1) + " vs " + std::to_string(l2);
    return r;
  }

  // resume from the midpoint checkpoint reproduces the trajectory
  if (run_cli("--seed 7 --out " + base + "/run3" + tcommon + " --resume " + base +
              "/run1/checkpoints/epoch_002.ckpt")) {
    r.detail = "resume failed";
    return r;
  }
  const double l3 = final_loss(fs::path(base) / "run3/history.json");
  if (!close_rel(l1, l3, 1e-5)) {
    r.detail = "resumed loss differs: " + std::to_string(l1) + " vs " + std::to_string(l3);
    return r;
  }

  // eval twice; aggregate metrics must agree
  const std::string ecommon = " eval --checkpoint " + base +
                              "/run1/checkpoints/final.ckpt --data " + base +
                              "/c1 --plots 0 --check-oracle";
  if (run_cli("--out " + base + "/e1" + ecommon) ||
      run_cli("--out " + base + "/e2" + ecommon)) {
    r.detail = "eval failed";
    return r;
  }
  const json e1 = read_json(fs::path(base) / "e1/aggregate.json");
  const json e2 = read_json(fs::path(base) / "e2/aggregate.json");
  if (!close_rel(e1.at("mean").at("rmse").get<double>(),
                 e2.at("mean").at("rmse").get<double>(), 1e-5)) {
    r.detail = "eval rerun rmse differs";
    return r;
  }

  fs::remove_all(root);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "loss %.6f reproduced on rerun and resume; eval rmse %.4f stable", l1,
                e1.at("mean").at("rmse").get<double>());
  r.pass = true;
  r.detail = buf;
  return r;
}

}  // namespace dmlrn::acceptance
