#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dmlrn/corruption.hpp"
#include "dmlrn/losses.hpp"
#include "dmlrn/metrics.hpp"
#include "dmlrn/net/checkpoint.hpp"
#include "dmlrn/net/model.hpp"

namespace dmlrn {

/// How a training input/supervision pair is derived from a stored sample.
enum class Strategy { SemiDenseCorruption, UniformSparse, None };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

struct TrainConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double weight_decay = 0.0;
  double adam_epsilon = 1e-8;
  int epochs = 20;
  int batch_size = 8;
  int bn_freeze_after_epoch = 1;
  LossKind loss = LossKind::PAIRWISE_LOG_L1;
  uint64_t seed = 0;
  CorruptionConfig corruption;
  bool augment_flip = true;
  Strategy strategy = Strategy::SemiDenseCorruption;
  int sparse_points = 500;
  bool validate_each_epoch = true;
};

void validate(const TrainConfig& cfg);

struct EpochStats {
  int epoch = 0;  // 1-based
  double mean_train_loss = 0.0;
  std::optional<MetricReport> val;
  double seconds = 0.0;
  uint64_t epoch_seed = 0;  // functional rng checkpoint for this epoch
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
};

class Adam {
 public:
  Adam(const TrainConfig& cfg) : cfg_(cfg) {}
  void step(const std::vector<Param*>& params);
  void to_archive(Archive& archive) const;
  void from_archive(const Archive& archive, const std::vector<Param*>& params);

 private:
  TrainConfig cfg_;
  int64_t t_ = 0;
  std::map<std::string, Tensor> m_, v_;
};

struct TrainingDiverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Derive the training pair: corrupted (or sparsified) input plus the
/// untouched supervision target. The target is gt when present, the raw
/// sensor map otherwise; it is never densified or modified.
std::pair<RGBDSample, DepthMap> make_training_pair(const RGBDSample& sample,
                                                   Strategy strategy,
                                                   const TrainConfig& cfg,
                                                   uint64_t pair_seed);

using EpochCallback = std::function<void(const EpochStats&, Model&, const Adam&)>;

/// Minibatch Adam over the configured loss with on-the-fly input
/// corruption. Normalization freezes after cfg.bn_freeze_after_epoch.
/// Fully reproducible per (seed, config, data); rng streams are derived
/// functionally from (seed, epoch, sample), so resuming from a checkpoint
/// continues the identical trajectory.
TrainHistory train(Model& model, const std::vector<RGBDSample>& train_set,
                   const std::vector<RGBDSample>& val_set, const TrainConfig& cfg,
                   int start_epoch = 0, Adam* optimizer = nullptr,
                   const EpochCallback& on_epoch = {});

/// Deterministic per-sample validation/test input for a given base seed.
RGBDSample make_eval_input(const RGBDSample& sample, Strategy strategy,
                           const TrainConfig& cfg, uint64_t sample_index);

/// Full trainer state for --resume: model + Adam moments + epoch counter.
void save_train_checkpoint(const std::string& path, Model& model, const Adam& adam,
                           int completed_epochs, const std::string& train_config_json);
struct TrainCheckpoint {
  Archive archive;
  int completed_epochs = 0;
  std::string train_config_json;
};
TrainCheckpoint load_train_checkpoint(const std::string& path);

}  // namespace dmlrn
