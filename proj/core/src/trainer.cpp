#include "dmlrn/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "dmlrn/image_ops.hpp"

namespace dmlrn {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::SemiDenseCorruption: return "semi_dense_corruption";
    case Strategy::UniformSparse: return "uniform_sparse";
    case Strategy::None: return "none";
  }
  throw std::logic_error("bad Strategy");
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "semi_dense_corruption") return Strategy::SemiDenseCorruption;
  if (s == "uniform_sparse") return Strategy::UniformSparse;
  if (s == "none") return Strategy::None;
  throw std::invalid_argument("unknown strategy: " + s);
}

void validate(const TrainConfig& cfg) {
  // lr 0 is allowed: a no-op optimizer is useful for diagnostics
  if (cfg.lr < 0.0) throw std::invalid_argument("TrainConfig: lr must be >= 0");
  if (cfg.epochs < 1) throw std::invalid_argument("TrainConfig: epochs must be >= 1");
  if (cfg.batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
  if (cfg.sparse_points < 0)
    throw std::invalid_argument("TrainConfig: sparse_points must be >= 0");
  validate(cfg.corruption);
}

// ---------------------------------------------------------------------------
// Adam

void Adam::step(const std::vector<Param*>& params) {
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (Param* p : params) {
    if (!p->trainable) continue;
    Tensor& m = m_[p->name];
    Tensor& v = v_[p->name];
    if (m.size() != p->value.size()) {
      m = Tensor(p->value.n, p->value.c, p->value.h, p->value.w);
      v = Tensor(p->value.n, p->value.c, p->value.h, p->value.w);
    }
    for (size_t i = 0; i < p->value.v.size(); ++i) {
      double g = p->grad.v[i];
      if (cfg_.weight_decay != 0.0) g += cfg_.weight_decay * p->value.v[i];
      m.v[i] = cfg_.beta1 * m.v[i] + (1.0 - cfg_.beta1) * g;
      v.v[i] = cfg_.beta2 * v.v[i] + (1.0 - cfg_.beta2) * g * g;
      const double mhat = m.v[i] / bc1;
      const double vhat = v.v[i] / bc2;
      p->value.v[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.adam_epsilon);
    }
  }
}

void Adam::to_archive(Archive& archive) const {
  archive.texts["adam/t"] = std::to_string(t_);
  for (const auto& [name, t] : m_) archive.tensors["adam/m/" + name] = t;
  for (const auto& [name, t] : v_) archive.tensors["adam/v/" + name] = t;
}

void Adam::from_archive(const Archive& archive, const std::vector<Param*>& params) {
  const auto it = archive.texts.find("adam/t");
  if (it == archive.texts.end()) throw std::runtime_error("checkpoint: missing adam/t");
  t_ = std::stoll(it->second);
  m_.clear();
  v_.clear();
  for (Param* p : params) {
    const auto mi = archive.tensors.find("adam/m/" + p->name);
    const auto vi = archive.tensors.find("adam/v/" + p->name);
    if (mi != archive.tensors.end()) m_[p->name] = mi->second;
    if (vi != archive.tensors.end()) v_[p->name] = vi->second;
  }
}

// ---------------------------------------------------------------------------
// pairs

namespace {

const DepthMap& target_of(const RGBDSample& sample) {
  return sample.gt ? *sample.gt : sample.sensor;
}

}  // namespace

std::pair<RGBDSample, DepthMap> make_training_pair(const RGBDSample& sample,
                                                   Strategy strategy,
                                                   const TrainConfig& cfg,
                                                   uint64_t pair_seed) {
  const DepthMap& target = target_of(sample);
  bool any_valid = false;
  for (double x : target.v)
    if (x > 0.0) {
      any_valid = true;
      break;
    }
  if (!any_valid)
    throw std::invalid_argument("make_training_pair: target has no valid pixel");

  RGBDSample input;
  input.rgb = sample.rgb;
  switch (strategy) {
    case Strategy::SemiDenseCorruption: {
      CorruptionConfig cc = cfg.corruption;
      cc.rng_seed = pair_seed;
      input.sensor = corrupt_depth(target, sample.rgb, cc);
      break;
    }
    case Strategy::UniformSparse: {
      Rng rng(pair_seed);
      input.sensor = sample_uniform_sparse(target, cfg.sparse_points, rng);
      break;
    }
    case Strategy::None: {
      if (!sample.gt)
        throw std::invalid_argument("make_training_pair: strategy none requires gt");
      input.sensor = sample.sensor;
      break;
    }
  }
  input.mask = mask_from_depth(input.sensor);
  return {std::move(input), strategy == Strategy::None ? *sample.gt : target};
}

RGBDSample make_eval_input(const RGBDSample& sample, Strategy strategy,
                           const TrainConfig& cfg, uint64_t sample_index) {
  const uint64_t s = derive_seed(cfg.seed, 0x65764cULL /*"eval"*/, sample_index);
  return make_training_pair(sample, strategy, cfg, s).first;
}

// ---------------------------------------------------------------------------
// train loop

TrainHistory train(Model& model, const std::vector<RGBDSample>& train_set,
                   const std::vector<RGBDSample>& val_set, const TrainConfig& cfg,
                   int start_epoch, Adam* optimizer, const EpochCallback& on_epoch) {
  validate(cfg);
  if (train_set.empty()) throw std::invalid_argument("train: empty training set");
  for (const RGBDSample& s : train_set) {
    const DepthMap& t = target_of(s);
    if (std::none_of(t.v.begin(), t.v.end(), [](double x) { return x > 0.0; }))
      throw std::invalid_argument("train: sample with empty supervision set");
  }

  Adam local_adam(cfg);
  Adam& adam = optimizer ? *optimizer : local_adam;
  model.set_norm_frozen(start_epoch >= cfg.bn_freeze_after_epoch);

  TrainHistory history;
  for (int epoch = start_epoch + 1; epoch <= cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    const uint64_t epoch_seed = derive_seed(cfg.seed, 0x45504fULL /*"epo"*/, epoch);

    std::vector<size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), size_t{0});
    Rng shuffle_rng(derive_seed(epoch_seed, 1));
    for (size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[shuffle_rng.uniform_below(i)]);

    double loss_sum = 0.0;
    int64_t step_count = 0;

    for (size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
      const size_t end = std::min(order.size(), begin + cfg.batch_size);
      const int bs = static_cast<int>(end - begin);

      std::vector<RGBDSample> inputs;
      std::vector<DepthMap> targets;
      inputs.reserve(bs);
      targets.reserve(bs);
      for (size_t k = begin; k < end; ++k) {
        const size_t idx = order[k];
        const uint64_t pair_seed = derive_seed(epoch_seed, 2, idx);
        const RGBDSample* src = &train_set[idx];
        RGBDSample flipped;
        if (cfg.augment_flip) {
          Rng flip_rng(derive_seed(epoch_seed, 3, idx));
          if (flip_rng.uniform() < 0.5) {
            flipped = hflip(*src);
            src = &flipped;
          }
        }
        auto [input, target] = make_training_pair(*src, cfg.strategy, cfg, pair_seed);
        inputs.push_back(std::move(input));
        targets.push_back(std::move(target));
      }

      std::vector<const RGBDSample*> batch_ptrs;
      for (const auto& s : inputs) batch_ptrs.push_back(&s);
      const Tensor in = make_input_tensor(batch_ptrs, model.config());
      const Tensor mask = make_mask_tensor(batch_ptrs);

      const Tensor pred = model.forward(in, mask, /*training=*/true);

      Tensor dpred(pred.n, pred.c, pred.h, pred.w);
      double batch_loss = 0.0;
      for (int n = 0; n < bs; ++n) {
        LogDepthMap pl(pred.h, pred.w);
        std::copy(pred.sample(n), pred.sample(n) + pl.v.size(), pl.v.begin());
        const ValidSet vs = build_valid_set(pl, targets[n]);
        batch_loss += loss_value(cfg.loss, vs);
        const std::vector<double> g = loss_grad(cfg.loss, vs);
        double* d = dpred.sample(n);
        for (size_t i = 0; i < vs.indices.size(); ++i)
          d[vs.indices[i]] = g[i] / bs;
      }
      batch_loss /= bs;
      if (!std::isfinite(batch_loss))
        throw TrainingDiverged("train: non-finite loss at epoch " + std::to_string(epoch));

      model.zero_grad();
      model.backward(dpred);
      adam.step(model.params());

      loss_sum += batch_loss;
      ++step_count;
    }

    if (epoch == cfg.bn_freeze_after_epoch) model.set_norm_frozen(true);

    EpochStats stats;
    stats.epoch = epoch;
    stats.mean_train_loss = loss_sum / static_cast<double>(step_count);
    stats.epoch_seed = epoch_seed;

    if (cfg.validate_each_epoch && !val_set.empty()) {
      std::vector<MetricReport> reports;
      reports.reserve(val_set.size());
      for (size_t i = 0; i < val_set.size(); ++i) {
        const RGBDSample input = make_eval_input(val_set[i], cfg.strategy, cfg, i);
        const DepthMap pred_depth = predict_depth(model, input);
        EvalProfile profile;
        profile.max_depth = model.config().max_depth;
        reports.push_back(evaluate(pred_depth, target_of(val_set[i]), profile));
      }
      stats.val = mean_report(reports);
    }

    stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    history.epochs.push_back(stats);
    if (on_epoch) on_epoch(stats, model, adam);
  }
  return history;
}

// ---------------------------------------------------------------------------
// checkpointing

void save_train_checkpoint(const std::string& path, Model& model, const Adam& adam,
                           int completed_epochs, const std::string& train_config_json) {
  Archive archive;
  model_to_archive(model, archive);
  adam.to_archive(archive);
  archive.texts["trainer/completed_epochs"] = std::to_string(completed_epochs);
  archive.texts["trainer/config"] = train_config_json;
  save_archive(archive, path);
}

TrainCheckpoint load_train_checkpoint(const std::string& path) {
  TrainCheckpoint ckpt;
  ckpt.archive = load_archive(path);
  const auto it = ckpt.archive.texts.find("trainer/completed_epochs");
  if (it == ckpt.archive.texts.end())
    throw std::runtime_error("checkpoint: not a trainer checkpoint (missing epoch)");
  ckpt.completed_epochs = std::stoi(it->second);
  const auto jt = ckpt.archive.texts.find("trainer/config");
  if (jt != ckpt.archive.texts.end()) ckpt.train_config_json = jt->second;
  return ckpt;
}

}  // namespace dmlrn
