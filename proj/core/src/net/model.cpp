#include "dmlrn/net/model.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

using nlohmann::json;

namespace dmlrn {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::DM_LRN: return "DM_LRN";
    case Variant::LRN: return "LRN";
    case Variant::LRN_MASK: return "LRN_MASK";
  }
  throw std::logic_error("bad Variant");
}

Variant variant_from_string(const std::string& s) {
  if (s == "DM_LRN" || s == "dm_lrn") return Variant::DM_LRN;
  if (s == "LRN" || s == "lrn") return Variant::LRN;
  if (s == "LRN_MASK" || s == "lrn_mask") return Variant::LRN_MASK;
  throw std::invalid_argument("unknown variant: " + s);
}

std::string to_string(SizeTier t) {
  return "T" + std::to_string(static_cast<int>(t));
}

SizeTier tier_from_string(const std::string& s) {
  if (s.size() == 2 && (s[0] == 'T' || s[0] == 't') && s[1] >= '0' && s[1] <= '4')
    return static_cast<SizeTier>(s[1] - '0');
  throw std::invalid_argument("unknown size tier: " + s);
}

namespace {

struct TierScale {
  double width;
  double depth;
};

// width/depth multipliers per tier; parameter counts grow strictly
constexpr TierScale kTierScale[5] = {
    {1.0, 1.0}, {1.5, 1.0}, {2.0, 1.5}, {2.5, 2.0}, {3.0, 2.5}};

int scale_channels(int base, double mult) {
  const int c = static_cast<int>(std::lround(base * mult / 4.0)) * 4;
  return std::max(c, 8);
}

int scale_blocks(int base, double mult) {
  return std::max(1, static_cast<int>(std::lround(base * mult)));
}

}  // namespace

ModelConfig resolve(ModelConfig cfg) {
  const TierScale s = kTierScale[static_cast<int>(cfg.tier)];
  if (cfg.stem_channels == 0) cfg.stem_channels = scale_channels(8, s.width);
  if (cfg.encoder_stages.empty()) {
    constexpr int base_ch[4] = {12, 16, 24, 32};
    for (int i = 0; i < 4; ++i)
      cfg.encoder_stages.push_back(
          {scale_channels(base_ch[i], s.width), scale_blocks(1, s.depth), 2});
  }
  if (cfg.encoder_stages.size() != 4)
    throw std::invalid_argument("ModelConfig: expected 4 encoder stages after the stem");
  if (cfg.decoder_channels == 0) cfg.decoder_channels = scale_channels(16, s.width);
  return cfg;
}

int input_channels(const ModelConfig& cfg) {
  return cfg.variant == Variant::LRN_MASK ? 5 : 4;
}

std::string to_json_string(const ModelConfig& cfg) {
  json j;
  j["variant"] = to_string(cfg.variant);
  j["tier"] = to_string(cfg.tier);
  j["stem_channels"] = cfg.stem_channels;
  json stages = json::array();
  for (const auto& s : cfg.encoder_stages)
    stages.push_back({{"channels", s.channels}, {"blocks", s.blocks}, {"stride", s.stride}});
  j["encoder_stages"] = stages;
  j["decoder_channels"] = cfg.decoder_channels;
  j["mask_channels"] = cfg.mask_channels;
  j["leaky_slope"] = cfg.leaky_slope;
  j["bn_epsilon"] = cfg.bn_epsilon;
  j["bn_momentum"] = cfg.bn_momentum;
  j["min_depth"] = cfg.min_depth;
  j["max_depth"] = cfg.max_depth;
  return j.dump();
}

ModelConfig model_config_from_json(const std::string& text) {
  const json j = json::parse(text);
  ModelConfig cfg;
  cfg.variant = variant_from_string(j.at("variant").get<std::string>());
  cfg.tier = tier_from_string(j.at("tier").get<std::string>());
  cfg.stem_channels = j.at("stem_channels").get<int>();
  for (const auto& s : j.at("encoder_stages"))
    cfg.encoder_stages.push_back({s.at("channels").get<int>(), s.at("blocks").get<int>(),
                                  s.at("stride").get<int>()});
  cfg.decoder_channels = j.at("decoder_channels").get<int>();
  cfg.mask_channels = j.at("mask_channels").get<int>();
  cfg.leaky_slope = j.at("leaky_slope").get<double>();
  cfg.bn_epsilon = j.at("bn_epsilon").get<double>();
  cfg.bn_momentum = j.at("bn_momentum").get<double>();
  cfg.min_depth = j.at("min_depth").get<double>();
  cfg.max_depth = j.at("max_depth").get<double>();
  return cfg;
}

// ---------------------------------------------------------------------------
// MBConv

MBConv::MBConv(const std::string& name, int in_c, int out_c, int stride,
               const ModelConfig& cfg)
    : expand_(name + ".expand", in_c, in_c * 4, 1, 1, 0, 1, false),
      dw_(name + ".dw", in_c * 4, in_c * 4, 3, stride, 1, in_c * 4, false),
      project_(name + ".project", in_c * 4, out_c, 1, 1, 0, 1, false),
      bn1_(name + ".bn1", in_c * 4, true, cfg.bn_epsilon, cfg.bn_momentum),
      bn2_(name + ".bn2", in_c * 4, true, cfg.bn_epsilon, cfg.bn_momentum),
      bn3_(name + ".bn3", out_c, true, cfg.bn_epsilon, cfg.bn_momentum),
      act1_(cfg.leaky_slope), act2_(cfg.leaky_slope),
      residual_(stride == 1 && in_c == out_c) {}

Tensor MBConv::forward(const Tensor& x, NormMode mode) {
  Tensor t = act1_.forward(bn1_.forward(expand_.forward(x), mode));
  t = act2_.forward(bn2_.forward(dw_.forward(t), mode));
  t = bn3_.forward(project_.forward(t), mode);
  if (residual_) t += x;
  return t;
}

Tensor MBConv::backward(const Tensor& gout) {
  Tensor d = project_.backward(bn3_.backward(gout));
  d = dw_.backward(bn2_.backward(act2_.backward(d)));
  d = expand_.backward(bn1_.backward(act1_.backward(d)));
  if (residual_) d += gout;
  return d;
}

void MBConv::collect(std::vector<Param*>& params,
                     std::vector<std::pair<std::string, Tensor*>>& buffers,
                     std::vector<Norm2d*>& norms) {
  expand_.collect(params);
  bn1_.collect(params);
  dw_.collect(params);
  bn2_.collect(params);
  project_.collect(params);
  bn3_.collect(params);
  for (Norm2d* n : {&bn1_, &bn2_, &bn3_}) {
    n->collect_buffers(buffers);
    norms.push_back(n);
  }
}

void MBConv::init(Rng& rng) {
  expand_.init_kaiming(rng);
  dw_.init_kaiming(rng);
  project_.init_kaiming(rng);
}

// ---------------------------------------------------------------------------
// CrpBlock

CrpBlock::CrpBlock(const std::string& name, int channels)
    : conv1_(name + ".c1", channels, channels, 1, 1, 0, 1, false),
      conv2_(name + ".c2", channels, channels, 1, 1, 0, 1, false) {}

Tensor CrpBlock::forward(const Tensor& x) {
  Tensor h1 = pool1_.forward(x);
  Tensor out = x;
  out += conv1_.forward(h1);
  Tensor h2 = pool2_.forward(h1);
  out += conv2_.forward(h2);
  return out;
}

Tensor CrpBlock::backward(const Tensor& gout) {
  Tensor dh1 = pool2_.backward(conv2_.backward(gout));
  dh1 += conv1_.backward(gout);
  Tensor dx = pool1_.backward(dh1);
  dx += gout;
  return dx;
}

void CrpBlock::collect(std::vector<Param*>& params) {
  conv1_.collect(params);
  conv2_.collect(params);
}

void CrpBlock::init(Rng&) {
  // zero pooling branches: the chain starts as the identity and the convs
  // grow in from their own gradients
  conv1_.init_zero();
  conv2_.init_zero();
}

// ---------------------------------------------------------------------------
// FuseBlock

FuseBlock::FuseBlock(const std::string& name, int channels)
    : low_conv_(name + ".low", channels, channels, 1, 1, 0, 1, false),
      high_conv_(name + ".high", channels, channels, 1, 1, 0, 1, false) {}

Tensor FuseBlock::forward(const Tensor& low, const Tensor& high) {
  if (low.h > high.h || low.w > high.w)
    throw std::invalid_argument("FuseBlock: low input must be coarser or equal");
  low_h_ = low.h;
  low_w_ = low.w;
  Tensor out = nearest_resize(low_conv_.forward(low), high.h, high.w);
  out += high_conv_.forward(high);
  return out;
}

std::pair<Tensor, Tensor> FuseBlock::backward(const Tensor& gout) {
  Tensor dhigh = high_conv_.backward(gout);
  Tensor dlow = low_conv_.backward(nearest_resize_backward(gout, low_h_, low_w_));
  return {std::move(dlow), std::move(dhigh)};
}

void FuseBlock::collect(std::vector<Param*>& params) {
  low_conv_.collect(params);
  high_conv_.collect(params);
}

void FuseBlock::init(Rng& rng) {
  low_conv_.init_kaiming(rng);
  high_conv_.init_kaiming(rng);
}

// ---------------------------------------------------------------------------
// ResBlock

ResBlock::ResBlock(const std::string& name, int in_c, int out_c, bool modulated,
                   const ModelConfig& cfg)
    : modulated_(modulated), has_skip_conv_(in_c != out_c),
      act1_(cfg.leaky_slope), act2_(cfg.leaky_slope),
      conv1_(name + ".conv1", in_c, out_c, 3, 1, 1, 1, true),
      conv2_(name + ".conv2", out_c, out_c, 3, 1, 1, 1, true) {
  if (modulated_) {
    spade1_ = std::make_unique<Spade>(name + ".spade1", in_c, cfg.mask_channels,
                                      cfg.bn_epsilon, cfg.bn_momentum);
    spade2_ = std::make_unique<Spade>(name + ".spade2", out_c, cfg.mask_channels,
                                      cfg.bn_epsilon, cfg.bn_momentum);
    if (has_skip_conv_)
      spade_skip_ = std::make_unique<Spade>(name + ".spade_skip", in_c,
                                            cfg.mask_channels, cfg.bn_epsilon,
                                            cfg.bn_momentum);
  } else {
    norm1_ = std::make_unique<Norm2d>(name + ".norm1", in_c, false, cfg.bn_epsilon,
                                      cfg.bn_momentum);
    norm2_ = std::make_unique<Norm2d>(name + ".norm2", out_c, false, cfg.bn_epsilon,
                                      cfg.bn_momentum);
    if (has_skip_conv_)
      norm_skip_ = std::make_unique<Norm2d>(name + ".norm_skip", in_c, false,
                                            cfg.bn_epsilon, cfg.bn_momentum);
  }
  if (has_skip_conv_)
    skip_conv_ = std::make_unique<Conv2d>(name + ".skip", in_c, out_c, 1, 1, 0, 1, false);
}

Tensor ResBlock::forward(const Tensor& x, const Tensor& mask_feat, NormMode mode) {
  Tensor t = modulated_ ? spade1_->forward(x, mask_feat, mode) : norm1_->forward(x, mode);
  t = conv1_.forward(act1_.forward(t));
  t = modulated_ ? spade2_->forward(t, mask_feat, mode) : norm2_->forward(t, mode);
  t = conv2_.forward(act2_.forward(t));
  if (has_skip_conv_) {
    Tensor s = modulated_ ? spade_skip_->forward(x, mask_feat, mode)
                          : norm_skip_->forward(x, mode);
    t += skip_conv_->forward(s);
  } else {
    t += x;
  }
  return t;
}

Tensor ResBlock::backward(const Tensor& gout, Tensor& dmask_feat) {
  Tensor dx;
  if (has_skip_conv_) {
    Tensor ds = skip_conv_->backward(gout);
    dx = modulated_ ? spade_skip_->backward(ds, dmask_feat) : norm_skip_->backward(ds);
  } else {
    dx = gout;
  }
  Tensor d = act2_.backward(conv2_.backward(gout));
  d = modulated_ ? spade2_->backward(d, dmask_feat) : norm2_->backward(d);
  d = act1_.backward(conv1_.backward(d));
  d = modulated_ ? spade1_->backward(d, dmask_feat) : norm1_->backward(d);
  dx += d;
  return dx;
}

void ResBlock::collect(std::vector<Param*>& params,
                       std::vector<std::pair<std::string, Tensor*>>& buffers,
                       std::vector<Norm2d*>& norms) {
  auto take_norm = [&](Norm2d* n) {
    if (!n) return;
    n->collect(params);
    n->collect_buffers(buffers);
    norms.push_back(n);
  };
  auto take_spade = [&](Spade* s) {
    if (!s) return;
    s->collect(params);
    s->collect_buffers(buffers);
    norms.push_back(&s->norm);
  };
  take_spade(spade1_.get());
  take_norm(norm1_.get());
  conv1_.collect(params);
  take_spade(spade2_.get());
  take_norm(norm2_.get());
  conv2_.collect(params);
  take_spade(spade_skip_.get());
  take_norm(norm_skip_.get());
  if (skip_conv_) skip_conv_->collect(params);
}

void ResBlock::init(Rng& rng) {
  conv1_.init_kaiming(rng);
  conv2_.init_zero();  // residual branch starts silent; the skip dominates
  if (skip_conv_) skip_conv_->init_kaiming(rng);
  if (modulated_) {
    spade1_->gamma_head.init_zero();
    spade1_->beta_head.init_zero();
    spade2_->gamma_head.init_zero();
    spade2_->beta_head.init_zero();
    if (spade_skip_) {
      spade_skip_->gamma_head.init_zero();
      spade_skip_->beta_head.init_zero();
    }
  }
}

// ---------------------------------------------------------------------------
// MaskEncoder

MaskEncoder::MaskEncoder(const std::string& name, int out_c, const ModelConfig& cfg)
    : c0_(name + ".c0", 1, out_c / 2, 3, 2, 1, 1, true),
      c1_(name + ".c1", out_c / 2, out_c, 3, 2, 1, 1, true),
      a0_(cfg.leaky_slope), a1_(cfg.leaky_slope) {}

Tensor MaskEncoder::forward(const Tensor& mask) {
  return a1_.forward(c1_.forward(a0_.forward(c0_.forward(mask))));
}

Tensor MaskEncoder::backward(const Tensor& gout) {
  return c0_.backward(a0_.backward(c1_.backward(a1_.backward(gout))));
}

void MaskEncoder::collect(std::vector<Param*>& params) {
  c0_.collect(params);
  c1_.collect(params);
}

void MaskEncoder::init(Rng& rng) {
  c0_.init_kaiming(rng);
  c1_.init_kaiming(rng);
  // nonzero bias keeps all-missing mask regions from propagating pure zeros
  for (double& b : c0_.bias.value.v) b = 0.1;
  for (double& b : c1_.bias.value.v) b = 0.1;
}

// ---------------------------------------------------------------------------
// Model

Model::Model(const ModelConfig& cfg, uint64_t init_seed) : cfg_(resolve(cfg)) {
  Rng rng(mix_seed(init_seed));
  const int in_c = input_channels(cfg_);
  const bool modulated = cfg_.variant == Variant::DM_LRN;
  const int cd = cfg_.decoder_channels;

  stem_conv_ = std::make_unique<Conv2d>("encoder.stem.conv", in_c, cfg_.stem_channels,
                                        3, 2, 1, 1, false);
  stem_bn_ = std::make_unique<Norm2d>("encoder.stem.bn", cfg_.stem_channels, true,
                                      cfg_.bn_epsilon, cfg_.bn_momentum);
  stem_act_ = std::make_unique<LeakyReLU>(cfg_.leaky_slope);

  int prev_c = cfg_.stem_channels;
  for (size_t s = 0; s < cfg_.encoder_stages.size(); ++s) {
    const StageSpec& spec = cfg_.encoder_stages[s];
    std::vector<std::unique_ptr<MBConv>> stage;
    for (int b = 0; b < spec.blocks; ++b) {
      const std::string name =
          "encoder.s" + std::to_string(s) + ".b" + std::to_string(b);
      stage.push_back(std::make_unique<MBConv>(
          name, b == 0 ? prev_c : spec.channels, spec.channels,
          b == 0 ? spec.stride : 1, cfg_));
    }
    prev_c = spec.channels;
    stages_.push_back(std::move(stage));
  }

  if (modulated)
    mask_enc_ = std::make_unique<MaskEncoder>("mask_enc", cfg_.mask_channels, cfg_);

  for (int lvl = 0; lvl < 4; ++lvl) {
    const std::string name = "decoder.l" + std::to_string(lvl);
    proj_.push_back(std::make_unique<Conv2d>(
        name + ".proj", cfg_.encoder_stages[lvl].channels, cd, 1, 1, 0, 1, true));
    crp_.push_back(std::make_unique<CrpBlock>(name + ".crp", cd));
    block_.push_back(std::make_unique<ResBlock>(name + ".block", cd, cd, modulated, cfg_));
    if (lvl < 3) fuse_.push_back(std::make_unique<FuseBlock>(name + ".fuse", cd));
  }
  head_ = std::make_unique<Conv2d>("head", cd, 1, 3, 1, 1, 1, true);

  // registration order fixes checkpoint layout
  stem_conv_->collect(params_);
  stem_bn_->collect(params_);
  stem_bn_->collect_buffers(buffers_);
  norms_.push_back(stem_bn_.get());
  for (auto& stage : stages_)
    for (auto& blk : stage) blk->collect(params_, buffers_, norms_);
  if (mask_enc_) mask_enc_->collect(params_);
  for (int lvl = 0; lvl < 4; ++lvl) {
    proj_[lvl]->collect(params_);
    if (lvl < 3) fuse_[lvl]->collect(params_);
    crp_[lvl]->collect(params_);
    block_[lvl]->collect(params_, buffers_, norms_);
  }
  head_->collect(params_);

  // deterministic initialization in registration order
  stem_conv_->init_kaiming(rng);
  for (auto& stage : stages_)
    for (auto& blk : stage) blk->init(rng);
  if (mask_enc_) mask_enc_->init(rng);
  for (int lvl = 0; lvl < 4; ++lvl) {
    proj_[lvl]->init_kaiming(rng);
    if (lvl < 3) fuse_[lvl]->init(rng);
    crp_[lvl]->init(rng);
    block_[lvl]->init(rng);
  }
  head_->init_kaiming(rng);
  // damp the head and bias it toward room scale so the initial log-depth
  // starts near the middle of the working range instead of the raw decoder
  // activation scale
  for (double& w : head_->weight.value.v) w *= 0.05;
  head_->bias.value.v[0] = std::log(0.3 * cfg_.max_depth);
}

Tensor Model::forward(const Tensor& input, const Tensor& mask, bool training) {
  if (input.h % 32 != 0 || input.w % 32 != 0)
    throw std::invalid_argument("Model::forward: spatial size must be divisible by 32");
  if (input.c != input_channels(cfg_))
    throw std::invalid_argument("Model::forward: wrong input channel count");
  const NormMode mode{training && !frozen_, training && !frozen_};

  Tensor x = stem_act_->forward(stem_bn_->forward(stem_conv_->forward(input), mode));
  std::vector<Tensor> taps;
  for (auto& stage : stages_) {
    for (auto& blk : stage) x = blk->forward(x, mode);
    taps.push_back(x);
  }

  ran_mask_branch_ = cfg_.variant == Variant::DM_LRN;
  if (ran_mask_branch_) {
    if (mask.n != input.n || mask.c != 1 || mask.h != input.h || mask.w != input.w)
      throw std::invalid_argument("Model::forward: mask shape mismatch");
    mask_feat_ = mask_enc_->forward(mask);
  } else {
    mask_feat_ = Tensor(input.n, cfg_.mask_channels, 1, 1);
  }

  level_h_.assign(4, 0);
  level_w_.assign(4, 0);
  Tensor d;
  for (int lvl = 3; lvl >= 0; --lvl) {
    Tensor p = proj_[lvl]->forward(taps[lvl]);
    level_h_[lvl] = p.h;
    level_w_[lvl] = p.w;
    d = lvl == 3 ? std::move(p) : fuse_[lvl]->forward(d, p);
    d = crp_[lvl]->forward(d);
    d = block_[lvl]->forward(d, mask_feat_, mode);
  }
  return bilinear_upsample(head_->forward(d), 4);
}

void Model::backward(const Tensor& dout) {
  Tensor dmf(mask_feat_.n, mask_feat_.c, mask_feat_.h, mask_feat_.w);
  Tensor d = head_->backward(bilinear_upsample_backward(dout, 4));

  std::vector<Tensor> dtaps(4);
  for (int lvl = 0; lvl < 4; ++lvl) {
    d = block_[lvl]->backward(d, dmf);
    d = crp_[lvl]->backward(d);
    if (lvl < 3) {
      auto [dlow, dhigh] = fuse_[lvl]->backward(d);
      dtaps[lvl] = proj_[lvl]->backward(dhigh);
      d = std::move(dlow);
    } else {
      dtaps[3] = proj_[3]->backward(d);
    }
  }

  if (ran_mask_branch_) mask_enc_->backward(dmf);

  Tensor dx = std::move(dtaps[3]);
  for (int s = 3; s >= 0; --s) {
    for (auto it = stages_[s].rbegin(); it != stages_[s].rend(); ++it)
      dx = (*it)->backward(dx);
    if (s > 0) dx += dtaps[s - 1];
  }
  stem_conv_->backward(stem_bn_->backward(stem_act_->backward(dx)));
}

std::vector<Param*> Model::params() { return params_; }

std::vector<std::pair<std::string, Tensor*>> Model::buffers() { return buffers_; }

void Model::zero_grad() {
  for (Param* p : params_) p->grad.zero();
}

size_t Model::param_count() {
  size_t total = 0;
  for (Param* p : params_) total += p->value.size();
  return total;
}

void Model::set_norm_frozen(bool frozen) {
  frozen_ = frozen;
  for (Norm2d* n : norms_) {
    if (n->affine()) {
      n->gamma.trainable = !frozen;
      n->beta.trainable = !frozen;
    }
  }
}

Tensor make_input_tensor(const std::vector<const RGBDSample*>& samples,
                         const ModelConfig& cfg) {
  if (samples.empty()) throw std::invalid_argument("make_input_tensor: empty batch");
  const int h = samples[0]->rgb.height, w = samples[0]->rgb.width;
  const int c = input_channels(cfg);
  Tensor t(static_cast<int>(samples.size()), c, h, w);
  for (size_t n = 0; n < samples.size(); ++n) {
    const RGBDSample& s = *samples[n];
    if (s.rgb.height != h || s.rgb.width != w)
      throw std::invalid_argument("make_input_tensor: mixed sizes in batch");
    for (int ch = 0; ch < 3; ++ch)
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          t.at(static_cast<int>(n), ch, y, x) = s.rgb.at(ch, y, x);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        t.at(static_cast<int>(n), 3, y, x) = s.sensor.at(y, x) / cfg.max_depth;
    if (c == 5)
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          t.at(static_cast<int>(n), 4, y, x) = s.mask.at(y, x) ? 1.0 : 0.0;
  }
  return t;
}

Tensor make_mask_tensor(const std::vector<const RGBDSample*>& samples) {
  if (samples.empty()) throw std::invalid_argument("make_mask_tensor: empty batch");
  const int h = samples[0]->mask.height, w = samples[0]->mask.width;
  Tensor t(static_cast<int>(samples.size()), 1, h, w);
  for (size_t n = 0; n < samples.size(); ++n)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        t.at(static_cast<int>(n), 0, y, x) = samples[n]->mask.at(y, x) ? 1.0 : 0.0;
  return t;
}

LogDepthMap predict_log_depth(Model& model, const RGBDSample& sample) {
  const std::vector<const RGBDSample*> batch{&sample};
  const Tensor in = make_input_tensor(batch, model.config());
  const Tensor mask = make_mask_tensor(batch);
  const Tensor out = model.forward(in, mask, /*training=*/false);
  LogDepthMap log(sample.rgb.height, sample.rgb.width);
  log.v = out.v;
  return log;
}

DepthMap predict_depth(Model& model, const RGBDSample& sample) {
  const LogDepthMap log = predict_log_depth(model, sample);
  const double lo = std::log(model.config().min_depth);
  const double hi = std::log(model.config().max_depth);
  DepthMap d(log.height, log.width);
  for (size_t i = 0; i < log.v.size(); ++i)
    d.v[i] = std::exp(std::min(hi, std::max(lo, log.v[i])));
  return d;
}

}  // namespace dmlrn
