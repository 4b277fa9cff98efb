#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dmlrn/net/layers.hpp"
#include "dmlrn/types.hpp"

namespace dmlrn {

enum class Variant { DM_LRN, LRN, LRN_MASK };
enum class SizeTier { T0, T1, T2, T3, T4 };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);
std::string to_string(SizeTier t);
SizeTier tier_from_string(const std::string& s);

struct StageSpec {
  int channels = 0;
  int blocks = 0;
  int stride = 2;
  bool operator==(const StageSpec&) const = default;
};

/// Architecture description. Zero-valued derived fields (stem_channels,
/// encoder_stages, decoder_channels) are filled from the size tier by
/// resolve(); the resolved form is what checkpoints store and compare.
struct ModelConfig {
  Variant variant = Variant::DM_LRN;
  SizeTier tier = SizeTier::T0;
  int stem_channels = 0;
  std::vector<StageSpec> encoder_stages;
  int decoder_channels = 0;
  int mask_channels = 16;
  double leaky_slope = 0.01;
  double bn_epsilon = 1e-5;
  double bn_momentum = 0.1;
  double min_depth = 0.1;
  double max_depth = 10.0;

  bool operator==(const ModelConfig&) const = default;
};

ModelConfig resolve(ModelConfig cfg);
std::string to_json_string(const ModelConfig& cfg);
ModelConfig model_config_from_json(const std::string& text);

/// RGB + normalized depth (+ mask for LRN_MASK).
int input_channels(const ModelConfig& cfg);

/// Inverted-bottleneck encoder block: 1x1 expand, 3x3 depthwise, 1x1
/// project, BN after each conv, residual when shape-preserving.
class MBConv {
 public:
  MBConv(const std::string& name, int in_c, int out_c, int stride,
         const ModelConfig& cfg);
  Tensor forward(const Tensor& x, NormMode mode);
  Tensor backward(const Tensor& gout);
  void collect(std::vector<Param*>& params,
               std::vector<std::pair<std::string, Tensor*>>& buffers,
               std::vector<Norm2d*>& norms);
  void init(Rng& rng);

 private:
  Conv2d expand_, dw_, project_;
  Norm2d bn1_, bn2_, bn3_;
  LeakyReLU act1_, act2_;
  bool residual_;
};

/// Chained residual pooling: two (5x5 max-pool, 1x1 conv) stages summed
/// onto the input.
class CrpBlock {
 public:
  CrpBlock(const std::string& name, int channels);
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& gout);
  void collect(std::vector<Param*>& params);
  void init(Rng& rng);

 private:
  MaxPool5 pool1_, pool2_;
  Conv2d conv1_, conv2_;
};

/// Multi-resolution fusion: 1x1 conv both inputs, nearest-upsample the
/// coarse one to the fine size, add.
class FuseBlock {
 public:
  FuseBlock(const std::string& name, int channels);
  Tensor forward(const Tensor& low, const Tensor& high);
  /// Returns (d_low, d_high).
  std::pair<Tensor, Tensor> backward(const Tensor& gout);
  void collect(std::vector<Param*>& params);
  void init(Rng& rng);

 private:
  Conv2d low_conv_, high_conv_;
  int low_h_ = 0, low_w_ = 0;
};

/// Residual unit with two (norm -> LeakyReLU -> 3x3 conv) passes. The
/// normalization site is SPADE when modulated, plain (non-affine) BN
/// otherwise, so DM_LRN and LRN share identical conv parameter shapes.
/// Skip path: identity when channels match, norm + 1x1 conv otherwise.
class ResBlock {
 public:
  ResBlock(const std::string& name, int in_c, int out_c, bool modulated,
           const ModelConfig& cfg);
  Tensor forward(const Tensor& x, const Tensor& mask_feat, NormMode mode);
  Tensor backward(const Tensor& gout, Tensor& dmask_feat);
  void collect(std::vector<Param*>& params,
               std::vector<std::pair<std::string, Tensor*>>& buffers,
               std::vector<Norm2d*>& norms);
  /// Kaiming convs, zero SPADE heads (identity modulation at start).
  void init(Rng& rng);

  Spade* spade1() { return spade1_.get(); }

 private:
  bool modulated_;
  bool has_skip_conv_;
  std::unique_ptr<Spade> spade1_, spade2_, spade_skip_;
  std::unique_ptr<Norm2d> norm1_, norm2_, norm_skip_;
  LeakyReLU act1_, act2_;
  Conv2d conv1_, conv2_;
  std::unique_ptr<Conv2d> skip_conv_;
};

/// Two biased stride-2 convolutions with LeakyReLU; output at 1/4 scale.
/// Biases start positive so all-missing masks still emit a signal.
class MaskEncoder {
 public:
  MaskEncoder(const std::string& name, int out_c, const ModelConfig& cfg);
  Tensor forward(const Tensor& mask);
  Tensor backward(const Tensor& gout);
  void collect(std::vector<Param*>& params);
  void init(Rng& rng);

 private:
  Conv2d c0_, c1_;
  LeakyReLU a0_, a1_;
};

class Model {
 public:
  Model(const ModelConfig& cfg, uint64_t init_seed);

  const ModelConfig& config() const { return cfg_; }

  /// input: (N, input_channels, H, W) with H, W divisible by 32;
  /// mask: (N, 1, H, W), consumed only by the DM_LRN modulation branch.
  /// Returns (N, 1, H, W) log-depth.
  Tensor forward(const Tensor& input, const Tensor& mask, bool training);
  void backward(const Tensor& dout);

  std::vector<Param*> params();
  std::vector<std::pair<std::string, Tensor*>> buffers();
  void zero_grad();
  size_t param_count();

  /// Freeze every normalization site: running statistics stop updating and
  /// forward passes read them; BN learnable terms stop training. SPADE
  /// modulation heads are convolutions and keep training.
  void set_norm_frozen(bool frozen);
  bool norm_frozen() const { return frozen_; }

 private:
  ModelConfig cfg_;
  bool frozen_ = false;

  std::unique_ptr<Conv2d> stem_conv_;
  std::unique_ptr<Norm2d> stem_bn_;
  std::unique_ptr<LeakyReLU> stem_act_;
  std::vector<std::vector<std::unique_ptr<MBConv>>> stages_;

  std::unique_ptr<MaskEncoder> mask_enc_;
  std::vector<std::unique_ptr<Conv2d>> proj_;     // per level, deepest last
  std::vector<std::unique_ptr<FuseBlock>> fuse_;  // levels 0..2
  std::vector<std::unique_ptr<CrpBlock>> crp_;
  std::vector<std::unique_ptr<ResBlock>> block_;
  std::unique_ptr<Conv2d> head_;

  std::vector<Param*> params_;
  std::vector<std::pair<std::string, Tensor*>> buffers_;
  std::vector<Norm2d*> norms_;

  // forward bookkeeping for backward
  Tensor mask_feat_;
  std::vector<int> level_h_, level_w_;
  bool ran_mask_branch_ = false;
};

/// Assemble network inputs from samples (rgb, depth/max_depth [, mask]).
Tensor make_input_tensor(const std::vector<const RGBDSample*>& samples,
                         const ModelConfig& cfg);
Tensor make_mask_tensor(const std::vector<const RGBDSample*>& samples);

LogDepthMap predict_log_depth(Model& model, const RGBDSample& sample);

/// exp of the log-depth output clamped to [min_depth, max_depth].
DepthMap predict_depth(Model& model, const RGBDSample& sample);

}  // namespace dmlrn
