#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmlrn/net/tensor.hpp"
#include "dmlrn/rng.hpp"

namespace dmlrn {

struct Param {
  std::string name;
  Tensor value;
  Tensor grad;
  bool trainable = true;
};

/// Normalization statistics source for a forward pass. Training uses batch
/// statistics and updates the running buffers; evaluation and frozen-BN
/// training read the running buffers.
struct NormMode {
  bool batch_stats = false;
  bool update_running = false;
};

/// 2-D convolution with stride/padding/groups, im2col + GEMM based, with a
/// direct path for depthwise. forward() caches what backward() needs;
/// calls must be strictly LIFO across the whole network.
class Conv2d {
 public:
  Conv2d(std::string name, int in_c, int out_c, int k, int stride, int pad,
         int groups = 1, bool bias = true);

  void init_kaiming(Rng& rng);
  void init_zero();

  Tensor forward(const Tensor& x);
  /// Accumulates weight/bias gradients, returns gradient w.r.t. the input.
  Tensor backward(const Tensor& gout);

  void collect(std::vector<Param*>& out);

  static int out_size(int in, int k, int stride, int pad) {
    return (in + 2 * pad - k) / stride + 1;
  }

  Param weight;  // (out_c, in_c/groups, k, k)
  Param bias;    // (1, out_c, 1, 1), present when has_bias

  int in_channels() const { return in_c_; }
  int out_channels() const { return out_c_; }
  bool has_bias() const { return has_bias_; }

 private:
  void im2col(const double* src, int h, int w, int group, double* col) const;
  void col2im(const double* col, int h, int w, int group, double* dst) const;

  int in_c_, out_c_, k_, stride_, pad_, groups_;
  bool has_bias_;
  Tensor input_;
  mutable std::vector<double> col_;
};

/// Per-channel batch normalization over (N, H, W) with biased variance,
/// optional learnable affine terms, and running-statistics buffers.
class Norm2d {
 public:
  Norm2d(std::string name, int channels, bool affine, double eps, double momentum);

  Tensor forward(const Tensor& x, NormMode mode);
  Tensor backward(const Tensor& gout);

  void collect(std::vector<Param*>& out);
  void collect_buffers(std::vector<std::pair<std::string, Tensor*>>& out);

  /// Frozen BN: learnable terms stop updating (trainable=false is applied
  /// by the model when freezing; statistics stop via NormMode).
  Param gamma, beta;
  Tensor running_mean, running_var;  // (1, C, 1, 1)

  int channels() const { return c_; }
  bool affine() const { return affine_; }
  double epsilon() const { return eps_; }

 private:
  int c_;
  bool affine_;
  double eps_, momentum_;
  bool used_batch_stats_ = false;
  Tensor xhat_;
  std::vector<double> ivar_;
  std::string name_;
};

class LeakyReLU {
 public:
  explicit LeakyReLU(double slope) : slope_(slope) {}
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& gout);

 private:
  double slope_;
  std::vector<uint8_t> negative_;
};

/// 5x5 max pooling, stride 1, zero-cost shape preservation via pad 2.
class MaxPool5 {
 public:
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& gout);

 private:
  int n_ = 0, c_ = 0, h_ = 0, w_ = 0;
  std::vector<int32_t> argmax_;
};

/// Spatially-adaptive denormalization: per-channel statistic normalization
/// (no affine) followed by elementwise scale/shift produced by small conv
/// heads over mask features resampled to the feature-map size. The gamma
/// head is parameterized as (1 + conv) so zero-initialized heads start as
/// the identity modulation.
class Spade {
 public:
  Spade(std::string name, int feat_c, int mask_c, double eps, double momentum);

  Tensor forward(const Tensor& f, const Tensor& mask_feat, NormMode mode);
  /// Returns d(feature); accumulates the mask-feature gradient (shared by
  /// every decoder level) into dmask_feat.
  Tensor backward(const Tensor& gout, Tensor& dmask_feat);

  void collect(std::vector<Param*>& out);
  void collect_buffers(std::vector<std::pair<std::string, Tensor*>>& out);

  Norm2d norm;
  Conv2d gamma_head;
  Conv2d beta_head;

 private:
  Tensor normed_, gamma_;
  int mf_h_ = 0, mf_w_ = 0;
};

Tensor nearest_resize(const Tensor& x, int out_h, int out_w);
Tensor nearest_resize_backward(const Tensor& gout, int in_h, int in_w);

Tensor bilinear_upsample(const Tensor& x, int factor);
Tensor bilinear_upsample_backward(const Tensor& gout, int factor);

}  // namespace dmlrn
