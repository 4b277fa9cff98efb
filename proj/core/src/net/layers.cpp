#include "dmlrn/net/layers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dmlrn {

// ---------------------------------------------------------------------------
// Conv2d

Conv2d::Conv2d(std::string name, int in_c, int out_c, int k, int stride, int pad,
               int groups, bool bias)
    : in_c_(in_c), out_c_(out_c), k_(k), stride_(stride), pad_(pad), groups_(groups),
      has_bias_(bias) {
  if (in_c % groups != 0 || out_c % groups != 0)
    throw std::invalid_argument("Conv2d: channels not divisible by groups");
  weight.name = name + ".weight";
  weight.value = Tensor(out_c, in_c / groups, k, k);
  weight.grad = Tensor(out_c, in_c / groups, k, k);
  if (has_bias_) {
    this->bias.name = name + ".bias";
    this->bias.value = Tensor(1, out_c, 1, 1);
    this->bias.grad = Tensor(1, out_c, 1, 1);
  }
}

void Conv2d::init_kaiming(Rng& rng) {
  const double fan_in = static_cast<double>(in_c_ / groups_) * k_ * k_;
  const double std = std::sqrt(2.0 / fan_in);
  for (double& w : weight.value.v) w = std * rng.normal();
  if (has_bias_) bias.value.zero();
}

void Conv2d::init_zero() {
  weight.value.zero();
  if (has_bias_) bias.value.zero();
}

void Conv2d::collect(std::vector<Param*>& out) {
  out.push_back(&weight);
  if (has_bias_) out.push_back(&bias);
}

void Conv2d::im2col(const double* src, int h, int w, int group, double* col) const {
  const int icg = in_c_ / groups_;
  const int oh = out_size(h, k_, stride_, pad_);
  const int ow = out_size(w, k_, stride_, pad_);
  const double* base = src + static_cast<size_t>(group) * icg * h * w;
  size_t idx = 0;
  for (int c = 0; c < icg; ++c) {
    const double* plane = base + static_cast<size_t>(c) * h * w;
    for (int ky = 0; ky < k_; ++ky)
      for (int kx = 0; kx < k_; ++kx) {
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy * stride_ - pad_ + ky;
          if (iy < 0 || iy >= h) {
            for (int ox = 0; ox < ow; ++ox) col[idx++] = 0.0;
            continue;
          }
          const double* row = plane + static_cast<size_t>(iy) * w;
          for (int ox = 0; ox < ow; ++ox) {
            const int ix = ox * stride_ - pad_ + kx;
            col[idx++] = (ix < 0 || ix >= w) ? 0.0 : row[ix];
          }
        }
      }
  }
}

void Conv2d::col2im(const double* col, int h, int w, int group, double* dst) const {
  const int icg = in_c_ / groups_;
  const int oh = out_size(h, k_, stride_, pad_);
  const int ow = out_size(w, k_, stride_, pad_);
  double* base = dst + static_cast<size_t>(group) * icg * h * w;
  size_t idx = 0;
  for (int c = 0; c < icg; ++c) {
    double* plane = base + static_cast<size_t>(c) * h * w;
    for (int ky = 0; ky < k_; ++ky)
      for (int kx = 0; kx < k_; ++kx) {
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy * stride_ - pad_ + ky;
          if (iy < 0 || iy >= h) {
            idx += ow;
            continue;
          }
          double* row = plane + static_cast<size_t>(iy) * w;
          for (int ox = 0; ox < ow; ++ox) {
            const int ix = ox * stride_ - pad_ + kx;
            if (ix >= 0 && ix < w) row[ix] += col[idx];
            ++idx;
          }
        }
      }
  }
}

Tensor Conv2d::forward(const Tensor& x) {
  if (x.c != in_c_) throw std::invalid_argument(weight.name + ": channel mismatch");
  input_ = x;
  const int oh = out_size(x.h, k_, stride_, pad_);
  const int ow = out_size(x.w, k_, stride_, pad_);
  Tensor out(x.n, out_c_, oh, ow);

  const int icg = in_c_ / groups_;
  const int ocg = out_c_ / groups_;
  const int spatial = oh * ow;

  if (groups_ == in_c_ && out_c_ == in_c_) {
    // depthwise fast path
#pragma omp parallel for schedule(static) collapse(2)
    for (int n = 0; n < x.n; ++n)
      for (int c = 0; c < in_c_; ++c) {
        const double* plane = x.sample(n) + static_cast<size_t>(c) * x.h * x.w;
        const double* wk = weight.value.v.data() + static_cast<size_t>(c) * k_ * k_;
        double* dst = out.sample(n) + static_cast<size_t>(c) * spatial;
        for (int oy = 0; oy < oh; ++oy)
          for (int ox = 0; ox < ow; ++ox) {
            double acc = 0.0;
            for (int ky = 0; ky < k_; ++ky) {
              const int iy = oy * stride_ - pad_ + ky;
              if (iy < 0 || iy >= x.h) continue;
              for (int kx = 0; kx < k_; ++kx) {
                const int ix = ox * stride_ - pad_ + kx;
                if (ix < 0 || ix >= x.w) continue;
                acc += wk[ky * k_ + kx] * plane[static_cast<size_t>(iy) * x.w + ix];
              }
            }
            dst[static_cast<size_t>(oy) * ow + ox] = acc;
          }
      }
  } else {
    const size_t col_size = static_cast<size_t>(icg) * k_ * k_ * spatial;
    if (col_.size() < col_size) col_.resize(col_size);
    for (int n = 0; n < x.n; ++n)
      for (int g = 0; g < groups_; ++g) {
        im2col(x.sample(n), x.h, x.w, g, col_.data());
        gemm_nn(ocg, spatial, icg * k_ * k_,
                weight.value.v.data() + static_cast<size_t>(g) * ocg * icg * k_ * k_,
                col_.data(), out.sample(n) + static_cast<size_t>(g) * ocg * spatial,
                false);
      }
  }

  if (has_bias_) {
#pragma omp parallel for schedule(static) collapse(2)
    for (int n = 0; n < x.n; ++n)
      for (int c = 0; c < out_c_; ++c) {
        const double b = bias.value.v[c];
        double* dst = out.sample(n) + static_cast<size_t>(c) * spatial;
        for (int i = 0; i < spatial; ++i) dst[i] += b;
      }
  }
  return out;
}

Tensor Conv2d::backward(const Tensor& gout) {
  const Tensor& x = input_;
  const int oh = gout.h, ow = gout.w;
  const int spatial = oh * ow;
  const int icg = in_c_ / groups_;
  const int ocg = out_c_ / groups_;
  Tensor dx(x.n, x.c, x.h, x.w);

  if (has_bias_) {
    for (int n = 0; n < gout.n; ++n)
      for (int c = 0; c < out_c_; ++c) {
        const double* src = gout.sample(n) + static_cast<size_t>(c) * spatial;
        double acc = 0.0;
        for (int i = 0; i < spatial; ++i) acc += src[i];
        bias.grad.v[c] += acc;
      }
  }

  if (groups_ == in_c_ && out_c_ == in_c_) {
    for (int n = 0; n < x.n; ++n)
      for (int c = 0; c < in_c_; ++c) {
        const double* plane = x.sample(n) + static_cast<size_t>(c) * x.h * x.w;
        const double* gplane = gout.sample(n) + static_cast<size_t>(c) * spatial;
        double* wg = weight.grad.v.data() + static_cast<size_t>(c) * k_ * k_;
        const double* wk = weight.value.v.data() + static_cast<size_t>(c) * k_ * k_;
        double* dplane = dx.sample(n) + static_cast<size_t>(c) * x.h * x.w;
        for (int oy = 0; oy < oh; ++oy)
          for (int ox = 0; ox < ow; ++ox) {
            const double g = gplane[static_cast<size_t>(oy) * ow + ox];
            if (g == 0.0) continue;
            for (int ky = 0; ky < k_; ++ky) {
              const int iy = oy * stride_ - pad_ + ky;
              if (iy < 0 || iy >= x.h) continue;
              for (int kx = 0; kx < k_; ++kx) {
                const int ix = ox * stride_ - pad_ + kx;
                if (ix < 0 || ix >= x.w) continue;
                wg[ky * k_ + kx] += g * plane[static_cast<size_t>(iy) * x.w + ix];
                dplane[static_cast<size_t>(iy) * x.w + ix] += g * wk[ky * k_ + kx];
              }
            }
          }
      }
    return dx;
  }

  const size_t col_size = static_cast<size_t>(icg) * k_ * k_ * spatial;
  if (col_.size() < col_size) col_.resize(col_size);
  std::vector<double> dcol(col_size);
  for (int n = 0; n < x.n; ++n)
    for (int g = 0; g < groups_; ++g) {
      im2col(x.sample(n), x.h, x.w, g, col_.data());
      const double* gslice = gout.sample(n) + static_cast<size_t>(g) * ocg * spatial;
      // dW += gout * col^T
      gemm_nt(ocg, icg * k_ * k_, spatial, gslice, col_.data(),
              weight.grad.v.data() + static_cast<size_t>(g) * ocg * icg * k_ * k_, true);
      // dcol = W^T * gout
      gemm_tn(icg * k_ * k_, spatial, ocg,
              weight.value.v.data() + static_cast<size_t>(g) * ocg * icg * k_ * k_,
              gslice, dcol.data(), false);
      col2im(dcol.data(), x.h, x.w, g, dx.sample(n));
    }
  return dx;
}

// ---------------------------------------------------------------------------
// Norm2d

Norm2d::Norm2d(std::string name, int channels, bool affine, double eps, double momentum)
    : c_(channels), affine_(affine), eps_(eps), momentum_(momentum), name_(name) {
  running_mean = Tensor(1, c_, 1, 1, 0.0);
  running_var = Tensor(1, c_, 1, 1, 1.0);
  if (affine_) {
    gamma.name = name + ".gamma";
    gamma.value = Tensor(1, c_, 1, 1, 1.0);
    gamma.grad = Tensor(1, c_, 1, 1);
    beta.name = name + ".beta";
    beta.value = Tensor(1, c_, 1, 1, 0.0);
    beta.grad = Tensor(1, c_, 1, 1);
  }
}

void Norm2d::collect(std::vector<Param*>& out) {
  if (affine_) {
    out.push_back(&gamma);
    out.push_back(&beta);
  }
}

void Norm2d::collect_buffers(std::vector<std::pair<std::string, Tensor*>>& out) {
  out.emplace_back(name_ + ".running_mean", &running_mean);
  out.emplace_back(name_ + ".running_var", &running_var);
}

Tensor Norm2d::forward(const Tensor& x, NormMode mode) {
  if (x.c != c_) throw std::invalid_argument(name_ + ": channel mismatch");
  if (x.n < 1) throw std::invalid_argument(name_ + ": empty batch");
  const int spatial = x.h * x.w;
  const double m = static_cast<double>(x.n) * spatial;

  used_batch_stats_ = mode.batch_stats;
  ivar_.assign(c_, 0.0);
  std::vector<double> mean(c_, 0.0);

  if (mode.batch_stats) {
#pragma omp parallel for schedule(static)
    for (int c = 0; c < c_; ++c) {
      double mu = 0.0;
      for (int n = 0; n < x.n; ++n) {
        const double* p = x.sample(n) + static_cast<size_t>(c) * spatial;
        for (int i = 0; i < spatial; ++i) mu += p[i];
      }
      mu /= m;
      double var = 0.0;
      for (int n = 0; n < x.n; ++n) {
        const double* p = x.sample(n) + static_cast<size_t>(c) * spatial;
        for (int i = 0; i < spatial; ++i) var += (p[i] - mu) * (p[i] - mu);
      }
      var /= m;  // biased
      mean[c] = mu;
      ivar_[c] = 1.0 / std::sqrt(var + eps_);
      if (mode.update_running) {
        running_mean.v[c] = (1.0 - momentum_) * running_mean.v[c] + momentum_ * mu;
        running_var.v[c] = (1.0 - momentum_) * running_var.v[c] + momentum_ * var;
      }
    }
  } else {
    for (int c = 0; c < c_; ++c) {
      mean[c] = running_mean.v[c];
      ivar_[c] = 1.0 / std::sqrt(running_var.v[c] + eps_);
    }
  }

  xhat_ = Tensor(x.n, x.c, x.h, x.w);
  Tensor out(x.n, x.c, x.h, x.w);
#pragma omp parallel for schedule(static) collapse(2)
  for (int n = 0; n < x.n; ++n)
    for (int c = 0; c < c_; ++c) {
      const double mu = mean[c], iv = ivar_[c];
      const double g = affine_ ? gamma.value.v[c] : 1.0;
      const double b = affine_ ? beta.value.v[c] : 0.0;
      const double* src = x.sample(n) + static_cast<size_t>(c) * spatial;
      double* xh = xhat_.sample(n) + static_cast<size_t>(c) * spatial;
      double* dst = out.sample(n) + static_cast<size_t>(c) * spatial;
      for (int i = 0; i < spatial; ++i) {
        xh[i] = (src[i] - mu) * iv;
        dst[i] = g * xh[i] + b;
      }
    }
  return out;
}

Tensor Norm2d::backward(const Tensor& gout) {
  const int spatial = gout.h * gout.w;
  const double m = static_cast<double>(gout.n) * spatial;
  Tensor dx(gout.n, gout.c, gout.h, gout.w);

#pragma omp parallel for schedule(static)
  for (int c = 0; c < c_; ++c) {
    const double g = affine_ ? gamma.value.v[c] : 1.0;
    const double iv = ivar_[c];

    double sum_dy = 0.0, sum_dy_xhat = 0.0;
    for (int n = 0; n < gout.n; ++n) {
      const double* dy = gout.sample(n) + static_cast<size_t>(c) * spatial;
      const double* xh = xhat_.sample(n) + static_cast<size_t>(c) * spatial;
      for (int i = 0; i < spatial; ++i) {
        sum_dy += dy[i];
        sum_dy_xhat += dy[i] * xh[i];
      }
    }
    if (affine_) {
      gamma.grad.v[c] += sum_dy_xhat;
      beta.grad.v[c] += sum_dy;
    }

    if (used_batch_stats_) {
      for (int n = 0; n < gout.n; ++n) {
        const double* dy = gout.sample(n) + static_cast<size_t>(c) * spatial;
        const double* xh = xhat_.sample(n) + static_cast<size_t>(c) * spatial;
        double* d = dx.sample(n) + static_cast<size_t>(c) * spatial;
        for (int i = 0; i < spatial; ++i)
          d[i] = g * iv * (dy[i] - sum_dy / m - xh[i] * sum_dy_xhat / m);
      }
    } else {
      for (int n = 0; n < gout.n; ++n) {
        const double* dy = gout.sample(n) + static_cast<size_t>(c) * spatial;
        double* d = dx.sample(n) + static_cast<size_t>(c) * spatial;
        for (int i = 0; i < spatial; ++i) d[i] = g * iv * dy[i];
      }
    }
  }
  return dx;
}

// ---------------------------------------------------------------------------
// LeakyReLU

Tensor LeakyReLU::forward(const Tensor& x) {
  negative_.assign(x.size(), 0);
  Tensor out = x;
  for (size_t i = 0; i < x.v.size(); ++i)
    if (x.v[i] < 0.0) {
      negative_[i] = 1;
      out.v[i] = slope_ * x.v[i];
    }
  return out;
}

Tensor LeakyReLU::backward(const Tensor& gout) {
  Tensor dx = gout;
  for (size_t i = 0; i < dx.v.size(); ++i)
    if (negative_[i]) dx.v[i] *= slope_;
  return dx;
}

// ---------------------------------------------------------------------------
// MaxPool5

Tensor MaxPool5::forward(const Tensor& x) {
  constexpr int k = 5, pad = 2;
  n_ = x.n;
  c_ = x.c;
  h_ = x.h;
  w_ = x.w;
  Tensor out(x.n, x.c, x.h, x.w);
  argmax_.assign(x.size(), 0);
#pragma omp parallel for schedule(static) collapse(2)
  for (int n = 0; n < x.n; ++n)
    for (int c = 0; c < x.c; ++c) {
      const double* plane = x.sample(n) + static_cast<size_t>(c) * x.h * x.w;
      double* dst = out.sample(n) + static_cast<size_t>(c) * x.h * x.w;
      int32_t* am = argmax_.data() +
                    (static_cast<size_t>(n) * x.c + c) * x.h * x.w;
      for (int y = 0; y < x.h; ++y)
        for (int xx = 0; xx < x.w; ++xx) {
          double best = -std::numeric_limits<double>::infinity();
          int32_t best_idx = 0;
          for (int ky = 0; ky < k; ++ky) {
            const int iy = y - pad + ky;
            if (iy < 0 || iy >= x.h) continue;
            for (int kx = 0; kx < k; ++kx) {
              const int ix = xx - pad + kx;
              if (ix < 0 || ix >= x.w) continue;
              const double val = plane[static_cast<size_t>(iy) * x.w + ix];
              if (val > best) {
                best = val;
                best_idx = iy * x.w + ix;
              }
            }
          }
          dst[static_cast<size_t>(y) * x.w + xx] = best;
          am[static_cast<size_t>(y) * x.w + xx] = best_idx;
        }
    }
  return out;
}

Tensor MaxPool5::backward(const Tensor& gout) {
  Tensor dx(n_, c_, h_, w_);
  for (int n = 0; n < n_; ++n)
    for (int c = 0; c < c_; ++c) {
      const double* g = gout.sample(n) + static_cast<size_t>(c) * h_ * w_;
      double* d = dx.sample(n) + static_cast<size_t>(c) * h_ * w_;
      const int32_t* am = argmax_.data() + (static_cast<size_t>(n) * c_ + c) * h_ * w_;
      for (int i = 0; i < h_ * w_; ++i) d[am[i]] += g[i];
    }
  return dx;
}

// ---------------------------------------------------------------------------
// Spade

Spade::Spade(std::string name, int feat_c, int mask_c, double eps, double momentum)
    : norm(name + ".norm", feat_c, /*affine=*/false, eps, momentum),
      gamma_head(name + ".gamma", mask_c, feat_c, 1, 1, 0, 1, true),
      beta_head(name + ".beta", mask_c, feat_c, 1, 1, 0, 1, true) {}

void Spade::collect(std::vector<Param*>& out) {
  gamma_head.collect(out);
  beta_head.collect(out);
}

void Spade::collect_buffers(std::vector<std::pair<std::string, Tensor*>>& out) {
  norm.collect_buffers(out);
}

Tensor Spade::forward(const Tensor& f, const Tensor& mask_feat, NormMode mode) {
  normed_ = norm.forward(f, mode);
  mf_h_ = mask_feat.h;
  mf_w_ = mask_feat.w;
  const Tensor mre = nearest_resize(mask_feat, f.h, f.w);
  Tensor g = gamma_head.forward(mre);
  for (double& x : g.v) x += 1.0;
  gamma_ = g;
  const Tensor b = beta_head.forward(mre);

  Tensor out(f.n, f.c, f.h, f.w);
  for (size_t i = 0; i < out.v.size(); ++i)
    out.v[i] = gamma_.v[i] * normed_.v[i] + b.v[i];
  return out;
}

Tensor Spade::backward(const Tensor& gout, Tensor& dmask_feat) {
  Tensor dnormed(gout.n, gout.c, gout.h, gout.w);
  Tensor dgamma(gout.n, gout.c, gout.h, gout.w);
  for (size_t i = 0; i < gout.v.size(); ++i) {
    dnormed.v[i] = gout.v[i] * gamma_.v[i];
    dgamma.v[i] = gout.v[i] * normed_.v[i];
  }
  Tensor dmre = gamma_head.backward(dgamma);
  dmre += beta_head.backward(gout);  // beta path: dbeta = gout
  dmask_feat += nearest_resize_backward(dmre, mf_h_, mf_w_);
  return norm.backward(dnormed);
}

// ---------------------------------------------------------------------------
// resampling

Tensor nearest_resize(const Tensor& x, int out_h, int out_w) {
  if (x.h == out_h && x.w == out_w) return x;
  Tensor out(x.n, x.c, out_h, out_w);
  for (int n = 0; n < x.n; ++n)
    for (int c = 0; c < x.c; ++c) {
      const double* src = x.sample(n) + static_cast<size_t>(c) * x.h * x.w;
      double* dst = out.sample(n) + static_cast<size_t>(c) * out_h * out_w;
      for (int y = 0; y < out_h; ++y) {
        const int iy = std::min(static_cast<int>(static_cast<int64_t>(y) * x.h / out_h),
                                x.h - 1);
        for (int xx = 0; xx < out_w; ++xx) {
          const int ix = std::min(
              static_cast<int>(static_cast<int64_t>(xx) * x.w / out_w), x.w - 1);
          dst[static_cast<size_t>(y) * out_w + xx] = src[static_cast<size_t>(iy) * x.w + ix];
        }
      }
    }
  return out;
}

Tensor nearest_resize_backward(const Tensor& gout, int in_h, int in_w) {
  if (gout.h == in_h && gout.w == in_w) return gout;
  Tensor dx(gout.n, gout.c, in_h, in_w);
  for (int n = 0; n < gout.n; ++n)
    for (int c = 0; c < gout.c; ++c) {
      const double* g = gout.sample(n) + static_cast<size_t>(c) * gout.h * gout.w;
      double* d = dx.sample(n) + static_cast<size_t>(c) * in_h * in_w;
      for (int y = 0; y < gout.h; ++y) {
        const int iy = std::min(
            static_cast<int>(static_cast<int64_t>(y) * in_h / gout.h), in_h - 1);
        for (int xx = 0; xx < gout.w; ++xx) {
          const int ix = std::min(
              static_cast<int>(static_cast<int64_t>(xx) * in_w / gout.w), in_w - 1);
          d[static_cast<size_t>(iy) * in_w + ix] += g[static_cast<size_t>(y) * gout.w + xx];
        }
      }
    }
  return dx;
}

namespace {

struct LinearTap {
  int i0, i1;
  double w1;  // weight of i1; i0 gets (1 - w1)
};

std::vector<LinearTap> bilinear_taps(int out_n, int in_n, int factor) {
  std::vector<LinearTap> taps(out_n);
  for (int o = 0; o < out_n; ++o) {
    double src = (o + 0.5) / factor - 0.5;
    src = std::clamp(src, 0.0, static_cast<double>(in_n - 1));
    const int i0 = static_cast<int>(src);
    taps[o] = {i0, std::min(i0 + 1, in_n - 1), src - i0};
  }
  return taps;
}

}  // namespace

Tensor bilinear_upsample(const Tensor& x, int factor) {
  const int oh = x.h * factor, ow = x.w * factor;
  const auto ty = bilinear_taps(oh, x.h, factor);
  const auto tx = bilinear_taps(ow, x.w, factor);
  Tensor out(x.n, x.c, oh, ow);
  for (int n = 0; n < x.n; ++n)
    for (int c = 0; c < x.c; ++c) {
      const double* src = x.sample(n) + static_cast<size_t>(c) * x.h * x.w;
      double* dst = out.sample(n) + static_cast<size_t>(c) * oh * ow;
      for (int y = 0; y < oh; ++y)
        for (int xx = 0; xx < ow; ++xx) {
          const auto& ay = ty[y];
          const auto& ax = tx[xx];
          const double top = (1.0 - ax.w1) * src[static_cast<size_t>(ay.i0) * x.w + ax.i0] +
                             ax.w1 * src[static_cast<size_t>(ay.i0) * x.w + ax.i1];
          const double bot = (1.0 - ax.w1) * src[static_cast<size_t>(ay.i1) * x.w + ax.i0] +
                             ax.w1 * src[static_cast<size_t>(ay.i1) * x.w + ax.i1];
          dst[static_cast<size_t>(y) * ow + xx] = (1.0 - ay.w1) * top + ay.w1 * bot;
        }
    }
  return out;
}

Tensor bilinear_upsample_backward(const Tensor& gout, int factor) {
  const int ih = gout.h / factor, iw = gout.w / factor;
  const auto ty = bilinear_taps(gout.h, ih, factor);
  const auto tx = bilinear_taps(gout.w, iw, factor);
  Tensor dx(gout.n, gout.c, ih, iw);
  for (int n = 0; n < gout.n; ++n)
    for (int c = 0; c < gout.c; ++c) {
      const double* g = gout.sample(n) + static_cast<size_t>(c) * gout.h * gout.w;
      double* d = dx.sample(n) + static_cast<size_t>(c) * ih * iw;
      for (int y = 0; y < gout.h; ++y)
        for (int xx = 0; xx < gout.w; ++xx) {
          const auto& ay = ty[y];
          const auto& ax = tx[xx];
          const double gv = g[static_cast<size_t>(y) * gout.w + xx];
          d[static_cast<size_t>(ay.i0) * iw + ax.i0] += (1.0 - ay.w1) * (1.0 - ax.w1) * gv;
          d[static_cast<size_t>(ay.i0) * iw + ax.i1] += (1.0 - ay.w1) * ax.w1 * gv;
          d[static_cast<size_t>(ay.i1) * iw + ax.i0] += ay.w1 * (1.0 - ax.w1) * gv;
          d[static_cast<size_t>(ay.i1) * iw + ax.i1] += ay.w1 * ax.w1 * gv;
        }
    }
  return dx;
}

}  // namespace dmlrn
