#include "dmlrn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dmlrn {

namespace {

std::vector<double> ssim_window_1d(int window, double sigma) {
  std::vector<double> k(window);
  const double c = (window - 1) / 2.0;
  double sum = 0.0;
  for (int i = 0; i < window; ++i) {
    k[i] = std::exp(-0.5 * (i - c) * (i - c) / (sigma * sigma));
    sum += k[i];
  }
  for (double& w : k) w /= sum;
  return k;
}

// Horizontal then vertical pass over the 'valid' interior: out has size
// (h - window + 1) x (w - window + 1).
std::vector<double> gaussian_filter_valid(const std::vector<double>& img, int h,
                                          int w, const std::vector<double>& k) {
  const int win = static_cast<int>(k.size());
  const int oh = h - win + 1, ow = w - win + 1;
  std::vector<double> tmp(static_cast<size_t>(h) * ow);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < win; ++i) acc += k[i] * img[static_cast<size_t>(y) * w + x + i];
      tmp[static_cast<size_t>(y) * ow + x] = acc;
    }
  std::vector<double> out(static_cast<size_t>(oh) * ow);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < win; ++i) acc += k[i] * tmp[static_cast<size_t>(y + i) * ow + x];
      out[static_cast<size_t>(y) * ow + x] = acc;
    }
  return out;
}

}  // namespace

double ssim(const DepthMap& a, const DepthMap& b, int window, double sigma,
            double dynamic_range) {
  if (!same_shape(a, b)) throw std::invalid_argument("ssim: shape mismatch");
  int win = std::min({window, a.height, a.width});
  if (win % 2 == 0) --win;
  if (win < 1) throw std::invalid_argument("ssim: degenerate window");

  const double c1 = (0.01 * dynamic_range) * (0.01 * dynamic_range);
  const double c2 = (0.03 * dynamic_range) * (0.03 * dynamic_range);
  const auto k = ssim_window_1d(win, sigma);

  const int h = a.height, w = a.width;
  const size_t n = a.v.size();
  std::vector<double> aa(n), bb(n), ab(n);
  for (size_t i = 0; i < n; ++i) {
    aa[i] = a.v[i] * a.v[i];
    bb[i] = b.v[i] * b.v[i];
    ab[i] = a.v[i] * b.v[i];
  }
  const auto mu1 = gaussian_filter_valid(a.v, h, w, k);
  const auto mu2 = gaussian_filter_valid(b.v, h, w, k);
  const auto m11 = gaussian_filter_valid(aa, h, w, k);
  const auto m22 = gaussian_filter_valid(bb, h, w, k);
  const auto m12 = gaussian_filter_valid(ab, h, w, k);

  double acc = 0.0;
  for (size_t i = 0; i < mu1.size(); ++i) {
    const double mu1_sq = mu1[i] * mu1[i];
    const double mu2_sq = mu2[i] * mu2[i];
    const double mu12 = mu1[i] * mu2[i];
    const double s1 = m11[i] - mu1_sq;
    const double s2 = m22[i] - mu2_sq;
    const double s12 = m12[i] - mu12;
    acc += ((2.0 * mu12 + c1) * (2.0 * s12 + c2)) /
           ((mu1_sq + mu2_sq + c1) * (s1 + s2 + c2));
  }
  return acc / static_cast<double>(mu1.size());
}

MetricReport evaluate(const DepthMap& pred_in, const DepthMap& gt,
                      const EvalProfile& profile) {
  if (!same_shape(pred_in, gt)) throw std::invalid_argument("evaluate: shape mismatch");

  DepthMap pred = pred_in;
  if (profile.clamp_to_range)
    for (double& x : pred.v) x = std::clamp(x, profile.min_depth, profile.max_depth);

  MetricReport r;
  double se = 0.0, ae = 0.0, rel = 0.0;
  double ise = 0.0, iae = 0.0;
  int64_t inv_count = 0;
  std::array<int64_t, 5> delta_hits{};

  for (size_t i = 0; i < gt.v.size(); ++i) {
    const double g = gt.v[i];
    if (g <= 0.0) continue;
    ++r.valid_pixel_count;
    const double p = pred.v[i];
    const double e = p - g;
    se += e * e;
    ae += std::abs(e);
    rel += std::abs(e) / g;
    const double ratio =
        p > 0.0 ? std::max(p / g, g / p) : std::numeric_limits<double>::infinity();
    for (size_t t = 0; t < kDeltaThresholds.size(); ++t)
      if (ratio < kDeltaThresholds[t]) ++delta_hits[t];
    if (p > 0.0) {
      const double ie = 1000.0 / p - 1000.0 / g;  // 1/km
      ise += ie * ie;
      iae += std::abs(ie);
      ++inv_count;
    } else {
      ++r.inverse_excluded;
    }
  }
  if (r.valid_pixel_count == 0)
    throw std::invalid_argument("evaluate: no valid ground truth pixel");

  const double n = static_cast<double>(r.valid_pixel_count);
  r.rmse = std::sqrt(se / n);
  r.mae = ae / n;
  r.rel = rel / n;
  for (size_t t = 0; t < kDeltaThresholds.size(); ++t)
    r.delta[t] = static_cast<double>(delta_hits[t]) / n;
  if (inv_count > 0) {
    r.irmse = std::sqrt(ise / static_cast<double>(inv_count));
    r.imae = iae / static_cast<double>(inv_count);
  }
  r.ssim = ssim(pred, gt, profile.ssim_window, profile.ssim_sigma, profile.max_depth);
  return r;
}

MetricReport mean_report(const std::vector<MetricReport>& reports) {
  if (reports.empty()) throw std::invalid_argument("mean_report: empty input");
  MetricReport m;
  for (const auto& r : reports) {
    m.rmse += r.rmse;
    m.mae += r.mae;
    m.rel += r.rel;
    for (size_t t = 0; t < m.delta.size(); ++t) m.delta[t] += r.delta[t];
    m.ssim += r.ssim;
    m.irmse += r.irmse;
    m.imae += r.imae;
    m.valid_pixel_count += r.valid_pixel_count;
    m.inverse_excluded += r.inverse_excluded;
  }
  const double n = static_cast<double>(reports.size());
  m.rmse /= n;
  m.mae /= n;
  m.rel /= n;
  for (double& d : m.delta) d /= n;
  m.ssim /= n;
  m.irmse /= n;
  m.imae /= n;
  return m;
}

}  // namespace dmlrn
