#include "dmlrn/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace dmlrn::oracles {

namespace {

void check_size(int h, int w, const char* who) {
  if (h > 64 || w > 64)
    throw std::invalid_argument(std::string(who) + ": oracle inputs are capped at 64x64");
}

}  // namespace

double oracle_ssim(const DepthMap& a, const DepthMap& b, int window, double sigma,
                   double dynamic_range) {
  check_size(a.height, a.width, "oracle_ssim");
  int win = std::min({window, a.height, a.width});
  if (win % 2 == 0) win -= 1;
  const double c1 = (0.01 * dynamic_range) * (0.01 * dynamic_range);
  const double c2 = (0.03 * dynamic_range) * (0.03 * dynamic_range);

  // 2-D window weights, normalized
  const double center = (win - 1) / 2.0;
  std::vector<double> weights(static_cast<size_t>(win) * win);
  double wsum = 0.0;
  for (int i = 0; i < win; ++i)
    for (int j = 0; j < win; ++j) {
      const double d2 = (i - center) * (i - center) + (j - center) * (j - center);
      weights[static_cast<size_t>(i) * win + j] = std::exp(-0.5 * d2 / (sigma * sigma));
      wsum += weights[static_cast<size_t>(i) * win + j];
    }
  for (double& wgt : weights) wgt /= wsum;

  double total = 0.0;
  int64_t count = 0;
  for (int y = 0; y + win <= a.height; ++y)
    for (int x = 0; x + win <= a.width; ++x) {
      double mu1 = 0.0, mu2 = 0.0;
      for (int i = 0; i < win; ++i)
        for (int j = 0; j < win; ++j) {
          const double wgt = weights[static_cast<size_t>(i) * win + j];
          mu1 += wgt * a.at(y + i, x + j);
          mu2 += wgt * b.at(y + i, x + j);
        }
      double s1 = 0.0, s2 = 0.0, s12 = 0.0;
      for (int i = 0; i < win; ++i)
        for (int j = 0; j < win; ++j) {
          const double wgt = weights[static_cast<size_t>(i) * win + j];
          s1 += wgt * a.at(y + i, x + j) * a.at(y + i, x + j);
          s2 += wgt * b.at(y + i, x + j) * b.at(y + i, x + j);
          s12 += wgt * a.at(y + i, x + j) * b.at(y + i, x + j);
        }
      s1 -= mu1 * mu1;
      s2 -= mu2 * mu2;
      s12 -= mu1 * mu2;
      total += ((2.0 * mu1 * mu2 + c1) * (2.0 * s12 + c2)) /
               ((mu1 * mu1 + mu2 * mu2 + c1) * (s1 + s2 + c2));
      ++count;
    }
  return total / static_cast<double>(count);
}

MetricReport oracle_metrics(const DepthMap& pred_in, const DepthMap& gt,
                            const EvalProfile& profile) {
  check_size(gt.height, gt.width, "oracle_metrics");
  if (pred_in.height != gt.height || pred_in.width != gt.width)
    throw std::invalid_argument("oracle_metrics: shape mismatch");

  DepthMap pred = pred_in;
  if (profile.clamp_to_range)
    for (double& x : pred.v) {
      if (x < profile.min_depth) x = profile.min_depth;
      if (x > profile.max_depth) x = profile.max_depth;
    }

  MetricReport r;
  for (int y = 0; y < gt.height; ++y)
    for (int x = 0; x < gt.width; ++x)
      if (gt.at(y, x) > 0.0) ++r.valid_pixel_count;
  if (r.valid_pixel_count == 0)
    throw std::invalid_argument("oracle_metrics: no valid ground truth pixel");
  const double n = static_cast<double>(r.valid_pixel_count);

  double se = 0.0;
  for (int y = 0; y < gt.height; ++y)
    for (int x = 0; x < gt.width; ++x)
      if (gt.at(y, x) > 0.0)
        se += (pred.at(y, x) - gt.at(y, x)) * (pred.at(y, x) - gt.at(y, x));
  r.rmse = std::sqrt(se / n);

  double ae = 0.0;
  for (int y = 0; y < gt.height; ++y)
    for (int x = 0; x < gt.width; ++x)
      if (gt.at(y, x) > 0.0) ae += std::abs(pred.at(y, x) - gt.at(y, x));
  r.mae = ae / n;

  double rel = 0.0;
  for (int y = 0; y < gt.height; ++y)
    for (int x = 0; x < gt.width; ++x)
      if (gt.at(y, x) > 0.0)
        rel += std::abs(pred.at(y, x) - gt.at(y, x)) / gt.at(y, x);
  r.rel = rel / n;

  for (size_t t = 0; t < kDeltaThresholds.size(); ++t) {
    int64_t hits = 0;
    for (int y = 0; y < gt.height; ++y)
      for (int x = 0; x < gt.width; ++x) {
        const double g = gt.at(y, x);
        if (g <= 0.0) continue;
        const double p = pred.at(y, x);
        if (p > 0.0 && std::max(p / g, g / p) < kDeltaThresholds[t]) ++hits;
      }
    r.delta[t] = static_cast<double>(hits) / n;
  }

  double ise = 0.0, iae = 0.0;
  int64_t inv_count = 0;
  for (int y = 0; y < gt.height; ++y)
    for (int x = 0; x < gt.width; ++x) {
      const double g = gt.at(y, x);
      if (g <= 0.0) continue;
      const double p = pred.at(y, x);
      if (p > 0.0) {
        const double ie = 1000.0 / p - 1000.0 / g;
        ise += ie * ie;
        iae += std::abs(ie);
        ++inv_count;
      } else {
        ++r.inverse_excluded;
      }
    }
  if (inv_count > 0) {
    r.irmse = std::sqrt(ise / static_cast<double>(inv_count));
    r.imae = iae / static_cast<double>(inv_count);
  }

  r.ssim =
      oracle_ssim(pred, gt, profile.ssim_window, profile.ssim_sigma, profile.max_depth);
  return r;
}

double oracle_pairwise(const ValidSet& vs, LossKind kind) {
  const size_t n = vs.size();
  if (n == 0) throw std::invalid_argument("oracle_pairwise: empty valid set");
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      const double di = vs.pred_log[i] - std::log(vs.gt[i]);
      const double dj = vs.pred_log[j] - std::log(vs.gt[j]);
      if (kind == LossKind::PAIRWISE_LOG_L1)
        acc += std::abs(di - dj);
      else if (kind == LossKind::PAIRWISE_LOG_L2)
        acc += (di - dj) * (di - dj);
      else
        throw std::invalid_argument("oracle_pairwise: not a pairwise kind");
    }
  return acc / (static_cast<double>(n) * static_cast<double>(n));
}

SegmentLabeling oracle_segment(const RgbImage& rgb, double k, int min_size) {
  check_size(rgb.height, rgb.width, "oracle_segment");
  const int h = rgb.height, w = rgb.width;
  const int n = h * w;

  struct OEdge {
    double w;
    int a;
    int b;
  };
  std::vector<OEdge> edges;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      auto dist = [&](int y1, int x1) {
        double acc = 0.0;
        for (int c = 0; c < 3; ++c) {
          const double d = 255.0 * (rgb.at(c, y, x) - rgb.at(c, y1, x1));
          acc += d * d;
        }
        return std::sqrt(acc);
      };
      const int p = y * w + x;
      if (x + 1 < w) edges.push_back({dist(y, x + 1), p, y * w + x + 1});
      if (y + 1 < h) edges.push_back({dist(y + 1, x), p, (y + 1) * w + x});
      if (x + 1 < w && y + 1 < h) edges.push_back({dist(y + 1, x + 1), p, (y + 1) * w + x + 1});
      if (x - 1 >= 0 && y + 1 < h) edges.push_back({dist(y + 1, x - 1), p, (y + 1) * w + x - 1});
    }
  std::sort(edges.begin(), edges.end(), [](const OEdge& l, const OEdge& r) {
    return std::tie(l.w, l.a, l.b) < std::tie(r.w, r.a, r.b);
  });

  // plain parent-array union-find, no compression tricks
  std::vector<int> parent(n), size(n, 1);
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };
  auto join = [&](int a, int b) {
    parent[b] = a;
    size[a] += size[b];
  };

  std::vector<double> threshold(n, k);
  for (const OEdge& e : edges) {
    const int a = find(e.a);
    const int b = find(e.b);
    if (a != b && e.w <= threshold[a] && e.w <= threshold[b]) {
      join(a, b);
      threshold[a] = e.w + k / size[a];
    }
  }
  for (const OEdge& e : edges) {
    const int a = find(e.a);
    const int b = find(e.b);
    if (a != b && (size[a] < min_size || size[b] < min_size)) join(a, b);
  }

  SegmentLabeling seg;
  seg.height = h;
  seg.width = w;
  seg.labels.assign(n, -1);
  std::map<int, int32_t> root_to_label;
  for (int p = 0; p < n; ++p) {
    const int root = find(p);
    auto [it, inserted] = root_to_label.try_emplace(root, static_cast<int32_t>(root_to_label.size()));
    if (inserted) seg.areas.push_back(0);
    seg.labels[p] = it->second;
    ++seg.areas[it->second];
  }
  seg.segment_count = static_cast<int32_t>(root_to_label.size());
  return seg;
}

bool same_partition(const SegmentLabeling& a, const SegmentLabeling& b) {
  if (a.height != b.height || a.width != b.width) return false;
  if (a.segment_count != b.segment_count) return false;
  std::vector<int32_t> a_to_b(a.segment_count, -1), b_to_a(b.segment_count, -1);
  for (size_t i = 0; i < a.labels.size(); ++i) {
    const int32_t la = a.labels[i], lb = b.labels[i];
    if (a_to_b[la] < 0) a_to_b[la] = lb;
    if (b_to_a[lb] < 0) b_to_a[lb] = la;
    if (a_to_b[la] != lb || b_to_a[lb] != la) return false;
  }
  return true;
}

}  // namespace dmlrn::oracles
