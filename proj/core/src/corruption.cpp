#include "dmlrn/corruption.hpp"

#include <stdexcept>

namespace dmlrn {

void validate(const CorruptionConfig& cfg) {
  if (cfg.k <= 0.0) throw std::invalid_argument("CorruptionConfig: k must be > 0");
  if (cfg.min_size < 1) throw std::invalid_argument("CorruptionConfig: min_size must be >= 1");
  if (cfg.area_threshold < 0)
    throw std::invalid_argument("CorruptionConfig: area_threshold must be >= 0");
  if (cfg.spatter_prob < 0.0 || cfg.spatter_prob > 1.0)
    throw std::invalid_argument("CorruptionConfig: spatter_prob must be in [0, 1]");
  if (cfg.gaussian_presmooth_sigma < 0.0)
    throw std::invalid_argument("CorruptionConfig: presmooth sigma must be >= 0");
}

DepthMap zero_small_segments(const DepthMap& depth, const SegmentLabeling& seg,
                             int64_t area_threshold) {
  if (depth.height != seg.height || depth.width != seg.width)
    throw std::invalid_argument("zero_small_segments: dimension mismatch");
  DepthMap out = depth;
  for (size_t i = 0; i < out.v.size(); ++i)
    if (seg.areas[seg.labels[i]] < area_threshold) out.v[i] = 0.0;
  return out;
}

DepthMap spatter(const DepthMap& depth, double p, Rng& rng) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("spatter: p must be in [0, 1]");
  DepthMap out = depth;
  for (double& x : out.v)
    if (rng.uniform() < p) x = 0.0;
  return out;
}

DepthMap corrupt_depth(const DepthMap& target, const RgbImage& rgb,
                       const CorruptionConfig& cfg) {
  validate(cfg);
  if (target.height != rgb.height || target.width != rgb.width)
    throw std::invalid_argument("corrupt: rgb/depth dimension mismatch");
  bool any_valid = false;
  for (double x : target.v)
    if (x > 0.0) {
      any_valid = true;
      break;
    }
  if (!any_valid) throw std::invalid_argument("corrupt: target has no valid pixel");

  const SegmentLabeling seg = segment_graph_based(
      rgb, cfg.k, cfg.min_size, cfg.gaussian_presmooth_sigma);
  DepthMap masked = zero_small_segments(target, seg, cfg.area_threshold);
  Rng rng(cfg.rng_seed);
  return spatter(masked, cfg.spatter_prob, rng);
}

DepthMap corrupt(const RGBDSample& sample, const CorruptionConfig& cfg) {
  if (!sample.gt) throw std::invalid_argument("corrupt: sample has no ground truth");
  return corrupt_depth(*sample.gt, sample.rgb, cfg);
}

DepthMap sample_uniform_sparse(const DepthMap& depth, int64_t n_points, Rng& rng) {
  if (n_points < 0) throw std::invalid_argument("sample_uniform_sparse: n_points < 0");
  std::vector<int64_t> valid;
  for (size_t i = 0; i < depth.v.size(); ++i)
    if (depth.v[i] > 0.0) valid.push_back(static_cast<int64_t>(i));
  if (n_points > static_cast<int64_t>(valid.size()))
    throw std::invalid_argument("sample_uniform_sparse: n_points exceeds valid pixels");

  // partial Fisher-Yates: the first n_points entries are a uniform draw
  for (int64_t i = 0; i < n_points; ++i) {
    const int64_t j = i + static_cast<int64_t>(rng.uniform_below(valid.size() - i));
    std::swap(valid[i], valid[j]);
  }
  DepthMap out(depth.height, depth.width, 0.0);
  for (int64_t i = 0; i < n_points; ++i) out.v[valid[i]] = depth.v[valid[i]];
  return out;
}

double zeroed_fraction(const DepthMap& before, const DepthMap& after) {
  if (!same_shape(before, after))
    throw std::invalid_argument("zeroed_fraction: shape mismatch");
  int64_t was_valid = 0, dropped = 0;
  for (size_t i = 0; i < before.v.size(); ++i) {
    if (before.v[i] > 0.0) {
      ++was_valid;
      if (after.v[i] <= 0.0) ++dropped;
    }
  }
  return was_valid == 0 ? 0.0 : static_cast<double>(dropped) / was_valid;
}

}  // namespace dmlrn
