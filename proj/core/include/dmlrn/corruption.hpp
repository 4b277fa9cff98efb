#pragma once

#include <cstdint>

#include "dmlrn/rng.hpp"
#include "dmlrn/segmentation.hpp"
#include "dmlrn/types.hpp"

namespace dmlrn {

/// Parameters of the pseudo-sensor pipeline: image-guided segment masking
/// followed by random spattering.
struct CorruptionConfig {
  double k = 500.0;                      // segmentation merging scale ([0,255] RGB)
  int min_size = 20;                     // minimum segment pixels
  int64_t area_threshold = 1000;         // zero segments smaller than this
  double spatter_prob = 0.02;            // per-pixel zeroing probability
  uint64_t rng_seed = 0;
  double gaussian_presmooth_sigma = 0.8;
};

void validate(const CorruptionConfig& cfg);

/// Zero every depth pixel whose segment area is below the threshold.
DepthMap zero_small_segments(const DepthMap& depth, const SegmentLabeling& seg,
                             int64_t area_threshold);

/// Independently zero each pixel with probability p.
DepthMap spatter(const DepthMap& depth, double p, Rng& rng);

/// Pseudo-sensor map from a target depth map: spattering applied on top of
/// segment masking guided by the color image. Surviving pixels keep their
/// exact input values.
DepthMap corrupt(const RGBDSample& sample, const CorruptionConfig& cfg);

/// Same pipeline against an explicit target map (the sample's gt may be
/// absent when corrupting raw sensor data).
DepthMap corrupt_depth(const DepthMap& target, const RgbImage& rgb,
                       const CorruptionConfig& cfg);

/// Keep exactly n_points valid pixels, chosen uniformly without replacement.
DepthMap sample_uniform_sparse(const DepthMap& depth, int64_t n_points, Rng& rng);

/// Fraction of pixels that are valid in `before` but missing in `after`.
double zeroed_fraction(const DepthMap& before, const DepthMap& after);

}  // namespace dmlrn
