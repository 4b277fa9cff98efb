#pragma once

#include <cstdint>
#include <vector>

#include "dmlrn/types.hpp"

namespace dmlrn {

/// An image partition: contiguous segment ids in [0, segment_count), each
/// segment nonempty and connected under 8-adjacency.
struct SegmentLabeling {
  int height = 0;
  int width = 0;
  std::vector<int32_t> labels;   // row-major, height*width
  int32_t segment_count = 0;
  std::vector<int64_t> areas;    // pixel count per segment id

  int32_t at(int y, int x) const { return labels[static_cast<size_t>(y) * width + x]; }
};

/// Graph-based segmentation on an 8-connected grid. Edge weights are
/// Euclidean RGB distances on a [0,255] scale after Gaussian pre-smoothing.
/// Components a, b merge when the joining edge weight does not exceed
/// min(Int(a) + k/|a|, Int(b) + k/|b|); undersized components are then
/// merged along their lowest-weight boundary edges until every segment has
/// at least min_size pixels. Edges are ordered by (weight, source, target),
/// so the result is fully deterministic.
SegmentLabeling segment_graph_based(const RgbImage& rgb, double k, int min_size,
                                    double presmooth_sigma);

void validate(const SegmentLabeling& seg);

}  // namespace dmlrn
