#pragma once

#include "dmlrn/losses.hpp"
#include "dmlrn/metrics.hpp"
#include "dmlrn/segmentation.hpp"
#include "dmlrn/types.hpp"

namespace dmlrn::oracles {

// Brute-force reference implementations, written as literal per-definition
// loops with no algorithmic shortcuts and no code shared with the fast
// paths they check. They ship with the library so the acceptance checks can
// be re-run by users (`dmlrn eval --check-oracle`). Inputs are capped at
// 64x64 pixels; these are not meant to be fast.

MetricReport oracle_metrics(const DepthMap& pred, const DepthMap& gt,
                            const EvalProfile& profile = {});

double oracle_ssim(const DepthMap& a, const DepthMap& b, int window, double sigma,
                   double dynamic_range);

double oracle_pairwise(const ValidSet& vs, LossKind kind);

SegmentLabeling oracle_segment(const RgbImage& rgb, double k, int min_size);

/// True when the two labelings induce the same partition, i.e. they are
/// equal up to a relabeling of segment ids.
bool same_partition(const SegmentLabeling& a, const SegmentLabeling& b);

}  // namespace dmlrn::oracles
