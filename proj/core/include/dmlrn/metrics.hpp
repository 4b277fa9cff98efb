#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "dmlrn/types.hpp"

namespace dmlrn {

constexpr std::array<double, 5> kDeltaThresholds = {1.05, 1.10, 1.25,
                                                    1.25 * 1.25, 1.25 * 1.25 * 1.25};

struct EvalProfile {
  double max_depth = 10.0;       // dynamic range for SSIM, clamp ceiling
  double min_depth = 0.0;        // clamp floor (only used when clamping)
  bool clamp_to_range = false;   // opt-in clamp of predictions before scoring
  int ssim_window = 11;
  double ssim_sigma = 1.5;
};

struct MetricReport {
  double rmse = 0.0;                 // meters
  double mae = 0.0;                  // meters
  double rel = 0.0;                  // |pred-gt|/gt, unitless
  std::array<double, 5> delta{};     // fractions, thresholds kDeltaThresholds
  double ssim = 0.0;                 // in [-1, 1]
  double irmse = 0.0;                // 1/km
  double imae = 0.0;                 // 1/km
  int64_t valid_pixel_count = 0;     // |{p : gt[p] > 0}|
  int64_t inverse_excluded = 0;      // valid pixels with pred <= 0, skipped by iRMSE/iMAE
};

/// All metrics except SSIM are computed over V = {p : gt[p] > 0}; SSIM sees
/// the full maps with missing values left at zero. Throws when V is empty.
MetricReport evaluate(const DepthMap& pred, const DepthMap& gt,
                      const EvalProfile& profile = {});

/// Mean local SSIM with a Gaussian window, constants C1 = (0.01 L)^2 and
/// C2 = (0.03 L)^2. Window centers are restricted to positions where the
/// window fits entirely inside the maps; if the maps are smaller than the
/// window, the window shrinks to the largest odd size that fits.
double ssim(const DepthMap& a, const DepthMap& b, int window = 11,
            double sigma = 1.5, double dynamic_range = 10.0);

/// Element-wise mean over per-sample reports (used for dataset aggregates).
MetricReport mean_report(const std::vector<MetricReport>& reports);

}  // namespace dmlrn
