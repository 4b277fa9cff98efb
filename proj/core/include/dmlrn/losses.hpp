#pragma once

#include <string>
#include <vector>

#include "dmlrn/types.hpp"

namespace dmlrn {

enum class LossKind {
  L1,
  L2,
  LOG_L1,
  LOG_L2,
  PAIRWISE_LOG_L1,
  PAIRWISE_LOG_L2,
};

constexpr int kLossKindCount = 6;

std::string to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& name);

/// Pixels with nonzero ground truth, with per-pixel log-domain residuals
/// d_i = pred_log_i - log(gt_i).
struct ValidSet {
  std::vector<int> indices;      // flat row-major pixel indices
  std::vector<double> pred_log;  // predicted log depth at each index
  std::vector<double> gt;        // ground truth depth (> 0) at each index
  std::vector<double> residual;  // pred_log - log(gt)

  size_t size() const { return indices.size(); }
};

/// Throws if the ground truth has no valid pixel (untrainable sample).
ValidSet build_valid_set(const LogDepthMap& pred_log, const DepthMap& gt);

/// Mean over all ordered pixel pairs of |d_i - d_j|, diagonal included,
/// normalized by |O|^2. Evaluated in O(N log N) via the sorted prefix form.
/// Invariant to scaling all predictions by a positive constant.
double pairwise_log_l1(const ValidSet& vs);

/// Mean over ordered pairs of (d_i - d_j)^2; closed form: twice the biased
/// variance of the residuals.
double pairwise_log_l2(const ValidSet& vs);

/// Mean per-pixel penalty for the four non-pairwise kinds. L1/L2 act on
/// depth (predictions are exponentiated), LOG_L1/LOG_L2 on the residuals.
double pixel_loss(LossKind kind, const ValidSet& vs);

/// Literal double loop over all ordered pairs; guard at |O| <= 4096.
/// Kept alongside the fast paths so the exact formulas stay testable.
double pairwise_brute_force(const ValidSet& vs, LossKind kind);

double loss_value(LossKind kind, const ValidSet& vs);

/// d(loss)/d(pred_log_i), aligned with vs.indices. Gradients for L1/L2 flow
/// through the exponentiation since the network predicts log depth.
std::vector<double> loss_grad(LossKind kind, const ValidSet& vs);

}  // namespace dmlrn
