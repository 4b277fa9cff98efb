#include "dmlrn/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dmlrn {

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::L1: return "l1";
    case LossKind::L2: return "l2";
    case LossKind::LOG_L1: return "log_l1";
    case LossKind::LOG_L2: return "log_l2";
    case LossKind::PAIRWISE_LOG_L1: return "pairwise_log_l1";
    case LossKind::PAIRWISE_LOG_L2: return "pairwise_log_l2";
  }
  throw std::logic_error("to_string: bad LossKind");
}

LossKind loss_kind_from_string(const std::string& name) {
  std::string s;
  for (char c : name) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "l1") return LossKind::L1;
  if (s == "l2") return LossKind::L2;
  if (s == "log_l1") return LossKind::LOG_L1;
  if (s == "log_l2") return LossKind::LOG_L2;
  if (s == "pairwise_log_l1") return LossKind::PAIRWISE_LOG_L1;
  if (s == "pairwise_log_l2") return LossKind::PAIRWISE_LOG_L2;
  throw std::invalid_argument("unknown loss kind: " + name);
}

ValidSet build_valid_set(const LogDepthMap& pred_log, const DepthMap& gt) {
  if (pred_log.height != gt.height || pred_log.width != gt.width)
    throw std::invalid_argument("build_valid_set: shape mismatch");
  ValidSet vs;
  for (size_t i = 0; i < gt.v.size(); ++i) {
    if (gt.v[i] > 0.0) {
      vs.indices.push_back(static_cast<int>(i));
      vs.pred_log.push_back(pred_log.v[i]);
      vs.gt.push_back(gt.v[i]);
      vs.residual.push_back(pred_log.v[i] - std::log(gt.v[i]));
    }
  }
  if (vs.indices.empty())
    throw std::invalid_argument("build_valid_set: no valid ground truth pixel");
  return vs;
}

double pairwise_log_l1(const ValidSet& vs) {
  const size_t n = vs.size();
  if (n == 0) throw std::invalid_argument("pairwise_log_l1: empty valid set");
  std::vector<double> d = vs.residual;
  std::sort(d.begin(), d.end());
  // sum over unordered pairs i<j of (d_(j) - d_(i)) = sum_k (2k - n + 1) d_(k)
  double half = 0.0;
  for (size_t k = 0; k < n; ++k)
    half += (2.0 * static_cast<double>(k) - static_cast<double>(n) + 1.0) * d[k];
  return 2.0 * half / (static_cast<double>(n) * static_cast<double>(n));
}

double pairwise_log_l2(const ValidSet& vs) {
  const size_t n = vs.size();
  if (n == 0) throw std::invalid_argument("pairwise_log_l2: empty valid set");
  double mean = 0.0, mean_sq = 0.0;
  for (double d : vs.residual) {
    mean += d;
    mean_sq += d * d;
  }
  mean /= static_cast<double>(n);
  mean_sq /= static_cast<double>(n);
  return 2.0 * (mean_sq - mean * mean);
}

double pixel_loss(LossKind kind, const ValidSet& vs) {
  const size_t n = vs.size();
  if (n == 0) throw std::invalid_argument("pixel_loss: empty valid set");
  double acc = 0.0;
  switch (kind) {
    case LossKind::L1:
      for (size_t i = 0; i < n; ++i) acc += std::abs(std::exp(vs.pred_log[i]) - vs.gt[i]);
      break;
    case LossKind::L2:
      for (size_t i = 0; i < n; ++i) {
        const double e = std::exp(vs.pred_log[i]) - vs.gt[i];
        acc += e * e;
      }
      break;
    case LossKind::LOG_L1:
      for (double d : vs.residual) acc += std::abs(d);
      break;
    case LossKind::LOG_L2:
      for (double d : vs.residual) acc += d * d;
      break;
    default:
      throw std::invalid_argument("pixel_loss: pairwise kind passed");
  }
  return acc / static_cast<double>(n);
}

double pairwise_brute_force(const ValidSet& vs, LossKind kind) {
  const size_t n = vs.size();
  if (n == 0) throw std::invalid_argument("pairwise_brute_force: empty valid set");
  if (n > 4096) throw std::invalid_argument("pairwise_brute_force: valid set too large");
  if (kind != LossKind::PAIRWISE_LOG_L1 && kind != LossKind::PAIRWISE_LOG_L2)
    throw std::invalid_argument("pairwise_brute_force: not a pairwise kind");
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      const double diff = vs.residual[i] - vs.residual[j];
      acc += kind == LossKind::PAIRWISE_LOG_L1 ? std::abs(diff) : diff * diff;
    }
  return acc / (static_cast<double>(n) * static_cast<double>(n));
}

double loss_value(LossKind kind, const ValidSet& vs) {
  switch (kind) {
    case LossKind::PAIRWISE_LOG_L1: return pairwise_log_l1(vs);
    case LossKind::PAIRWISE_LOG_L2: return pairwise_log_l2(vs);
    default: return pixel_loss(kind, vs);
  }
}

std::vector<double> loss_grad(LossKind kind, const ValidSet& vs) {
  const size_t n = vs.size();
  if (n == 0) throw std::invalid_argument("loss_grad: empty valid set");
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> g(n, 0.0);

  switch (kind) {
    case LossKind::L1:
      for (size_t i = 0; i < n; ++i) {
        const double y = std::exp(vs.pred_log[i]);
        const double e = y - vs.gt[i];
        g[i] = (e > 0.0 ? 1.0 : (e < 0.0 ? -1.0 : 0.0)) * y * inv_n;
      }
      return g;
    case LossKind::L2:
      for (size_t i = 0; i < n; ++i) {
        const double y = std::exp(vs.pred_log[i]);
        g[i] = 2.0 * (y - vs.gt[i]) * y * inv_n;
      }
      return g;
    case LossKind::LOG_L1:
      for (size_t i = 0; i < n; ++i) {
        const double d = vs.residual[i];
        g[i] = (d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0)) * inv_n;
      }
      return g;
    case LossKind::LOG_L2:
      for (size_t i = 0; i < n; ++i) g[i] = 2.0 * vs.residual[i] * inv_n;
      return g;
    case LossKind::PAIRWISE_LOG_L2: {
      const double mean =
          std::accumulate(vs.residual.begin(), vs.residual.end(), 0.0) * inv_n;
      for (size_t i = 0; i < n; ++i)
        g[i] = 4.0 * inv_n * (vs.residual[i] - mean);
      return g;
    }
    case LossKind::PAIRWISE_LOG_L1: {
      // dL/dd_i = (2/n^2) * (#{d_j < d_i} - #{d_j > d_i}); ties contribute 0
      std::vector<size_t> order(n);
      std::iota(order.begin(), order.end(), size_t{0});
      std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return vs.residual[a] < vs.residual[b];
      });
      const double scale = 2.0 * inv_n * inv_n;
      size_t k = 0;
      while (k < n) {
        size_t e = k;
        while (e + 1 < n && vs.residual[order[e + 1]] == vs.residual[order[k]]) ++e;
        const double less = static_cast<double>(k);
        const double greater = static_cast<double>(n - 1 - e);
        for (size_t t = k; t <= e; ++t) g[order[t]] = scale * (less - greater);
        k = e + 1;
      }
      return g;
    }
  }
  throw std::logic_error("loss_grad: bad LossKind");
}

}  // namespace dmlrn
