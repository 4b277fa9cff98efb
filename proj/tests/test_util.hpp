#pragma once

#include <vector>

#include "dmlrn/losses.hpp"
#include "dmlrn/rng.hpp"
#include "dmlrn/types.hpp"

namespace dmlrn::test {

inline DepthMap random_depth(Rng& rng, int h, int w, double lo = 0.5, double hi = 9.5,
                             double missing_prob = 0.0) {
  DepthMap d(h, w);
  for (double& x : d.v)
    x = rng.uniform() < missing_prob ? 0.0 : lo + (hi - lo) * rng.uniform();
  return d;
}

inline RgbImage random_rgb(Rng& rng, int h, int w) {
  RgbImage img(h, w);
  for (double& x : img.v) x = rng.uniform();
  return img;
}

inline LogDepthMap random_log_depth(Rng& rng, int h, int w, double lo = -1.0,
                                    double hi = 2.3) {
  LogDepthMap d(h, w);
  for (double& x : d.v) x = lo + (hi - lo) * rng.uniform();
  return d;
}

/// ValidSet over all pixels of a 1xN pair.
inline ValidSet make_valid_set(const std::vector<double>& pred_log,
                               const std::vector<double>& gt) {
  LogDepthMap pl(1, static_cast<int>(pred_log.size()));
  pl.v = pred_log;
  DepthMap g(1, static_cast<int>(gt.size()));
  g.v = gt;
  return build_valid_set(pl, g);
}

}  // namespace dmlrn::test
