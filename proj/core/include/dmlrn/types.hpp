#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dmlrn {

/// Dense per-pixel range values in meters. A value of exactly 0 means
/// "no measurement"; missing depth is never encoded as NaN.
struct DepthMap {
  int height = 0;
  int width = 0;
  std::vector<double> v;  // row-major, height*width

  DepthMap() = default;
  DepthMap(int h, int w, double fill = 0.0)
      : height(h), width(w), v(static_cast<size_t>(h) * w, fill) {}

  double& at(int y, int x) { return v[static_cast<size_t>(y) * width + x]; }
  double at(int y, int x) const { return v[static_cast<size_t>(y) * width + x]; }
  size_t size() const { return v.size(); }
};

/// Boolean map marking pixels where depth exists (nonzero).
struct ValidityMask {
  int height = 0;
  int width = 0;
  std::vector<uint8_t> flags;  // row-major, 0/1

  ValidityMask() = default;
  ValidityMask(int h, int w, bool fill = false)
      : height(h), width(w), flags(static_cast<size_t>(h) * w, fill ? 1 : 0) {}

  uint8_t& at(int y, int x) { return flags[static_cast<size_t>(y) * width + x]; }
  uint8_t at(int y, int x) const { return flags[static_cast<size_t>(y) * width + x]; }
  size_t count() const;
};

/// 3-channel color image, planar layout (c, y, x), values in [0, 1].
struct RgbImage {
  int height = 0;
  int width = 0;
  std::vector<double> v;  // 3*height*width

  RgbImage() = default;
  RgbImage(int h, int w, double fill = 0.0)
      : height(h), width(w), v(static_cast<size_t>(3) * h * w, fill) {}

  double& at(int c, int y, int x) {
    return v[(static_cast<size_t>(c) * height + y) * width + x];
  }
  double at(int c, int y, int x) const {
    return v[(static_cast<size_t>(c) * height + y) * width + x];
  }
};

/// Color image + sensor depth + validity mask + optional ground truth.
/// All grids share the same height/width.
struct RGBDSample {
  RgbImage rgb;
  DepthMap sensor;
  ValidityMask mask;
  std::optional<DepthMap> gt;
};

/// Log-domain depth prediction; values are unconstrained finite reals.
struct LogDepthMap {
  int height = 0;
  int width = 0;
  std::vector<double> v;

  LogDepthMap() = default;
  LogDepthMap(int h, int w, double fill = 0.0)
      : height(h), width(w), v(static_cast<size_t>(h) * w, fill) {}

  double& at(int y, int x) { return v[static_cast<size_t>(y) * width + x]; }
  double at(int y, int x) const { return v[static_cast<size_t>(y) * width + x]; }
};

ValidityMask mask_from_depth(const DepthMap& d);

/// Zero out depth values where the mask is false.
DepthMap apply_mask(const DepthMap& d, const ValidityMask& m);

// Contract checks. Ops that consume these types call them at their
// boundaries; aggregates themselves are cheap to construct unchecked.
void validate(const DepthMap& d);
void validate(const ValidityMask& m);
void validate(const RgbImage& img);
void validate(const RGBDSample& s);

inline bool same_shape(const DepthMap& a, const DepthMap& b) {
  return a.height == b.height && a.width == b.width;
}

}  // namespace dmlrn
