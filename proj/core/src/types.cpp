#include "dmlrn/types.hpp"

#include <algorithm>

namespace dmlrn {

size_t ValidityMask::count() const {
  return static_cast<size_t>(std::count_if(flags.begin(), flags.end(),
                                           [](uint8_t f) { return f != 0; }));
}

ValidityMask mask_from_depth(const DepthMap& d) {
  ValidityMask m(d.height, d.width);
  for (size_t i = 0; i < d.v.size(); ++i) m.flags[i] = d.v[i] > 0.0 ? 1 : 0;
  return m;
}

DepthMap apply_mask(const DepthMap& d, const ValidityMask& m) {
  if (d.height != m.height || d.width != m.width)
    throw std::invalid_argument("apply_mask: dimension mismatch");
  DepthMap out = d;
  for (size_t i = 0; i < out.v.size(); ++i)
    if (!m.flags[i]) out.v[i] = 0.0;
  return out;
}

void validate(const DepthMap& d) {
  if (d.height < 1 || d.width < 1)
    throw std::invalid_argument("DepthMap: height and width must be >= 1");
  if (d.v.size() != static_cast<size_t>(d.height) * d.width)
    throw std::invalid_argument("DepthMap: storage size mismatch");
  for (double x : d.v)
    if (!std::isfinite(x) || x < 0.0)
      throw std::invalid_argument("DepthMap: values must be finite and >= 0");
}

void validate(const ValidityMask& m) {
  if (m.height < 1 || m.width < 1)
    throw std::invalid_argument("ValidityMask: height and width must be >= 1");
  if (m.flags.size() != static_cast<size_t>(m.height) * m.width)
    throw std::invalid_argument("ValidityMask: storage size mismatch");
}

void validate(const RgbImage& img) {
  if (img.height < 1 || img.width < 1)
    throw std::invalid_argument("RgbImage: height and width must be >= 1");
  if (img.v.size() != static_cast<size_t>(3) * img.height * img.width)
    throw std::invalid_argument("RgbImage: storage size mismatch");
  for (double x : img.v)
    if (!std::isfinite(x) || x < 0.0 || x > 1.0)
      throw std::invalid_argument("RgbImage: values must be in [0, 1]");
}

void validate(const RGBDSample& s) {
  validate(s.rgb);
  validate(s.sensor);
  validate(s.mask);
  if (s.rgb.height != s.sensor.height || s.rgb.width != s.sensor.width ||
      s.mask.height != s.sensor.height || s.mask.width != s.sensor.width)
    throw std::invalid_argument("RGBDSample: grids must share height/width");
  for (size_t i = 0; i < s.sensor.v.size(); ++i)
    if ((s.sensor.v[i] > 0.0) != (s.mask.flags[i] != 0))
      throw std::invalid_argument("RGBDSample: mask inconsistent with sensor depth");
  if (s.gt) {
    validate(*s.gt);
    if (!same_shape(*s.gt, s.sensor))
      throw std::invalid_argument("RGBDSample: gt shape mismatch");
  }
}

}  // namespace dmlrn
