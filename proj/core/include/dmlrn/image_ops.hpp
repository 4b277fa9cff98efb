#pragma once

#include "dmlrn/types.hpp"

namespace dmlrn {

/// Separable Gaussian blur, kernel radius ceil(3*sigma), reflected borders.
/// sigma <= 0 returns the input unchanged.
RgbImage gaussian_smooth(const RgbImage& img, double sigma);

RgbImage resize_bilinear(const RgbImage& img, int out_h, int out_w);

/// Nearest-neighbor resize. Depth and masks are never interpolated:
/// averaging across discontinuities or into missing (zero) pixels would
/// fabricate measurements.
DepthMap resize_nearest(const DepthMap& d, int out_h, int out_w);
ValidityMask resize_nearest(const ValidityMask& m, int out_h, int out_w);

RgbImage crop(const RgbImage& img, int top, int left, int out_h, int out_w);
DepthMap crop(const DepthMap& d, int top, int left, int out_h, int out_w);
ValidityMask crop(const ValidityMask& m, int top, int left, int out_h, int out_w);

RgbImage hflip(const RgbImage& img);
DepthMap hflip(const DepthMap& d);
ValidityMask hflip(const ValidityMask& m);
RGBDSample hflip(const RGBDSample& s);

}  // namespace dmlrn
