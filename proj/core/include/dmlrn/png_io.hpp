#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmlrn/types.hpp"

namespace dmlrn {

/// Read a single-channel 16-bit PNG as depth = raw * scale; raw 0 stays 0
/// ("missing"). Anything but 16-bit grayscale is an error.
DepthMap read_depth_png16(const std::string& path, double scale);

/// Inverse of read_depth_png16 with round-to-nearest; values are clipped to
/// the uint16 range after scaling.
void write_depth_png16(const DepthMap& d, const std::string& path, double scale);

/// 8-bit 3-channel PNG, values mapped to/from [0, 1].
RgbImage read_rgb_png8(const std::string& path);
void write_rgb_png8(const RgbImage& img, const std::string& path);

/// Raw 16-bit grayscale access, used by round-trip checks and tools.
std::vector<uint16_t> read_png16_raw(const std::string& path, int& height, int& width);
void write_png16_raw(const std::vector<uint16_t>& data, int height, int width,
                     const std::string& path);

}  // namespace dmlrn
