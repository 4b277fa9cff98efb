#pragma once

#include <string>
#include <vector>

#include "dmlrn/types.hpp"

namespace dmlrn::plots {

/// Map t in [0,1] to a perceptual dark-to-bright color ramp.
void colormap(double t, double& r, double& g, double& b);

/// Depth map as a false-color PNG; missing pixels render black.
void write_depth_png(const DepthMap& d, double max_depth, const std::string& path);

/// Prediction and ground truth side by side under one shared color scale.
void write_side_by_side_png(const DepthMap& pred, const DepthMap& gt, double max_depth,
                            const std::string& path);

/// |pred - gt| scaled by err_scale; pixels without ground truth are black.
void write_error_png(const DepthMap& pred, const DepthMap& gt, double err_scale,
                     const std::string& path);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Deterministic SVG line plot (fixed float formatting, byte-stable for
/// identical inputs).
void write_line_svg(const std::vector<Series>& series, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::string& path);

}  // namespace dmlrn::plots
