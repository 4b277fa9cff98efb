#include "dmlrn/image_ops.hpp"

#include <algorithm>
#include <cmath>

namespace dmlrn {

namespace {

// Reflect an out-of-range coordinate back into [0, n) (symmetric, edge
// pixel not repeated; matches cv::BORDER_REFLECT_101 for n > 1).
int reflect(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * (n - 1) - i;
  }
  return i;
}

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-0.5 * (i * i) / (sigma * sigma));
    k[i + radius] = w;
    sum += w;
  }
  for (double& w : k) w /= sum;
  return k;
}

int nearest_index(int out_i, int out_n, int in_n) {
  // floor mapping; exact for integer scale factors
  int i = static_cast<int>(static_cast<int64_t>(out_i) * in_n / out_n);
  return std::min(i, in_n - 1);
}

}  // namespace

RgbImage gaussian_smooth(const RgbImage& img, double sigma) {
  if (sigma <= 0.0) return img;
  const auto k = gaussian_kernel(sigma);
  const int radius = static_cast<int>(k.size() / 2);
  const int h = img.height, w = img.width;
  RgbImage tmp(h, w), out(h, w);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i)
          acc += k[i + radius] * img.at(c, y, reflect(x + i, w));
        tmp.at(c, y, x) = acc;
      }
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i)
          acc += k[i + radius] * tmp.at(c, reflect(y + i, h), x);
        out.at(c, y, x) = acc;
      }
  }
  return out;
}

RgbImage resize_bilinear(const RgbImage& img, int out_h, int out_w) {
  if (out_h < 1 || out_w < 1)
    throw std::invalid_argument("resize_bilinear: output size must be positive");
  RgbImage out(out_h, out_w);
  const double sy = static_cast<double>(img.height) / out_h;
  const double sx = static_cast<double>(img.width) / out_w;
  for (int y = 0; y < out_h; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, img.height - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double wy = fy - y0;
    for (int x = 0; x < out_w; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, img.width - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, img.width - 1);
      const double wx = fx - x0;
      for (int c = 0; c < 3; ++c) {
        const double top = (1.0 - wx) * img.at(c, y0, x0) + wx * img.at(c, y0, x1);
        const double bot = (1.0 - wx) * img.at(c, y1, x0) + wx * img.at(c, y1, x1);
        out.at(c, y, x) = (1.0 - wy) * top + wy * bot;
      }
    }
  }
  return out;
}

DepthMap resize_nearest(const DepthMap& d, int out_h, int out_w) {
  if (out_h < 1 || out_w < 1)
    throw std::invalid_argument("resize_nearest: output size must be positive");
  DepthMap out(out_h, out_w);
  for (int y = 0; y < out_h; ++y) {
    const int iy = nearest_index(y, out_h, d.height);
    for (int x = 0; x < out_w; ++x)
      out.at(y, x) = d.at(iy, nearest_index(x, out_w, d.width));
  }
  return out;
}

ValidityMask resize_nearest(const ValidityMask& m, int out_h, int out_w) {
  if (out_h < 1 || out_w < 1)
    throw std::invalid_argument("resize_nearest: output size must be positive");
  ValidityMask out(out_h, out_w);
  for (int y = 0; y < out_h; ++y) {
    const int iy = nearest_index(y, out_h, m.height);
    for (int x = 0; x < out_w; ++x)
      out.at(y, x) = m.at(iy, nearest_index(x, out_w, m.width));
  }
  return out;
}

namespace {
void check_crop(int h, int w, int top, int left, int out_h, int out_w) {
  if (out_h < 1 || out_w < 1 || top < 0 || left < 0 || top + out_h > h ||
      left + out_w > w)
    throw std::invalid_argument("crop: window outside image");
}
}  // namespace

RgbImage crop(const RgbImage& img, int top, int left, int out_h, int out_w) {
  check_crop(img.height, img.width, top, left, out_h, out_w);
  RgbImage out(out_h, out_w);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < out_h; ++y)
      for (int x = 0; x < out_w; ++x) out.at(c, y, x) = img.at(c, top + y, left + x);
  return out;
}

DepthMap crop(const DepthMap& d, int top, int left, int out_h, int out_w) {
  check_crop(d.height, d.width, top, left, out_h, out_w);
  DepthMap out(out_h, out_w);
  for (int y = 0; y < out_h; ++y)
    for (int x = 0; x < out_w; ++x) out.at(y, x) = d.at(top + y, left + x);
  return out;
}

ValidityMask crop(const ValidityMask& m, int top, int left, int out_h, int out_w) {
  check_crop(m.height, m.width, top, left, out_h, out_w);
  ValidityMask out(out_h, out_w);
  for (int y = 0; y < out_h; ++y)
    for (int x = 0; x < out_w; ++x) out.at(y, x) = m.at(top + y, left + x);
  return out;
}

RgbImage hflip(const RgbImage& img) {
  RgbImage out(img.height, img.width);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x)
        out.at(c, y, x) = img.at(c, y, img.width - 1 - x);
  return out;
}

DepthMap hflip(const DepthMap& d) {
  DepthMap out(d.height, d.width);
  for (int y = 0; y < d.height; ++y)
    for (int x = 0; x < d.width; ++x) out.at(y, x) = d.at(y, d.width - 1 - x);
  return out;
}

ValidityMask hflip(const ValidityMask& m) {
  ValidityMask out(m.height, m.width);
  for (int y = 0; y < m.height; ++y)
    for (int x = 0; x < m.width; ++x) out.at(y, x) = m.at(y, m.width - 1 - x);
  return out;
}

RGBDSample hflip(const RGBDSample& s) {
  RGBDSample out;
  out.rgb = hflip(s.rgb);
  out.sensor = hflip(s.sensor);
  out.mask = hflip(s.mask);
  if (s.gt) out.gt = hflip(*s.gt);
  return out;
}

}  // namespace dmlrn
