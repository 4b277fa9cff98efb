#include "dmlrn/png_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

namespace dmlrn {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error("png: " + path + ": " + what);
}

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReader() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  }
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriter() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
  }
};

}  // namespace

std::vector<uint16_t> read_png16_raw(const std::string& path, int& height, int& width) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) fail(path, "cannot open for reading");

  PngReader r;
  r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!r.png) fail(path, "png_create_read_struct failed");
  r.info = png_create_info_struct(r.png);
  if (!r.info) fail(path, "png_create_info_struct failed");
  if (setjmp(png_jmpbuf(r.png))) fail(path, "libpng error while reading");

  png_init_io(r.png, fp.get());
  png_read_info(r.png, r.info);

  const int bit_depth = png_get_bit_depth(r.png, r.info);
  const int color_type = png_get_color_type(r.png, r.info);
  if (bit_depth != 16 || color_type != PNG_COLOR_TYPE_GRAY)
    fail(path, "expected 16-bit single-channel grayscale");

  width = static_cast<int>(png_get_image_width(r.png, r.info));
  height = static_cast<int>(png_get_image_height(r.png, r.info));
  png_set_swap(r.png);  // PNG stores 16-bit big-endian

  std::vector<uint16_t> data(static_cast<size_t>(height) * width);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y)
    rows[y] = reinterpret_cast<png_bytep>(data.data() + static_cast<size_t>(y) * width);
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
  return data;
}

void write_png16_raw(const std::vector<uint16_t>& data, int height, int width,
                     const std::string& path) {
  if (data.size() != static_cast<size_t>(height) * width)
    throw std::invalid_argument("write_png16_raw: size mismatch");
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) fail(path, "cannot open for writing");

  PngWriter wr;
  wr.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!wr.png) fail(path, "png_create_write_struct failed");
  wr.info = png_create_info_struct(wr.png);
  if (!wr.info) fail(path, "png_create_info_struct failed");
  if (setjmp(png_jmpbuf(wr.png))) fail(path, "libpng error while writing");

  png_init_io(wr.png, fp.get());
  png_set_IHDR(wr.png, wr.info, width, height, 16, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(wr.png, wr.info);
  png_set_swap(wr.png);

  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y)
    rows[y] = reinterpret_cast<png_bytep>(
        const_cast<uint16_t*>(data.data() + static_cast<size_t>(y) * width));
  png_write_image(wr.png, rows.data());
  png_write_end(wr.png, nullptr);
}

DepthMap read_depth_png16(const std::string& path, double scale) {
  if (scale <= 0.0) throw std::invalid_argument("read_depth_png16: scale must be > 0");
  int h = 0, w = 0;
  const auto raw = read_png16_raw(path, h, w);
  DepthMap d(h, w);
  for (size_t i = 0; i < raw.size(); ++i) d.v[i] = raw[i] * scale;
  return d;
}

void write_depth_png16(const DepthMap& d, const std::string& path, double scale) {
  if (scale <= 0.0) throw std::invalid_argument("write_depth_png16: scale must be > 0");
  validate(d);
  std::vector<uint16_t> raw(d.v.size());
  for (size_t i = 0; i < d.v.size(); ++i) {
    const double units = std::round(d.v[i] / scale);
    raw[i] = static_cast<uint16_t>(units < 0.0 ? 0.0 : (units > 65535.0 ? 65535.0 : units));
  }
  write_png16_raw(raw, d.height, d.width, path);
}

RgbImage read_rgb_png8(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) fail(path, "cannot open for reading");

  PngReader r;
  r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!r.png) fail(path, "png_create_read_struct failed");
  r.info = png_create_info_struct(r.png);
  if (!r.info) fail(path, "png_create_info_struct failed");
  if (setjmp(png_jmpbuf(r.png))) fail(path, "libpng error while reading");

  png_init_io(r.png, fp.get());
  png_read_info(r.png, r.info);
  if (png_get_bit_depth(r.png, r.info) != 8 ||
      png_get_color_type(r.png, r.info) != PNG_COLOR_TYPE_RGB)
    fail(path, "expected 8-bit 3-channel RGB");

  const int w = static_cast<int>(png_get_image_width(r.png, r.info));
  const int h = static_cast<int>(png_get_image_height(r.png, r.info));
  std::vector<uint8_t> buf(static_cast<size_t>(3) * h * w);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) rows[y] = buf.data() + static_cast<size_t>(3) * y * w;
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);

  RgbImage img(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c)
        img.at(c, y, x) = buf[(static_cast<size_t>(y) * w + x) * 3 + c] / 255.0;
  return img;
}

void write_rgb_png8(const RgbImage& img, const std::string& path) {
  validate(img);
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) fail(path, "cannot open for writing");

  PngWriter wr;
  wr.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!wr.png) fail(path, "png_create_write_struct failed");
  wr.info = png_create_info_struct(wr.png);
  if (!wr.info) fail(path, "png_create_info_struct failed");
  if (setjmp(png_jmpbuf(wr.png))) fail(path, "libpng error while writing");

  png_init_io(wr.png, fp.get());
  png_set_IHDR(wr.png, wr.info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(wr.png, wr.info);

  std::vector<uint8_t> buf(static_cast<size_t>(3) * img.height * img.width);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < 3; ++c) {
        const double v = std::round(img.at(c, y, x) * 255.0);
        buf[(static_cast<size_t>(y) * img.width + x) * 3 + c] =
            static_cast<uint8_t>(v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v));
      }
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y)
    rows[y] = buf.data() + static_cast<size_t>(3) * y * img.width;
  png_write_image(wr.png, rows.data());
  png_write_end(wr.png, nullptr);
}

}  // namespace dmlrn
