#include "plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "dmlrn/png_io.hpp"

namespace dmlrn::plots {

void colormap(double t, double& r, double& g, double& b) {
  t = std::clamp(t, 0.0, 1.0);
  // three-stop ramp: deep blue -> warm orange -> light yellow
  if (t < 0.5) {
    const double u = t / 0.5;
    r = 0.05 + 0.85 * u;
    g = 0.05 + 0.45 * u;
    b = 0.35 * (1.0 - u) + 0.10;
  } else {
    const double u = (t - 0.5) / 0.5;
    r = 0.90 + 0.08 * u;
    g = 0.50 + 0.45 * u;
    b = 0.10 + 0.55 * u;
  }
}

namespace {

RgbImage depth_to_rgb(const DepthMap& d, double max_depth) {
  RgbImage img(d.height, d.width);
  for (int y = 0; y < d.height; ++y)
    for (int x = 0; x < d.width; ++x) {
      const double v = d.at(y, x);
      if (v <= 0.0) continue;  // missing stays black
      double r, g, b;
      colormap(v / max_depth, r, g, b);
      img.at(0, y, x) = r;
      img.at(1, y, x) = g;
      img.at(2, y, x) = b;
    }
  return img;
}

}  // namespace

void write_depth_png(const DepthMap& d, double max_depth, const std::string& path) {
  write_rgb_png8(depth_to_rgb(d, max_depth), path);
}

void write_side_by_side_png(const DepthMap& pred, const DepthMap& gt, double max_depth,
                            const std::string& path) {
  if (!same_shape(pred, gt))
    throw std::invalid_argument("write_side_by_side_png: shape mismatch");
  const RgbImage a = depth_to_rgb(pred, max_depth);
  const RgbImage b = depth_to_rgb(gt, max_depth);
  const int sep = 2;
  RgbImage canvas(pred.height, pred.width * 2 + sep, 1.0);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < pred.height; ++y) {
      for (int x = 0; x < pred.width; ++x) {
        canvas.at(c, y, x) = a.at(c, y, x);
        canvas.at(c, y, pred.width + sep + x) = b.at(c, y, x);
      }
    }
  write_rgb_png8(canvas, path);
}

void write_error_png(const DepthMap& pred, const DepthMap& gt, double err_scale,
                     const std::string& path) {
  if (!same_shape(pred, gt))
    throw std::invalid_argument("write_error_png: shape mismatch");
  RgbImage img(gt.height, gt.width);
  for (int y = 0; y < gt.height; ++y)
    for (int x = 0; x < gt.width; ++x) {
      if (gt.at(y, x) <= 0.0) continue;
      double r, g, b;
      colormap(std::abs(pred.at(y, x) - gt.at(y, x)) / err_scale, r, g, b);
      img.at(0, y, x) = r;
      img.at(1, y, x) = g;
      img.at(2, y, x) = b;
    }
  write_rgb_png8(img, path);
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                               "#9467bd", "#8c564b"};

}  // namespace

void write_line_svg(const std::vector<Series>& series, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::string& path) {
  if (series.empty()) throw std::invalid_argument("write_line_svg: no series");
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const Series& s : series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  const double pad_y = 0.08 * (ymax - ymin);
  ymin -= pad_y;
  ymax += pad_y;

  const int width = 640, height = 440;
  const int ml = 70, mr = 20, mt = 40, mb = 50;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto sx = [&](double x) { return ml + pw * (x - xmin) / (xmax - xmin); };
  auto sy = [&](double y) { return mt + ph * (1.0 - (y - ymin) / (ymax - ymin)); };

  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_line_svg: cannot write " + path);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

  // frame + ticks
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << fmt(pw)
     << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0;
    const double yv = ymin + (ymax - ymin) * i / 4.0;
    os << "<text x=\"" << fmt(sx(xv)) << "\" y=\"" << height - mb + 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
       << fmt(xv) << "</text>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << fmt(sy(yv) + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
       << fmt(yv) << "</text>\n";
    os << "<line x1=\"" << fmt(sx(xv)) << "\" y1=\"" << mt + ph << "\" x2=\""
       << fmt(sx(xv)) << "\" y2=\"" << fmt(mt + ph + 4) << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << fmt(ml - 4.0) << "\" y1=\"" << fmt(sy(yv)) << "\" x2=\"" << ml
       << "\" y2=\"" << fmt(sy(yv)) << "\" stroke=\"black\"/>\n";
  }
  os << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
     << x_label << "</text>\n";
  os << "<text x=\"16\" y=\"" << height / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        "transform=\"rotate(-90 16 " << height / 2 << ")\">" << y_label << "</text>\n";

  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = kSeriesColors[s % 6];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (size_t i = 0; i < series[s].x.size(); ++i)
      os << fmt(sx(series[s].x[i])) << ',' << fmt(sy(series[s].y[i])) << ' ';
    os << "\"/>\n";
    for (size_t i = 0; i < series[s].x.size(); ++i)
      os << "<circle cx=\"" << fmt(sx(series[s].x[i])) << "\" cy=\""
         << fmt(sy(series[s].y[i])) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    os << "<text x=\"" << ml + 12 << "\" y=\"" << mt + 18 + 16 * static_cast<int>(s)
       << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\">"
       << series[s].label << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace dmlrn::plots
