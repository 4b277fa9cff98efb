#include "dmlrn/dataset.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "dmlrn/image_ops.hpp"
#include "dmlrn/png_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace dmlrn {

DatasetProfile profile_by_name(const std::string& name) {
  DatasetProfile p;
  p.name = name;
  if (name == "synthetic") {
    p.depth_png_scale = 1.0 / 4000.0;
    p.flip_augment = true;
  } else if (name == "matterport") {
    p.depth_png_scale = 1.0 / 4000.0;
    p.flip_augment = true;
  } else if (name == "nyu") {
    p.depth_png_scale = 1.0 / 1000.0;
    p.crop_top = 45;
    p.crop_bottom = 15;
    p.crop_left = 45;
    p.crop_right = 40;
    p.resize_to = Extent{256, 320};
    p.flip_augment = true;
  } else if (name == "scannet") {
    p.depth_png_scale = 1.0 / 1000.0;
  } else if (name == "kitti") {
    p.depth_png_scale = 1.0 / 256.0;
    p.crop_to = Extent{256, 1216};
    p.flip_augment = true;
    p.max_depth = 85.0;
  } else {
    throw std::invalid_argument("unknown dataset profile: " + name);
  }
  return p;
}

RGBDSample preprocess(const RGBDSample& sample, const DatasetProfile& profile) {
  RGBDSample out = sample;

  int top = profile.crop_top, left = profile.crop_left;
  int h = sample.rgb.height - profile.crop_top - profile.crop_bottom;
  int w = sample.rgb.width - profile.crop_left - profile.crop_right;
  if (profile.crop_to) {
    // fixed-size crop anchored at the bottom (sparse returns are rare at the
    // top of outdoor frames), centered horizontally
    h = profile.crop_to->height;
    w = profile.crop_to->width;
    top = sample.rgb.height - h;
    left = (sample.rgb.width - w) / 2;
    if (top < 0 || left < 0)
      throw std::invalid_argument("preprocess: image smaller than crop_to");
  }
  if (h < 1 || w < 1) throw std::invalid_argument("preprocess: crop larger than image");

  if (top != 0 || left != 0 || h != sample.rgb.height || w != sample.rgb.width) {
    out.rgb = crop(out.rgb, top, left, h, w);
    out.sensor = crop(out.sensor, top, left, h, w);
    out.mask = crop(out.mask, top, left, h, w);
    if (out.gt) out.gt = crop(*out.gt, top, left, h, w);
  }

  if (profile.resize_to) {
    const int rh = profile.resize_to->height, rw = profile.resize_to->width;
    out.rgb = resize_bilinear(out.rgb, rh, rw);
    out.sensor = resize_nearest(out.sensor, rh, rw);
    out.mask = resize_nearest(out.mask, rh, rw);
    if (out.gt) out.gt = resize_nearest(*out.gt, rh, rw);
  }
  return out;
}

std::string sample_id(int index) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%06d", index);
  return buf;
}

void write_sample(const std::string& dir, const std::string& id,
                  const RGBDSample& sample, double depth_scale, bool with_gt) {
  fs::create_directories(fs::path(dir) / "rgb");
  fs::create_directories(fs::path(dir) / "depth");
  if (with_gt) fs::create_directories(fs::path(dir) / "gt");
  write_rgb_png8(sample.rgb, (fs::path(dir) / "rgb" / (id + ".png")).string());
  write_depth_png16(sample.sensor, (fs::path(dir) / "depth" / (id + ".png")).string(),
                    depth_scale);
  if (with_gt) {
    if (!sample.gt) throw std::invalid_argument("write_sample: gt requested but absent");
    write_depth_png16(*sample.gt, (fs::path(dir) / "gt" / (id + ".png")).string(),
                      depth_scale);
  }
}

RGBDSample read_sample(const std::string& dir, const std::string& id,
                       double depth_scale, bool want_gt) {
  RGBDSample s;
  s.rgb = read_rgb_png8((fs::path(dir) / "rgb" / (id + ".png")).string());
  s.sensor =
      read_depth_png16((fs::path(dir) / "depth" / (id + ".png")).string(), depth_scale);
  s.mask = mask_from_depth(s.sensor);
  if (want_gt) {
    const auto gt_path = fs::path(dir) / "gt" / (id + ".png");
    if (fs::exists(gt_path)) s.gt = read_depth_png16(gt_path.string(), depth_scale);
  }
  return s;
}

void write_meta(const DatasetIndex& index) {
  json j;
  j["profile"] = index.profile.name;
  j["depth_png_scale"] = index.profile.depth_png_scale;
  j["max_depth"] = index.profile.max_depth;
  j["has_gt"] = index.has_gt;
  j["splits"]["train"] = index.train_ids;
  j["splits"]["val"] = index.val_ids;
  std::ofstream out(fs::path(index.dir) / "meta.json");
  if (!out) throw std::runtime_error("write_meta: cannot write " + index.dir);
  out << j.dump(2) << '\n';
}

DatasetIndex read_meta(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "meta.json");
  if (!in) throw std::runtime_error("read_meta: no meta.json in " + dir);
  json j;
  in >> j;
  DatasetIndex index;
  index.dir = dir;
  index.profile = profile_by_name(j.at("profile").get<std::string>());
  if (j.contains("depth_png_scale"))
    index.profile.depth_png_scale = j["depth_png_scale"].get<double>();
  if (j.contains("max_depth")) index.profile.max_depth = j["max_depth"].get<double>();
  index.has_gt = j.value("has_gt", false);
  index.train_ids = j.at("splits").at("train").get<std::vector<std::string>>();
  index.val_ids = j.at("splits").at("val").get<std::vector<std::string>>();
  return index;
}

DatasetIndex generate_dataset(const std::string& dir, int n, const SceneConfig& base,
                              const DatasetProfile& profile) {
  if (n < 0) throw std::invalid_argument("generate_dataset: n must be >= 0");
  fs::create_directories(dir);
  DatasetIndex index;
  index.dir = dir;
  index.profile = profile;
  index.has_gt = true;
  for (int i = 0; i < n; ++i) {
    SceneConfig cfg = base;
    cfg.rng_seed = base.rng_seed + static_cast<uint64_t>(i);
    const RGBDSample sample = generate_scene(cfg);
    const std::string id = sample_id(i);
    write_sample(dir, id, sample, profile.depth_png_scale, /*with_gt=*/true);
    if (mix_seed(cfg.rng_seed) % 10 == 0)
      index.val_ids.push_back(id);
    else
      index.train_ids.push_back(id);
  }
  write_meta(index);
  return index;
}

std::vector<RGBDSample> load_samples(const DatasetIndex& index,
                                     const std::vector<std::string>& ids) {
  std::vector<RGBDSample> out;
  out.reserve(ids.size());
  for (const auto& id : ids)
    out.push_back(read_sample(index.dir, id, index.profile.depth_png_scale, true));
  return out;
}

}  // namespace dmlrn
