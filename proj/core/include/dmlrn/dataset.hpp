#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dmlrn/scene.hpp"
#include "dmlrn/types.hpp"

namespace dmlrn {

/// Size as (height, width).
struct Extent {
  int height = 0;
  int width = 0;
};

/// Per-corpus conventions: PNG depth scale, border crop or fixed-size crop,
/// optional resize, flip augmentation.
struct DatasetProfile {
  std::string name = "synthetic";
  double depth_png_scale = 1.0 / 4000.0;  // meters per stored unit
  int crop_top = 0, crop_bottom = 0, crop_left = 0, crop_right = 0;
  std::optional<Extent> crop_to;    // fixed-size crop, bottom-anchored, centered horizontally
  std::optional<Extent> resize_to;  // must be divisible by 32 to feed the network
  bool flip_augment = false;
  double max_depth = 10.0;
  double min_depth = 0.1;
};

/// Known profiles: synthetic, matterport, nyu, scannet, kitti.
DatasetProfile profile_by_name(const std::string& name);

/// Border/fixed crop followed by optional resize. RGB is resized
/// bilinearly; depth and masks use nearest-neighbor so no depth value is
/// ever fabricated by interpolation.
RGBDSample preprocess(const RGBDSample& sample, const DatasetProfile& profile);

/// On-disk layout: rgb/NNNNNN.png (8-bit RGB), depth/NNNNNN.png (16-bit),
/// gt/NNNNNN.png (16-bit, optional), meta.json with the profile, scale and
/// split lists.
struct DatasetIndex {
  std::string dir;
  DatasetProfile profile;
  std::vector<std::string> train_ids;
  std::vector<std::string> val_ids;
  bool has_gt = false;
};

std::string sample_id(int index);  // zero-padded six digits

void write_sample(const std::string& dir, const std::string& id,
                  const RGBDSample& sample, double depth_scale, bool with_gt);
RGBDSample read_sample(const std::string& dir, const std::string& id,
                       double depth_scale, bool want_gt);

void write_meta(const DatasetIndex& index);
DatasetIndex read_meta(const std::string& dir);

/// Generate n synthetic scenes (seeds base_seed + i) into dir with a ~10%
/// validation split chosen by per-sample seed hash.
DatasetIndex generate_dataset(const std::string& dir, int n, const SceneConfig& base,
                              const DatasetProfile& profile);

/// Eagerly load all samples listed in the index (train first, then val).
std::vector<RGBDSample> load_samples(const DatasetIndex& index,
                                     const std::vector<std::string>& ids);

}  // namespace dmlrn
