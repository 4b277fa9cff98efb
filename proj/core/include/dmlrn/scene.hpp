#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "dmlrn/rng.hpp"
#include "dmlrn/types.hpp"

namespace dmlrn {

struct SceneConfig {
  int height = 64;
  int width = 64;                 // both divisible by 32
  double min_depth = 0.5;         // meters
  double max_depth = 10.0;
  int primitive_count = 6;
  uint64_t rng_seed = 0;
  double rgb_noise_sigma = 0.01;  // keeps image segments from being perfectly flat
  double hfov_degrees = 70.0;
};

void validate(const SceneConfig& cfg);

using Vec3 = std::array<double, 3>;

/// Axis-aligned box, seen from outside (an obstacle) or inside (the room).
struct Box {
  Vec3 lo;
  Vec3 hi;
  Vec3 albedo;
};

/// Fronto-parallel rectangle at fixed z.
struct Rect {
  double z = 0.0;
  double x0 = 0.0, x1 = 0.0;
  double y0 = 0.0, y1 = 0.0;
  Vec3 albedo;
};

/// Camera sits at the origin looking down +z; y points down. Depth values
/// are z-depths along the optical axis.
struct Scene {
  std::optional<Box> room;       // camera must be strictly inside
  std::vector<Box> boxes;
  std::vector<Rect> rects;
  Vec3 light_dir = {-0.35, -0.75, -0.55};  // direction toward the light
};

/// Ray-cast depth plus Lambertian-shaded color. Rays that hit nothing get
/// depth 0 (missing); with a room present every ray hits.
RGBDSample render_scene(const Scene& scene, int height, int width,
                        double hfov_degrees, double noise_sigma, Rng& noise_rng);

/// Random room shell plus primitive_count boxes/rectangles, fully
/// deterministic per seed. Every depth lands in [min_depth, max_depth];
/// the result is dense (sensor == gt, mask all true).
RGBDSample generate_scene(const SceneConfig& cfg);

}  // namespace dmlrn
