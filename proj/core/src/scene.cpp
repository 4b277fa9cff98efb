#include "dmlrn/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dmlrn {

void validate(const SceneConfig& cfg) {
  if (cfg.height < 32 || cfg.width < 32 || cfg.height % 32 != 0 || cfg.width % 32 != 0)
    throw std::invalid_argument("SceneConfig: height/width must be positive multiples of 32");
  if (!(cfg.min_depth > 0.0) || !(cfg.min_depth < cfg.max_depth))
    throw std::invalid_argument("SceneConfig: need 0 < min_depth < max_depth");
  if (cfg.primitive_count < 1)
    throw std::invalid_argument("SceneConfig: primitive_count must be >= 1");
  if (cfg.rgb_noise_sigma < 0.0)
    throw std::invalid_argument("SceneConfig: rgb_noise_sigma must be >= 0");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Hit {
  double t = kInf;   // z-depth (rays are parameterized as t * (u, v, 1))
  Vec3 normal{};
  Vec3 albedo{};
};

// Exit point of a ray starting inside the box; the room surface seen from
// within. Normal points back into the room.
void hit_room(const Box& room, double u, double v, Hit& hit) {
  double t = kInf;
  Vec3 n{};
  const double tz = room.hi[2];  // dir z-component is 1
  t = tz;
  n = {0.0, 0.0, -1.0};
  if (u > 0.0 && room.hi[0] / u < t) {
    t = room.hi[0] / u;
    n = {-1.0, 0.0, 0.0};
  } else if (u < 0.0 && room.lo[0] / u < t) {
    t = room.lo[0] / u;
    n = {1.0, 0.0, 0.0};
  }
  if (v > 0.0 && room.hi[1] / v < t) {
    t = room.hi[1] / v;
    n = {0.0, -1.0, 0.0};
  } else if (v < 0.0 && room.lo[1] / v < t) {
    t = room.lo[1] / v;
    n = {0.0, 1.0, 0.0};
  }
  if (t < hit.t) {
    hit.t = t;
    hit.normal = n;
    hit.albedo = room.albedo;
  }
}

void hit_box(const Box& box, double u, double v, Hit& hit) {
  const double dir[3] = {u, v, 1.0};
  double tmin = 0.0, tmax = kInf;
  int axis = 2;
  double sign = -1.0;
  for (int a = 0; a < 3; ++a) {
    if (dir[a] == 0.0) {
      if (0.0 < box.lo[a] || 0.0 > box.hi[a]) return;  // origin outside slab
      continue;
    }
    double t0 = box.lo[a] / dir[a];
    double t1 = box.hi[a] / dir[a];
    double s = -1.0;
    if (t0 > t1) {
      std::swap(t0, t1);
      s = 1.0;
    }
    if (t0 > tmin) {
      tmin = t0;
      axis = a;
      sign = s;
    }
    tmax = std::min(tmax, t1);
  }
  if (tmax < tmin || tmin <= 0.0) return;
  if (tmin < hit.t) {
    hit.t = tmin;
    hit.normal = {0.0, 0.0, 0.0};
    hit.normal[axis] = sign;
    hit.albedo = box.albedo;
  }
}

void hit_rect(const Rect& rect, double u, double v, Hit& hit) {
  if (rect.z <= 0.0) return;
  const double x = u * rect.z, y = v * rect.z;
  if (x < rect.x0 || x > rect.x1 || y < rect.y0 || y > rect.y1) return;
  if (rect.z < hit.t) {
    hit.t = rect.z;
    hit.normal = {0.0, 0.0, -1.0};
    hit.albedo = rect.albedo;
  }
}

Vec3 normalized(Vec3 a) {
  const double n = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  return {a[0] / n, a[1] / n, a[2] / n};
}

}  // namespace

RGBDSample render_scene(const Scene& scene, int height, int width,
                        double hfov_degrees, double noise_sigma, Rng& noise_rng) {
  if (height < 1 || width < 1)
    throw std::invalid_argument("render_scene: bad image size");
  const double f = (width / 2.0) / std::tan(hfov_degrees * M_PI / 360.0);
  const Vec3 light = normalized(scene.light_dir);

  RGBDSample out;
  out.rgb = RgbImage(height, width);
  out.sensor = DepthMap(height, width);

  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const double u = (x + 0.5 - width / 2.0) / f;
      const double v = (y + 0.5 - height / 2.0) / f;
      Hit hit;
      if (scene.room) hit_room(*scene.room, u, v, hit);
      for (const Box& b : scene.boxes) hit_box(b, u, v, hit);
      for (const Rect& r : scene.rects) hit_rect(r, u, v, hit);
      if (hit.t == kInf) continue;  // no surface: depth stays 0 (missing)

      out.sensor.at(y, x) = hit.t;
      const double ndotl = hit.normal[0] * (-light[0]) + hit.normal[1] * (-light[1]) +
                           hit.normal[2] * (-light[2]);
      const double shade = 0.3 + 0.7 * std::max(0.0, ndotl);
      for (int c = 0; c < 3; ++c)
        out.rgb.at(c, y, x) = std::clamp(hit.albedo[c] * shade, 0.0, 1.0);
    }

  if (noise_sigma > 0.0)
    for (double& c : out.rgb.v)
      c = std::clamp(c + noise_sigma * noise_rng.normal(), 0.0, 1.0);

  out.mask = mask_from_depth(out.sensor);
  out.gt = out.sensor;
  return out;
}

RGBDSample generate_scene(const SceneConfig& cfg) {
  validate(cfg);
  Rng rng(mix_seed(cfg.rng_seed));

  const double far = cfg.max_depth;
  auto albedo = [&rng]() -> Vec3 {
    return {0.15 + 0.8 * rng.uniform(), 0.15 + 0.8 * rng.uniform(),
            0.15 + 0.8 * rng.uniform()};
  };

  // Half-extents sized so wall hits stay above min_depth for a <=90 degree fov.
  const double side = std::max(2.5, 4.0 * cfg.min_depth) ;
  Scene scene;
  scene.room = Box{{-(side + rng.uniform()), -(side * 0.7 + rng.uniform()), -1.0},
                   {side + rng.uniform(), side * 0.7 + rng.uniform(), far},
                   albedo()};
  scene.light_dir = {-0.2 - 0.4 * rng.uniform(), -0.9, -0.3 - 0.5 * rng.uniform()};

  const double zlo = std::max(1.2, cfg.min_depth + 0.5);
  const double zhi = 0.8 * far;
  const double spread = std::tan(cfg.hfov_degrees * M_PI / 360.0);
  for (int i = 0; i < cfg.primitive_count; ++i) {
    const double z = zlo + (zhi - zlo) * rng.uniform();
    const double lateral = 1.2 * spread * z;
    const double cx = lateral * (2.0 * rng.uniform() - 1.0);
    const double cy = 0.8 * lateral * (2.0 * rng.uniform() - 1.0);
    if (rng.uniform() < 0.5) {
      const double sx = 0.3 + 1.2 * rng.uniform();
      const double sy = 0.3 + 1.2 * rng.uniform();
      const double sz = 0.3 + 1.2 * rng.uniform();
      const double z0 = std::max(cfg.min_depth + 0.1, z - sz / 2.0);
      scene.boxes.push_back(Box{{cx - sx / 2.0, cy - sy / 2.0, z0},
                                {cx + sx / 2.0, cy + sy / 2.0, std::min(z0 + sz, far - 0.1)},
                                albedo()});
    } else {
      const double sx = 0.4 + 1.6 * rng.uniform();
      const double sy = 0.4 + 1.6 * rng.uniform();
      scene.rects.push_back(Rect{z, cx - sx / 2.0, cx + sx / 2.0, cy - sy / 2.0,
                                 cy + sy / 2.0, albedo()});
    }
  }

  RGBDSample sample =
      render_scene(scene, cfg.height, cfg.width, cfg.hfov_degrees, cfg.rgb_noise_sigma, rng);
  // geometry above keeps every surface inside the configured range
  for (double d : sample.sensor.v)
    if (d < cfg.min_depth || d > cfg.max_depth)
      throw std::logic_error("generate_scene: depth escaped the configured range");
  return sample;
}

}  // namespace dmlrn
