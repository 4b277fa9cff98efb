#include <doctest.h>

#include <atomic>
#include <cstdio>
#include <filesystem>

#include "dmlrn/dataset.hpp"
#include "dmlrn/image_ops.hpp"
#include "dmlrn/png_io.hpp"
#include "dmlrn/scene.hpp"
#include "test_util.hpp"

using namespace dmlrn;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static std::atomic<int> counter{0};
    path = fs::temp_directory_path() /
           ("dmlrn_test_data_" + std::to_string(counter.fetch_add(1)));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("a lone fronto-parallel plane renders constant depth") {
  Scene scene;
  Rect rect;
  rect.z = 2.0;
  rect.x0 = -50.0;
  rect.x1 = 50.0;
  rect.y0 = -50.0;
  rect.y1 = 50.0;
  rect.albedo = {0.5, 0.5, 0.5};
  scene.rects.push_back(rect);
  Rng rng(0);
  const RGBDSample s = render_scene(scene, 64, 64, 70.0, 0.0, rng);
  for (double d : s.sensor.v) CHECK(d == 2.0);
}

TEST_CASE("generated scenes are dense, in range and deterministic") {
  SceneConfig cfg;
  cfg.height = 64;
  cfg.width = 96;
  cfg.rng_seed = 1234;
  const RGBDSample a = generate_scene(cfg);
  const RGBDSample b = generate_scene(cfg);
  CHECK(a.sensor.v == b.sensor.v);
  CHECK(a.rgb.v == b.rgb.v);
  CHECK(a.mask.count() == a.sensor.size());
  REQUIRE(a.gt.has_value());
  CHECK(a.gt->v == a.sensor.v);
  for (double d : a.sensor.v) {
    CHECK(d >= cfg.min_depth);
    CHECK(d <= cfg.max_depth);
  }

  SceneConfig bad = cfg;
  bad.height = 60;
  CHECK_THROWS(generate_scene(bad));
}

TEST_CASE("16-bit depth png round trip is bit exact") {
  TempDir tmp;
  const std::string path = (tmp.path / "d.png").string();

  Rng rng(8);
  std::vector<uint16_t> raw(40 * 30);
  for (auto& x : raw) x = static_cast<uint16_t>(rng.uniform_below(65536));
  write_png16_raw(raw, 30, 40, path);
  int h = 0, w = 0;
  CHECK(read_png16_raw(path, h, w) == raw);
  CHECK(h == 30);
  CHECK(w == 40);

  // scale semantics: raw 0 stays missing, raw 4000 at 1/4000 is one meter
  const double scale = 1.0 / 4000.0;
  raw[0] = 0;
  raw[1] = 4000;
  write_png16_raw(raw, 30, 40, path);
  const DepthMap d = read_depth_png16(path, scale);
  CHECK(d.v[0] == 0.0);
  CHECK(d.v[1] == doctest::Approx(1.0).epsilon(1e-12));

  // write(read(file)) reproduces the file's pixel payload exactly
  write_depth_png16(d, path, scale);
  CHECK(read_png16_raw(path, h, w) == raw);
}

TEST_CASE("rgb png round trip and depth reader rejection") {
  TempDir tmp;
  const std::string rgb_path = (tmp.path / "c.png").string();
  Rng rng(9);
  RgbImage img(12, 17);
  for (double& v : img.v) v = rng.uniform_below(256) / 255.0;
  write_rgb_png8(img, rgb_path);
  const RgbImage back = read_rgb_png8(rgb_path);
  REQUIRE(back.height == 12);
  REQUIRE(back.width == 17);
  for (size_t i = 0; i < img.v.size(); ++i)
    CHECK(back.v[i] == doctest::Approx(img.v[i]).epsilon(1e-12));

  CHECK_THROWS(read_depth_png16(rgb_path, 1.0 / 1000.0));  // 8-bit RGB, not 16-bit gray
}

TEST_CASE("nyu preprocessing reproduces the published geometry") {
  const DatasetProfile nyu = profile_by_name("nyu");
  RGBDSample s;
  s.rgb = RgbImage(480, 640, 0.5);
  s.sensor = DepthMap(480, 640, 2.0);
  s.mask = mask_from_depth(s.sensor);
  s.gt = s.sensor;
  const RGBDSample out = preprocess(s, nyu);
  CHECK(out.rgb.height == 256);
  CHECK(out.rgb.width == 320);
  CHECK(out.sensor.height == 256);
  CHECK(out.gt->width == 320);
}

TEST_CASE("kitti crop anchors to the bottom and centers horizontally") {
  const DatasetProfile kitti = profile_by_name("kitti");
  Rng rng(10);
  RGBDSample s;
  s.rgb = test::random_rgb(rng, 375, 1242);
  s.sensor = test::random_depth(rng, 375, 1242, 1.0, 80.0, 0.7);
  s.mask = mask_from_depth(s.sensor);
  const RGBDSample out = preprocess(s, kitti);
  REQUIRE(out.sensor.height == 256);
  REQUIRE(out.sensor.width == 1216);
  const int top = 375 - 256, left = (1242 - 1216) / 2;
  for (int y = 0; y < 256; y += 37)
    for (int x = 0; x < 1216; x += 101)
      CHECK(out.sensor.at(y, x) == s.sensor.at(y + top, x + left));
}

TEST_CASE("identity profile preprocessing is a no-op") {
  const DatasetProfile synth = profile_by_name("synthetic");
  SceneConfig cfg;
  cfg.rng_seed = 3;
  const RGBDSample s = generate_scene(cfg);
  const RGBDSample out = preprocess(s, synth);
  CHECK(out.rgb.v == s.rgb.v);
  CHECK(out.sensor.v == s.sensor.v);
}

TEST_CASE("undersized inputs are rejected") {
  const DatasetProfile nyu = profile_by_name("nyu");
  RGBDSample s;
  s.rgb = RgbImage(50, 60, 0.5);
  s.sensor = DepthMap(50, 60, 1.0);
  s.mask = mask_from_depth(s.sensor);
  CHECK_THROWS(preprocess(s, nyu));
}

TEST_CASE("dataset directory round trip") {
  TempDir tmp;
  SceneConfig cfg;
  cfg.height = 32;
  cfg.width = 32;
  cfg.rng_seed = 77;
  const DatasetIndex index =
      generate_dataset(tmp.path.string(), 6, cfg, profile_by_name("synthetic"));
  CHECK(index.train_ids.size() + index.val_ids.size() == 6);
  CHECK(fs::exists(tmp.path / "meta.json"));
  CHECK(fs::exists(tmp.path / "rgb" / "000000.png"));
  CHECK(fs::exists(tmp.path / "depth" / "000003.png"));
  CHECK(fs::exists(tmp.path / "gt" / "000005.png"));

  const DatasetIndex loaded = read_meta(tmp.path.string());
  CHECK(loaded.profile.name == "synthetic");
  CHECK(loaded.train_ids == index.train_ids);
  CHECK(loaded.val_ids == index.val_ids);

  const auto samples = load_samples(loaded, loaded.train_ids);
  REQUIRE(!samples.empty());
  validate(samples[0]);
  CHECK(samples[0].gt.has_value());

  // depth survives the png quantization within half a unit
  SceneConfig c0 = cfg;
  c0.rng_seed = 77;
  const RGBDSample original = generate_scene(c0);
  const RGBDSample reread = read_sample(tmp.path.string(), "000000",
                                        loaded.profile.depth_png_scale, true);
  for (size_t i = 0; i < original.sensor.v.size(); ++i)
    CHECK(std::abs(reread.sensor.v[i] - original.sensor.v[i]) <=
          0.5 * loaded.profile.depth_png_scale);
}
