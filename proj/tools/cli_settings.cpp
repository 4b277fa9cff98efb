#include "cli_settings.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "dmlrn/version.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace dmlrn::cli {

Settings defaults_for_profile(const std::string& profile) {
  Settings s;
  s.profile = profile;
  s.dataset = profile_by_name(profile);
  s.model.max_depth = s.dataset.max_depth;
  s.eval.max_depth = s.dataset.max_depth;
  s.scene.max_depth = std::min(s.dataset.max_depth, 10.0);
  s.train.augment_flip = s.dataset.flip_augment;
  // indoor default is the pairwise log-L1; the LiDAR-style profile trains
  // better with log-L2
  s.train.loss = profile == "kitti" ? LossKind::LOG_L2 : LossKind::PAIRWISE_LOG_L1;
  return s;
}

namespace {

json corruption_to_json(const CorruptionConfig& c) {
  return {{"k", c.k},
          {"min_size", c.min_size},
          {"area_threshold", c.area_threshold},
          {"spatter_prob", c.spatter_prob},
          {"rng_seed", c.rng_seed},
          {"gaussian_presmooth_sigma", c.gaussian_presmooth_sigma}};
}

void corruption_from_json(const json& j, CorruptionConfig& c) {
  if (j.contains("k")) c.k = j["k"].get<double>();
  if (j.contains("min_size")) c.min_size = j["min_size"].get<int>();
  if (j.contains("area_threshold")) c.area_threshold = j["area_threshold"].get<int64_t>();
  if (j.contains("spatter_prob")) c.spatter_prob = j["spatter_prob"].get<double>();
  if (j.contains("rng_seed")) c.rng_seed = j["rng_seed"].get<uint64_t>();
  if (j.contains("gaussian_presmooth_sigma"))
    c.gaussian_presmooth_sigma = j["gaussian_presmooth_sigma"].get<double>();
}

}  // namespace

std::string to_json_text(const Settings& s) {
  json j;
  j["seed"] = s.seed;
  j["out"] = s.out_dir;
  j["profile"] = s.profile;
  j["count"] = s.count;
  j["scene"] = {{"height", s.scene.height},
                {"width", s.scene.width},
                {"min_depth", s.scene.min_depth},
                {"max_depth", s.scene.max_depth},
                {"primitive_count", s.scene.primitive_count},
                {"rgb_noise_sigma", s.scene.rgb_noise_sigma},
                {"hfov_degrees", s.scene.hfov_degrees}};
  j["corruption"] = corruption_to_json(s.corruption);
  j["model"] = json::parse(to_json_string(resolve(s.model)));
  j["train"] = {{"lr", s.train.lr},
                {"beta1", s.train.beta1},
                {"beta2", s.train.beta2},
                {"weight_decay", s.train.weight_decay},
                {"epochs", s.train.epochs},
                {"batch_size", s.train.batch_size},
                {"bn_freeze_after_epoch", s.train.bn_freeze_after_epoch},
                {"loss", to_string(s.train.loss)},
                {"strategy", to_string(s.train.strategy)},
                {"sparse_points", s.train.sparse_points},
                {"augment_flip", s.train.augment_flip}};
  j["eval"] = {{"max_depth", s.eval.max_depth},
               {"min_depth", s.eval.min_depth},
               {"clamp_to_range", s.eval.clamp_to_range},
               {"ssim_window", s.eval.ssim_window},
               {"ssim_sigma", s.eval.ssim_sigma}};
  j["dataset"] = {{"name", s.dataset.name},
                  {"depth_png_scale", s.dataset.depth_png_scale},
                  {"max_depth", s.dataset.max_depth}};
  j["checkpoint_every"] = s.checkpoint_every;
  return j.dump(2);
}

void apply_json_text(Settings& s, const std::string& text) {
  const json j = json::parse(text);
  if (j.contains("seed")) s.seed = j["seed"].get<uint64_t>();
  if (j.contains("out")) s.out_dir = j["out"].get<std::string>();
  if (j.contains("profile")) {
    const std::string p = j["profile"].get<std::string>();
    if (p != s.profile) {
      Settings fresh = defaults_for_profile(p);
      fresh.seed = s.seed;
      fresh.out_dir = s.out_dir;
      s = fresh;
    }
  }
  if (j.contains("count")) s.count = j["count"].get<int>();
  if (j.contains("scene")) {
    const json& sc = j["scene"];
    if (sc.contains("height")) s.scene.height = sc["height"].get<int>();
    if (sc.contains("width")) s.scene.width = sc["width"].get<int>();
    if (sc.contains("min_depth")) s.scene.min_depth = sc["min_depth"].get<double>();
    if (sc.contains("max_depth")) s.scene.max_depth = sc["max_depth"].get<double>();
    if (sc.contains("primitive_count"))
      s.scene.primitive_count = sc["primitive_count"].get<int>();
    if (sc.contains("rgb_noise_sigma"))
      s.scene.rgb_noise_sigma = sc["rgb_noise_sigma"].get<double>();
    if (sc.contains("hfov_degrees")) s.scene.hfov_degrees = sc["hfov_degrees"].get<double>();
  }
  if (j.contains("corruption")) corruption_from_json(j["corruption"], s.corruption);
  if (j.contains("model")) {
    const json& m = j["model"];
    if (m.contains("variant")) s.model.variant = variant_from_string(m["variant"]);
    if (m.contains("tier")) {
      s.model.tier = tier_from_string(m["tier"]);
      s.model.stem_channels = 0;  // re-derive sizes for the new tier
      s.model.encoder_stages.clear();
      s.model.decoder_channels = 0;
    }
    if (m.contains("min_depth")) s.model.min_depth = m["min_depth"].get<double>();
    if (m.contains("max_depth")) s.model.max_depth = m["max_depth"].get<double>();
  }
  if (j.contains("train")) {
    const json& t = j["train"];
    if (t.contains("lr")) s.train.lr = t["lr"].get<double>();
    if (t.contains("beta1")) s.train.beta1 = t["beta1"].get<double>();
    if (t.contains("beta2")) s.train.beta2 = t["beta2"].get<double>();
    if (t.contains("weight_decay")) s.train.weight_decay = t["weight_decay"].get<double>();
    if (t.contains("epochs")) s.train.epochs = t["epochs"].get<int>();
    if (t.contains("batch_size")) s.train.batch_size = t["batch_size"].get<int>();
    if (t.contains("bn_freeze_after_epoch"))
      s.train.bn_freeze_after_epoch = t["bn_freeze_after_epoch"].get<int>();
    if (t.contains("loss")) s.train.loss = loss_kind_from_string(t["loss"]);
    if (t.contains("strategy")) s.train.strategy = strategy_from_string(t["strategy"]);
    if (t.contains("sparse_points")) s.train.sparse_points = t["sparse_points"].get<int>();
    if (t.contains("augment_flip")) s.train.augment_flip = t["augment_flip"].get<bool>();
  }
  if (j.contains("eval")) {
    const json& e = j["eval"];
    if (e.contains("max_depth")) s.eval.max_depth = e["max_depth"].get<double>();
    if (e.contains("min_depth")) s.eval.min_depth = e["min_depth"].get<double>();
    if (e.contains("clamp_to_range"))
      s.eval.clamp_to_range = e["clamp_to_range"].get<bool>();
    if (e.contains("ssim_window")) s.eval.ssim_window = e["ssim_window"].get<int>();
    if (e.contains("ssim_sigma")) s.eval.ssim_sigma = e["ssim_sigma"].get<double>();
  }
  if (j.contains("checkpoint_every")) s.checkpoint_every = j["checkpoint_every"].get<int>();
}

void apply_json_file(Settings& s, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  apply_json_text(s, text);
}

void dump_resolved(const Settings& s, const std::string& command) {
  fs::create_directories(s.out_dir);
  json j = json::parse(to_json_text(s));
  j["version"] = std::string(kToolkitName) + " " + kVersion;
  j["command"] = command;
  std::ofstream out(fs::path(s.out_dir) / "config.resolved.json");
  if (!out)
    throw std::runtime_error("cannot write resolved config in " + s.out_dir);
  out << j.dump(2) << '\n';
}

}  // namespace dmlrn::cli
