#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli_settings.hpp"
#include "dmlrn/net/checkpoint.hpp"
#include "dmlrn/oracles.hpp"
#include "dmlrn/png_io.hpp"
#include "dmlrn/version.hpp"
#include "plots.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace dmlrn::cli {

namespace {

json report_to_json(const MetricReport& r) {
  return {{"rmse", r.rmse},
          {"mae", r.mae},
          {"rel", r.rel},
          {"delta_1.05", r.delta[0]},
          {"delta_1.10", r.delta[1]},
          {"delta_1.25", r.delta[2]},
          {"delta_1.25^2", r.delta[3]},
          {"delta_1.25^3", r.delta[4]},
          {"ssim", r.ssim},
          {"irmse", r.irmse},
          {"imae", r.imae},
          {"valid_pixel_count", r.valid_pixel_count},
          {"inverse_excluded", r.inverse_excluded}};
}

void write_csv_row(std::ostream& os, const std::string& id, const MetricReport& r) {
  os << id << ',' << r.rmse << ',' << r.mae << ',' << r.rel;
  for (double d : r.delta) os << ',' << d;
  os << ',' << r.ssim << ',' << r.irmse << ',' << r.imae << ',' << r.valid_pixel_count
     << ',' << r.inverse_excluded << '\n';
}

constexpr const char* kCsvHeader =
    "sample,rmse,mae,rel,delta_1.05,delta_1.10,delta_1.25,delta_1.25^2,"
    "delta_1.25^3,ssim,irmse,imae,valid_pixel_count,inverse_excluded";

void write_metric_table(std::ostream& os, const std::string& label, const MetricReport& r) {
  os << "            RMSE     MAE     rel    d1.05   d1.10   d1.25  d1.25^2 d1.25^3   SSIM\n";
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%-10s %7.3f %7.3f %7.3f %7.3f %7.3f %7.3f %7.3f %7.3f %7.3f\n",
                label.c_str(), r.rmse, r.mae, r.rel, r.delta[0], r.delta[1], r.delta[2],
                r.delta[3], r.delta[4], r.ssim);
  os << buf;
}

double oracle_deviation(const MetricReport& a, const MetricReport& b) {
  double dev = std::max({std::abs(a.rmse - b.rmse), std::abs(a.mae - b.mae),
                         std::abs(a.rel - b.rel), std::abs(a.ssim - b.ssim),
                         std::abs(a.irmse - b.irmse), std::abs(a.imae - b.imae)});
  for (size_t t = 0; t < a.delta.size(); ++t)
    dev = std::max(dev, std::abs(a.delta[t] - b.delta[t]));
  return dev;
}

std::vector<std::string> all_ids(const DatasetIndex& index) {
  std::vector<std::string> ids = index.train_ids;
  ids.insert(ids.end(), index.val_ids.begin(), index.val_ids.end());
  std::sort(ids.begin(), ids.end());
  return ids;
}

// ---------------------------------------------------------------------------

int cmd_gen_data(const Settings& s, const std::string& command) {
  Settings out = s;
  out.scene.rng_seed = s.seed;
  const DatasetIndex index = generate_dataset(s.out_dir, s.count, out.scene, s.dataset);
  dump_resolved(out, command);
  std::cout << "wrote " << index.train_ids.size() + index.val_ids.size()
            << " samples to " << s.out_dir << " (" << index.val_ids.size()
            << " in the val split)\n";
  return 0;
}

int cmd_corrupt(const Settings& s, const std::string& data_dir,
                const std::string& rgb_file, const std::string& depth_file,
                const std::string& command) {
  fs::create_directories(s.out_dir);

  if (!rgb_file.empty() || !depth_file.empty()) {
    if (rgb_file.empty() || depth_file.empty())
      throw std::runtime_error("corrupt: --rgb and --depth must be given together");
    const RgbImage rgb = read_rgb_png8(rgb_file);
    const DepthMap depth = read_depth_png16(depth_file, s.dataset.depth_png_scale);
    CorruptionConfig cc = s.corruption;
    cc.rng_seed = s.seed;
    const DepthMap corrupted = corrupt_depth(depth, rgb, cc);
    const std::string out_png = (fs::path(s.out_dir) / "corrupted.png").string();
    write_depth_png16(corrupted, out_png, s.dataset.depth_png_scale);
    json side = {{"input_rgb", rgb_file},
                 {"input_depth", depth_file},
                 {"config", json::parse(to_json_text(s))["corruption"]},
                 {"rng_seed", cc.rng_seed},
                 {"zeroed_fraction", zeroed_fraction(depth, corrupted)}};
    std::ofstream(fs::path(s.out_dir) / "corrupted.json") << side.dump(2) << '\n';
    dump_resolved(s, command);
    return 0;
  }

  if (data_dir.empty())
    throw std::runtime_error("corrupt: need --data or --rgb/--depth");
  const DatasetIndex index = read_meta(data_dir);
  DatasetIndex out_index = index;
  out_index.dir = s.out_dir;
  const auto ids = all_ids(index);
  double fraction_sum = 0.0;
  for (size_t i = 0; i < ids.size(); ++i) {
    const RGBDSample sample =
        read_sample(data_dir, ids[i], index.profile.depth_png_scale, true);
    const DepthMap& target = sample.gt ? *sample.gt : sample.sensor;
    CorruptionConfig cc = s.corruption;
    cc.rng_seed = derive_seed(s.seed, 0xc0ffee, i);
    const DepthMap corrupted = corrupt_depth(target, sample.rgb, cc);

    RGBDSample out_sample = sample;
    out_sample.sensor = corrupted;
    out_sample.mask = mask_from_depth(corrupted);
    write_sample(s.out_dir, ids[i], out_sample, index.profile.depth_png_scale,
                 sample.gt.has_value());
    const double frac = zeroed_fraction(target, corrupted);
    fraction_sum += frac;
    json side = {{"config", json::parse(to_json_text(s))["corruption"]},
                 {"rng_seed", cc.rng_seed},
                 {"zeroed_fraction", frac}};
    fs::create_directories(fs::path(s.out_dir) / "corruption");
    std::ofstream(fs::path(s.out_dir) / "corruption" / (ids[i] + ".json"))
        << side.dump(2) << '\n';
  }
  write_meta(out_index);
  dump_resolved(s, command);
  std::cout << "corrupted " << ids.size() << " samples, mean zeroed fraction "
            << (ids.empty() ? 0.0 : fraction_sum / ids.size()) << '\n';
  return 0;
}

struct LoadedData {
  DatasetIndex index;
  std::vector<RGBDSample> train;
  std::vector<RGBDSample> val;
};

LoadedData load_dataset(const std::string& dir) {
  LoadedData d;
  d.index = read_meta(dir);
  d.train = load_samples(d.index, d.index.train_ids);
  d.val = load_samples(d.index, d.index.val_ids);
  return d;
}

int cmd_train(Settings s, const std::string& data_dir, const std::string& resume,
              const std::string& command) {
  const LoadedData data = load_dataset(data_dir);
  if (data.train.empty()) throw std::runtime_error("train: dataset has no training split");

  s.model = resolve(s.model);
  s.train.seed = s.seed;
  s.train.corruption = s.corruption;
  // resume compares configs; the output directory is not part of the run
  Settings stored = s;
  stored.out_dir.clear();
  const std::string train_json = to_json_text(stored);

  fs::create_directories(fs::path(s.out_dir) / "checkpoints");
  dump_resolved(s, command);

  Model model(s.model, s.seed);
  Adam adam(s.train);
  int start_epoch = 0;
  if (!resume.empty()) {
    const TrainCheckpoint ckpt = load_train_checkpoint(resume);
    model_from_archive(model, ckpt.archive);  // errors on config mismatch
    adam.from_archive(ckpt.archive, model.params());
    start_epoch = ckpt.completed_epochs;
    if (!ckpt.train_config_json.empty() && ckpt.train_config_json != train_json)
      throw std::runtime_error("train: resume config differs from the stored run");
    std::cout << "resuming after epoch " << start_epoch << '\n';
  }

  json epochs = json::array();
  const int ckpt_every = s.checkpoint_every;
  const std::string out_dir = s.out_dir;
  train(model, data.train, data.val, s.train, start_epoch, &adam,
        [&](const EpochStats& stats, Model& m, const Adam& opt) {
          json e = {{"epoch", stats.epoch},
                    {"mean_train_loss", stats.mean_train_loss},
                    {"seconds", stats.seconds},
                    {"epoch_seed", stats.epoch_seed}};
          if (stats.val) e["val"] = report_to_json(*stats.val);
          epochs.push_back(e);
          std::cout << "epoch " << stats.epoch << " loss " << stats.mean_train_loss;
          if (stats.val) std::cout << " val_rmse " << stats.val->rmse;
          std::cout << " (" << stats.seconds << " s)\n";
          if (ckpt_every > 0 && stats.epoch % ckpt_every == 0) {
            char name[64];
            std::snprintf(name, sizeof(name), "epoch_%03d.ckpt", stats.epoch);
            save_train_checkpoint((fs::path(out_dir) / "checkpoints" / name).string(),
                                  m, opt, stats.epoch, train_json);
          }
        });

  save_train_checkpoint((fs::path(out_dir) / "checkpoints" / "final.ckpt").string(),
                        model, adam, s.train.epochs, train_json);
  json hist = {{"config", json::parse(train_json)}, {"epochs", epochs}};
  std::ofstream(fs::path(out_dir) / "history.json") << hist.dump(2) << '\n';
  std::cout << "final checkpoint: "
            << (fs::path(out_dir) / "checkpoints" / "final.ckpt").string() << '\n';
  return 0;
}

int cmd_eval(const Settings& s, const std::string& pred_dir, const std::string& gt_dir,
             const std::string& checkpoint, const std::string& data_dir, int plots_n,
             bool check_oracle, const std::string& command) {
  fs::create_directories(fs::path(s.out_dir) / "metrics");

  std::vector<std::string> ids;
  std::vector<DepthMap> preds, gts;

  if (!checkpoint.empty()) {
    if (data_dir.empty()) throw std::runtime_error("eval: --checkpoint needs --data");
    const ModelConfig stored = peek_model_config(checkpoint);
    Model model(stored, 0);
    load_model(model, checkpoint);
    const DatasetIndex index = read_meta(data_dir);
    for (const std::string& id : all_ids(index)) {
      const RGBDSample sample =
          read_sample(data_dir, id, index.profile.depth_png_scale, true);
      if (!sample.gt) continue;
      ids.push_back(id);
      preds.push_back(predict_depth(model, sample));
      gts.push_back(*sample.gt);
    }
  } else {
    if (pred_dir.empty() || gt_dir.empty())
      throw std::runtime_error("eval: need either --checkpoint/--data or --pred/--gt");
    for (const auto& entry : fs::directory_iterator(pred_dir)) {
      if (entry.path().extension() != ".png") continue;
      const std::string id = entry.path().stem().string();
      const fs::path gt_path = fs::path(gt_dir) / entry.path().filename();
      if (!fs::exists(gt_path)) continue;
      ids.push_back(id);
      preds.push_back(read_depth_png16(entry.path().string(), s.dataset.depth_png_scale));
      gts.push_back(read_depth_png16(gt_path.string(), s.dataset.depth_png_scale));
    }
    // directory iteration order is unspecified; fix it
    std::vector<size_t> order(ids.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return ids[a] < ids[b]; });
    std::vector<std::string> sids;
    std::vector<DepthMap> spreds, sgts;
    for (size_t i : order) {
      sids.push_back(ids[i]);
      spreds.push_back(std::move(preds[i]));
      sgts.push_back(std::move(gts[i]));
    }
    ids = std::move(sids);
    preds = std::move(spreds);
    gts = std::move(sgts);
  }
  if (ids.empty()) throw std::runtime_error("eval: no sample pairs found");

  std::vector<MetricReport> reports;
  double worst_oracle_dev = 0.0;
  int oracle_checked = 0;
  for (size_t i = 0; i < ids.size(); ++i) {
    const MetricReport r = evaluate(preds[i], gts[i], s.eval);
    reports.push_back(r);
    std::ofstream(fs::path(s.out_dir) / "metrics" / (ids[i] + ".json"))
        << report_to_json(r).dump(2) << '\n';
    if (check_oracle && gts[i].height <= 64 && gts[i].width <= 64) {
      worst_oracle_dev =
          std::max(worst_oracle_dev,
                   oracle_deviation(r, oracles::oracle_metrics(preds[i], gts[i], s.eval)));
      ++oracle_checked;
    }
    if (static_cast<int>(i) < plots_n) {
      plots::write_side_by_side_png(
          preds[i], gts[i], s.eval.max_depth,
          (fs::path(s.out_dir) / ("compare_" + ids[i] + ".png")).string());
      plots::write_error_png(
          preds[i], gts[i], 0.25 * s.eval.max_depth,
          (fs::path(s.out_dir) / ("error_" + ids[i] + ".png")).string());
    }
  }

  const MetricReport mean = mean_report(reports);
  std::ofstream csv(fs::path(s.out_dir) / "aggregate.csv");
  csv << kCsvHeader << '\n';
  for (size_t i = 0; i < ids.size(); ++i) write_csv_row(csv, ids[i], reports[i]);
  write_csv_row(csv, "mean", mean);

  std::ofstream table(fs::path(s.out_dir) / "table.txt");
  write_metric_table(table, "mean", mean);
  write_metric_table(std::cout, "mean", mean);

  json agg = {{"samples", ids.size()}, {"mean", report_to_json(mean)}};
  if (check_oracle) {
    agg["oracle_checked"] = oracle_checked;
    agg["oracle_max_deviation"] = worst_oracle_dev;
    std::cout << "oracle max deviation over " << oracle_checked
              << " samples: " << worst_oracle_dev << '\n';
  }
  std::ofstream(fs::path(s.out_dir) / "aggregate.json") << agg.dump(2) << '\n';
  dump_resolved(s, command);

  if (check_oracle && (oracle_checked == 0 || worst_oracle_dev > 1e-9)) {
    std::cerr << "error: oracle deviation above 1e-9\n";
    return 3;
  }
  return 0;
}

MetricReport eval_model_on(Model& model, const std::vector<RGBDSample>& samples,
                           const Settings& s) {
  std::vector<MetricReport> reports;
  for (size_t i = 0; i < samples.size(); ++i) {
    const RGBDSample input = make_eval_input(samples[i], s.train.strategy, s.train, i);
    const DepthMap pred = predict_depth(model, input);
    const DepthMap& target = samples[i].gt ? *samples[i].gt : samples[i].sensor;
    reports.push_back(evaluate(pred, target, s.eval));
  }
  return mean_report(reports);
}

int cmd_ablate_loss(Settings s, const std::string& data_dir, const std::string& command) {
  const LoadedData data = load_dataset(data_dir);
  if (data.train.empty() || data.val.empty())
    throw std::runtime_error("ablate-loss: dataset needs train and val splits");
  fs::create_directories(s.out_dir);
  s.model = resolve(s.model);
  s.train.seed = s.seed;
  s.train.corruption = s.corruption;

  const LossKind kinds[] = {LossKind::L1,     LossKind::L2,
                            LossKind::LOG_L1, LossKind::LOG_L2,
                            LossKind::PAIRWISE_LOG_L1, LossKind::PAIRWISE_LOG_L2};
  std::ofstream csv(fs::path(s.out_dir) / "ablate_loss.csv");
  csv << "loss,rmse,mae,delta_1.25,delta_1.25^2,delta_1.25^3,indoor_default\n";
  for (LossKind kind : kinds) {
    Settings run = s;
    run.train.loss = kind;
    Model model(run.model, run.seed);  // same init seed for every row
    Adam adam(run.train);
    train(model, data.train, data.val, run.train, 0, &adam);
    const MetricReport r = eval_model_on(model, data.val, run);
    csv << to_string(kind) << ',' << r.rmse << ',' << r.mae << ',' << r.delta[2] << ','
        << r.delta[3] << ',' << r.delta[4] << ','
        << (kind == LossKind::PAIRWISE_LOG_L1 ? 1 : 0) << '\n';
    std::cout << to_string(kind) << ": rmse " << r.rmse << " mae " << r.mae << '\n';
  }
  dump_resolved(s, command);
  return 0;
}

int cmd_ablate_backbone(Settings s, const std::string& data_dir,
                        const std::string& tiers_arg, const std::string& command) {
  const LoadedData data = load_dataset(data_dir);
  if (data.train.empty() || data.val.empty())
    throw std::runtime_error("ablate-backbone: dataset needs train and val splits");
  fs::create_directories(s.out_dir);
  s.train.seed = s.seed;
  s.train.corruption = s.corruption;

  std::vector<SizeTier> tiers;
  {
    std::string token;
    std::istringstream is(tiers_arg);
    while (std::getline(is, token, ',')) tiers.push_back(tier_from_string(token));
  }
  if (tiers.empty()) throw std::runtime_error("ablate-backbone: no tiers given");

  std::ofstream csv(fs::path(s.out_dir) / "ablate_backbone.csv");
  csv << "tier,variant,param_count,rmse,mae\n";
  std::vector<plots::Series> series(2);
  series[0].label = "DM_LRN";
  series[1].label = "LRN";
  for (SizeTier tier : tiers) {
    for (int v = 0; v < 2; ++v) {
      Settings run = s;
      run.model.variant = v == 0 ? Variant::DM_LRN : Variant::LRN;
      run.model.tier = tier;
      run.model.stem_channels = 0;
      run.model.encoder_stages.clear();
      run.model.decoder_channels = 0;
      run.model = resolve(run.model);
      Model model(run.model, run.seed);
      Adam adam(run.train);
      train(model, data.train, data.val, run.train, 0, &adam);
      const MetricReport r = eval_model_on(model, data.val, run);
      csv << to_string(tier) << ',' << to_string(run.model.variant) << ','
          << model.param_count() << ',' << r.rmse << ',' << r.mae << '\n';
      series[v].x.push_back(static_cast<double>(static_cast<int>(tier)));
      series[v].y.push_back(r.rmse);
      std::cout << to_string(tier) << ' ' << to_string(run.model.variant) << ": rmse "
                << r.rmse << " params " << model.param_count() << '\n';
    }
  }
  plots::write_line_svg(series, "validation RMSE vs encoder size", "size tier",
                        "RMSE (m)", (fs::path(s.out_dir) / "backbone.svg").string());
  dump_resolved(s, command);
  return 0;
}

int cmd_plot(const Settings& s, const std::string& history_file,
             const std::string& ablation_csv, const std::string& depth_png,
             const std::string& command) {
  fs::create_directories(s.out_dir);
  if (!history_file.empty()) {
    std::ifstream in(history_file);
    if (!in) throw std::runtime_error("plot: cannot read " + history_file);
    json hist;
    in >> hist;
    plots::Series loss;
    loss.label = "train loss";
    plots::Series vrmse;
    vrmse.label = "val RMSE";
    for (const auto& e : hist.at("epochs")) {
      loss.x.push_back(e.at("epoch").get<double>());
      loss.y.push_back(e.at("mean_train_loss").get<double>());
      if (e.contains("val")) {
        vrmse.x.push_back(e.at("epoch").get<double>());
        vrmse.y.push_back(e.at("val").at("rmse").get<double>());
      }
    }
    std::vector<plots::Series> series{loss};
    if (!vrmse.x.empty()) series.push_back(vrmse);
    plots::write_line_svg(series, "training curve", "epoch", "value",
                          (fs::path(s.out_dir) / "loss_curve.svg").string());
  }
  if (!ablation_csv.empty()) {
    std::ifstream in(ablation_csv);
    if (!in) throw std::runtime_error("plot: cannot read " + ablation_csv);
    std::string line;
    std::getline(in, line);  // header
    std::map<std::string, plots::Series> by_variant;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::string tier, variant, params, rmse;
      std::getline(ls, tier, ',');
      std::getline(ls, variant, ',');
      std::getline(ls, params, ',');
      std::getline(ls, rmse, ',');
      auto& series = by_variant[variant];
      series.label = variant;
      series.x.push_back(static_cast<double>(static_cast<int>(tier_from_string(tier))));
      series.y.push_back(std::stod(rmse));
    }
    std::vector<plots::Series> series;
    for (auto& [_, v] : by_variant) series.push_back(v);
    plots::write_line_svg(series, "validation RMSE vs encoder size", "size tier",
                          "RMSE (m)", (fs::path(s.out_dir) / "backbone.svg").string());
  }
  if (!depth_png.empty()) {
    const DepthMap d = read_depth_png16(depth_png, s.dataset.depth_png_scale);
    const std::string name = fs::path(depth_png).stem().string();
    plots::write_depth_png(d, s.eval.max_depth,
                           (fs::path(s.out_dir) / (name + "_color.png")).string());
  }
  dump_resolved(s, command);
  return 0;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"dmlrn: semi-dense indoor depth completion toolkit"};
  app.set_version_flag("--version", std::string(kToolkitName) + " " + kVersion);
  app.require_subcommand(1);

  std::string config_file, profile = "synthetic", out_dir;
  uint64_t seed = 0;
  app.add_option("--config", config_file, "JSON config file (layered over profile)");
  app.add_option("--profile", profile,
                 "dataset profile: synthetic|matterport|nyu|scannet|kitti");
  app.add_option("--seed", seed, "base rng seed");
  app.add_option("--out", out_dir, "output directory");

  auto* gen = app.add_subcommand("gen-data", "generate a synthetic RGBD dataset");
  int gen_n = 16, gen_h = 64, gen_w = 64, gen_prims = 6;
  gen->add_option("-n,--count", gen_n, "number of scenes");
  gen->add_option("--height", gen_h);
  gen->add_option("--width", gen_w);
  gen->add_option("--primitives", gen_prims);

  auto* cor = app.add_subcommand("corrupt", "apply the pseudo-sensor corruption");
  std::string cor_data, cor_rgb, cor_depth;
  double cor_k = -1, cor_p = -1, cor_sigma = -1;
  int64_t cor_tau = -1;
  int cor_min_size = -1;
  cor->add_option("--data", cor_data, "dataset directory to corrupt");
  cor->add_option("--rgb", cor_rgb, "single RGB png");
  cor->add_option("--depth", cor_depth, "single 16-bit depth png");
  cor->add_option("--k", cor_k, "segmentation merging scale");
  cor->add_option("--min-size", cor_min_size, "minimum segment size");
  cor->add_option("--area-threshold", cor_tau, "zero segments below this area");
  cor->add_option("--spatter-prob", cor_p, "per-pixel zeroing probability");
  cor->add_option("--presmooth-sigma", cor_sigma, "gaussian presmoothing sigma");

  auto* tr = app.add_subcommand("train", "train a depth completion model");
  std::string tr_data, tr_resume, tr_variant, tr_tier, tr_loss, tr_strategy;
  int tr_epochs = -1, tr_batch = -1, tr_sparse = -1, tr_ckpt_every = -1;
  double tr_lr = -1;
  bool tr_no_flip = false;
  tr->add_option("--data", tr_data, "dataset directory")->required();
  tr->add_option("--resume", tr_resume, "trainer checkpoint to resume from");
  tr->add_option("--variant", tr_variant, "DM_LRN|LRN|LRN_MASK");
  tr->add_option("--tier", tr_tier, "T0..T4");
  tr->add_option("--loss", tr_loss,
                 "l1|l2|log_l1|log_l2|pairwise_log_l1|pairwise_log_l2");
  tr->add_option("--strategy", tr_strategy, "semi_dense_corruption|uniform_sparse|none");
  tr->add_option("--epochs", tr_epochs);
  tr->add_option("--batch-size", tr_batch);
  tr->add_option("--lr", tr_lr);
  tr->add_option("--sparse-points", tr_sparse);
  tr->add_option("--checkpoint-every", tr_ckpt_every, "save every N epochs");
  tr->add_flag("--no-flip", tr_no_flip, "disable horizontal flip augmentation");

  auto* ev = app.add_subcommand("eval", "evaluate predictions against ground truth");
  std::string ev_pred, ev_gt, ev_ckpt, ev_data;
  int ev_plots = 4;
  bool ev_oracle = false, ev_clamp = false;
  ev->add_option("--pred", ev_pred, "directory of predicted 16-bit depth pngs");
  ev->add_option("--gt", ev_gt, "directory of ground-truth 16-bit depth pngs");
  ev->add_option("--checkpoint", ev_ckpt, "model checkpoint to run");
  ev->add_option("--data", ev_data, "dataset directory (with --checkpoint)");
  ev->add_option("--plots", ev_plots, "emit comparison/error plots for N samples");
  ev->add_flag("--check-oracle", ev_oracle,
               "cross-check metrics against the brute-force oracle");
  ev->add_flag("--clamp", ev_clamp, "clamp predictions to the profile depth range");

  auto* al = app.add_subcommand("ablate-loss", "train one model per loss kind");
  std::string al_data;
  int al_epochs = -1;
  al->add_option("--data", al_data, "dataset directory")->required();
  al->add_option("--epochs", al_epochs);

  auto* ab = app.add_subcommand("ablate-backbone", "RMSE vs encoder size sweep");
  std::string ab_data, ab_tiers = "T0,T1,T2,T3,T4";
  int ab_epochs = -1;
  ab->add_option("--data", ab_data, "dataset directory")->required();
  ab->add_option("--tiers", ab_tiers, "comma-separated size tiers");
  ab->add_option("--epochs", ab_epochs);

  auto* pl = app.add_subcommand("plot", "re-render plots from run artifacts");
  std::string pl_history, pl_ablation, pl_depth;
  pl->add_option("--history", pl_history, "history.json from a training run");
  pl->add_option("--ablation", pl_ablation, "ablate_backbone.csv");
  pl->add_option("--depth", pl_depth, "16-bit depth png to colorize");

  CLI11_PARSE(app, argc, argv);

  Settings s = defaults_for_profile(profile);
  if (!config_file.empty()) {
    apply_json_file(s, config_file);
    if (app.count("--profile")) {
      // explicit flag beats the config file's profile field
      s.profile = profile;
      s.dataset = profile_by_name(profile);
    }
  }
  if (app.count("--seed")) s.seed = seed;
  if (app.count("--out")) s.out_dir = out_dir;

  std::string command;
  for (int i = 0; i < argc; ++i) {
    if (i) command += ' ';
    command += argv[i];
  }

  if (gen->parsed()) {
    if (gen->count("-n") || gen->count("--count")) s.count = gen_n;
    if (gen->count("--height")) s.scene.height = gen_h;
    if (gen->count("--width")) s.scene.width = gen_w;
    if (gen->count("--primitives")) s.scene.primitive_count = gen_prims;
    return cmd_gen_data(s, command);
  }
  if (cor->parsed()) {
    if (cor_k > 0) s.corruption.k = cor_k;
    if (cor_min_size > 0) s.corruption.min_size = cor_min_size;
    if (cor_tau >= 0) s.corruption.area_threshold = cor_tau;
    if (cor_p >= 0) s.corruption.spatter_prob = cor_p;
    if (cor_sigma >= 0) s.corruption.gaussian_presmooth_sigma = cor_sigma;
    return cmd_corrupt(s, cor_data, cor_rgb, cor_depth, command);
  }
  if (tr->parsed()) {
    if (!tr_variant.empty()) s.model.variant = variant_from_string(tr_variant);
    if (!tr_tier.empty()) {
      s.model.tier = tier_from_string(tr_tier);
      s.model.stem_channels = 0;
      s.model.encoder_stages.clear();
      s.model.decoder_channels = 0;
    }
    if (!tr_loss.empty()) s.train.loss = loss_kind_from_string(tr_loss);
    if (!tr_strategy.empty()) s.train.strategy = strategy_from_string(tr_strategy);
    if (tr_epochs > 0) s.train.epochs = tr_epochs;
    if (tr_batch > 0) s.train.batch_size = tr_batch;
    if (tr_lr >= 0) s.train.lr = tr_lr;
    if (tr_sparse > 0) s.train.sparse_points = tr_sparse;
    if (tr_ckpt_every >= 0) s.checkpoint_every = tr_ckpt_every;
    if (tr_no_flip) s.train.augment_flip = false;
    return cmd_train(s, tr_data, tr_resume, command);
  }
  if (ev->parsed()) {
    s.eval.clamp_to_range = ev_clamp || s.eval.clamp_to_range;
    return cmd_eval(s, ev_pred, ev_gt, ev_ckpt, ev_data, ev_plots, ev_oracle, command);
  }
  if (al->parsed()) {
    if (al_epochs > 0) s.train.epochs = al_epochs;
    return cmd_ablate_loss(s, al_data, command);
  }
  if (ab->parsed()) {
    if (ab_epochs > 0) s.train.epochs = ab_epochs;
    return cmd_ablate_backbone(s, ab_data, ab_tiers, command);
  }
  if (pl->parsed()) return cmd_plot(s, pl_history, pl_ablation, pl_depth, command);
  return 1;
}

}  // namespace dmlrn::cli

int main(int argc, char** argv) {
  try {
    return dmlrn::cli::run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
