#pragma once

#include <string>

#include "dmlrn/corruption.hpp"
#include "dmlrn/dataset.hpp"
#include "dmlrn/metrics.hpp"
#include "dmlrn/net/model.hpp"
#include "dmlrn/scene.hpp"
#include "dmlrn/trainer.hpp"

namespace dmlrn::cli {

/// Everything a run needs, resolved through four layers:
/// built-in defaults < --profile < --config file < explicit flags.
/// Every command dumps the resolved form next to its outputs.
struct Settings {
  uint64_t seed = 0;
  std::string out_dir = "out";
  std::string profile = "synthetic";

  SceneConfig scene;
  int count = 16;

  CorruptionConfig corruption;
  ModelConfig model;
  TrainConfig train;
  EvalProfile eval;
  DatasetProfile dataset;

  int checkpoint_every = 0;  // epochs; 0 = final checkpoint only
};

Settings defaults_for_profile(const std::string& profile);

/// Overlay a (possibly partial) JSON document onto the settings.
void apply_json_file(Settings& s, const std::string& path);
void apply_json_text(Settings& s, const std::string& text);

std::string to_json_text(const Settings& s);

/// Resolved config + toolkit version + invoking command, written as
/// config.resolved.json in the output directory.
void dump_resolved(const Settings& s, const std::string& command);

}  // namespace dmlrn::cli
