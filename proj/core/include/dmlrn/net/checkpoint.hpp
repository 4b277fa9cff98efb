#pragma once

#include <map>
#include <string>

#include "dmlrn/net/model.hpp"
#include "dmlrn/net/tensor.hpp"

namespace dmlrn {

/// Single-file container of named tensors and text blobs (binary,
/// little-endian doubles). Used for model checkpoints and trainer state.
struct Archive {
  std::map<std::string, Tensor> tensors;
  std::map<std::string, std::string> texts;
};

void save_archive(const Archive& archive, const std::string& path);
Archive load_archive(const std::string& path);

/// Model checkpoint: resolved config JSON under "config", parameters under
/// "param/<name>", normalization buffers under "buffer/<name>".
void save_model(Model& model, const std::string& path);

/// Restores parameters/buffers in place. A checkpoint whose config does not
/// match the model's is an error, never a silent reshape.
void load_model(Model& model, const std::string& path);

/// Reads only the stored config (to construct a Model before loading).
ModelConfig peek_model_config(const std::string& path);

void model_to_archive(Model& model, Archive& archive);
void model_from_archive(Model& model, const Archive& archive);

}  // namespace dmlrn
