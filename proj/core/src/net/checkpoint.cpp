#include "dmlrn/net/checkpoint.hpp"

#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace dmlrn {

namespace {

constexpr char kMagic[8] = {'D', 'M', 'L', 'R', 'N', 'A', 'R', '1'};

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("archive: truncated file");
  return v;
}

void put_string(std::ostream& os, const std::string& s) {
  put<uint64_t>(os, s.size());
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& is) {
  const uint64_t len = get<uint64_t>(is);
  std::string s(len, '\0');
  is.read(s.data(), static_cast<std::streamsize>(len));
  if (!is) throw std::runtime_error("archive: truncated string");
  return s;
}

}  // namespace

void save_archive(const Archive& archive, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("archive: cannot write " + path);
  os.write(kMagic, sizeof(kMagic));
  put<uint64_t>(os, archive.texts.size());
  for (const auto& [name, text] : archive.texts) {
    put_string(os, name);
    put_string(os, text);
  }
  put<uint64_t>(os, archive.tensors.size());
  for (const auto& [name, t] : archive.tensors) {
    put_string(os, name);
    put<int32_t>(os, t.n);
    put<int32_t>(os, t.c);
    put<int32_t>(os, t.h);
    put<int32_t>(os, t.w);
    os.write(reinterpret_cast<const char*>(t.v.data()),
             static_cast<std::streamsize>(t.v.size() * sizeof(double)));
  }
  if (!os) throw std::runtime_error("archive: write failed for " + path);
}

Archive load_archive(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("archive: cannot read " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::string(magic, 8) != std::string(kMagic, 8))
    throw std::runtime_error("archive: bad magic in " + path);

  Archive archive;
  const uint64_t n_texts = get<uint64_t>(is);
  for (uint64_t i = 0; i < n_texts; ++i) {
    std::string name = get_string(is);
    archive.texts[name] = get_string(is);
  }
  const uint64_t n_tensors = get<uint64_t>(is);
  for (uint64_t i = 0; i < n_tensors; ++i) {
    std::string name = get_string(is);
    Tensor t;
    t.n = get<int32_t>(is);
    t.c = get<int32_t>(is);
    t.h = get<int32_t>(is);
    t.w = get<int32_t>(is);
    t.v.resize(static_cast<size_t>(t.n) * t.c * t.h * t.w);
    is.read(reinterpret_cast<char*>(t.v.data()),
            static_cast<std::streamsize>(t.v.size() * sizeof(double)));
    if (!is) throw std::runtime_error("archive: truncated tensor " + name);
    archive.tensors[name] = std::move(t);
  }
  return archive;
}

void model_to_archive(Model& model, Archive& archive) {
  archive.texts["config"] = to_json_string(model.config());
  for (Param* p : model.params()) archive.tensors["param/" + p->name] = p->value;
  for (auto& [name, t] : model.buffers()) archive.tensors["buffer/" + name] = *t;
}

void model_from_archive(Model& model, const Archive& archive) {
  const auto it = archive.texts.find("config");
  if (it == archive.texts.end())
    throw std::runtime_error("checkpoint: missing config entry");
  const ModelConfig stored = model_config_from_json(it->second);
  if (!(stored == model.config()))
    throw std::runtime_error(
        "checkpoint: stored ModelConfig does not match the target model");

  auto fetch = [&](const std::string& key) -> const Tensor& {
    const auto t = archive.tensors.find(key);
    if (t == archive.tensors.end())
      throw std::runtime_error("checkpoint: missing tensor " + key);
    return t->second;
  };
  for (Param* p : model.params()) {
    const Tensor& t = fetch("param/" + p->name);
    if (!t.same_shape(p->value))
      throw std::runtime_error("checkpoint: shape mismatch for " + p->name);
    p->value = t;
  }
  for (auto& [name, buf] : model.buffers()) {
    const Tensor& t = fetch("buffer/" + name);
    if (!t.same_shape(*buf))
      throw std::runtime_error("checkpoint: shape mismatch for buffer " + name);
    *buf = t;
  }
}

void save_model(Model& model, const std::string& path) {
  Archive archive;
  model_to_archive(model, archive);
  save_archive(archive, path);
}

void load_model(Model& model, const std::string& path) {
  const Archive archive = load_archive(path);
  model_from_archive(model, archive);
}

ModelConfig peek_model_config(const std::string& path) {
  const Archive archive = load_archive(path);
  const auto it = archive.texts.find("config");
  if (it == archive.texts.end())
    throw std::runtime_error("checkpoint: missing config entry");
  return model_config_from_json(it->second);
}

}  // namespace dmlrn
