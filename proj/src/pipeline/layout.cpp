#include "hallubench/pipeline/layout.hpp"

#include <cctype>
#include <cstdio>

#include <unistd.h>

#include "hallubench/util/error.hpp"

namespace hallubench::pipeline {

std::string safe_name(std::string_view name) {
  std::string out;
  for (unsigned char c : name) {
    out += (std::isalnum(c) || c == '.' || c == '-' || c == '_') ? static_cast<char>(c) : '_';
  }
  return out.empty() ? "_" : out;
}

std::filesystem::path OutputLayout::descriptions(const std::string& dataset, const std::string& source_slug) const {
  return root_ / "descriptions" / safe_name(dataset) / (safe_name(source_slug) + ".jsonl");
}

std::filesystem::path OutputLayout::predictions_dir(const std::string& predictor) const {
  return root_ / "predictions" / safe_name(predictor);
}

std::filesystem::path OutputLayout::predictions(const std::string& predictor, const std::string& dataset,
                                                const std::string& setting_slug) const {
  return predictions_dir(predictor) / safe_name(dataset) / (safe_name(setting_slug) + ".jsonl");
}

std::filesystem::path OutputLayout::mining_dir(const std::string& predictor) const {
  return root_ / "mining" / safe_name(predictor);
}

std::filesystem::path OutputLayout::annotations_dir(const std::string& name) const {
  return root_ / "annotations" / safe_name(name);
}

std::filesystem::path OutputLayout::consistency(const std::string& generator, const std::string& dataset) const {
  return consistency_dir() / safe_name(generator) / (safe_name(dataset) + ".jsonl");
}

std::filesystem::path OutputLayout::cache(const std::string& name) const {
  return root_ / "cache" / (safe_name(name) + ".jsonl");
}

std::filesystem::path manifest_path(const std::filesystem::path& data_file) {
  auto p = data_file;
  p.replace_extension(".manifest.json");
  return p;
}

OutputLock::OutputLock(const OutputLayout& layout) : path_(layout.lock_file()) {
  std::filesystem::create_directories(layout.root());
  std::FILE* f = std::fopen(path_.c_str(), "wx");
  if (f == nullptr) {
    throw Error(ErrorCode::OutputLocked,
                "another hallubench process is using " + layout.root().string() + " (remove " + path_.string() +
                    " if it is stale)");
  }
  std::fprintf(f, "%ld\n", static_cast<long>(::getpid()));
  std::fclose(f);
}

OutputLock::~OutputLock() {
  std::error_code ignored;
  std::filesystem::remove(path_, ignored);
}

}  // namespace hallubench::pipeline
