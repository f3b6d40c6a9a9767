#pragma once

#include <filesystem>
#include <string>

namespace hallubench::pipeline {

// Where every command reads and writes under the output directory.
class OutputLayout {
 public:
  explicit OutputLayout(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const noexcept { return root_; }
  std::filesystem::path descriptions(const std::string& dataset, const std::string& source_slug) const;
  std::filesystem::path predictions_dir(const std::string& predictor) const;
  std::filesystem::path predictions(const std::string& predictor, const std::string& dataset,
                                    const std::string& setting_slug) const;
  std::filesystem::path results() const { return root_ / "results.jsonl"; }
  std::filesystem::path mining_dir(const std::string& predictor) const;
  std::filesystem::path annotations_dir(const std::string& name) const;
  std::filesystem::path consistency(const std::string& generator, const std::string& dataset) const;
  std::filesystem::path consistency_dir() const { return root_ / "consistency"; }
  std::filesystem::path reports_dir() const { return root_ / "reports"; }
  std::filesystem::path ablations_dir() const { return root_ / "ablations"; }
  std::filesystem::path cache(const std::string& name) const;
  std::filesystem::path lock_file() const { return root_ / ".hallubench.lock"; }

 private:
  std::filesystem::path root_;
};

// "<stem>.manifest.json" next to a data file.
std::filesystem::path manifest_path(const std::filesystem::path& data_file);

// Replaces anything other than letters, digits, '.', '-' and '_' with '_'.
std::string safe_name(std::string_view name);

// Exclusive claim on an output directory for the lifetime of the object.
// Throws OutputLocked when another process holds it.
class OutputLock {
 public:
  explicit OutputLock(const OutputLayout& layout);
  ~OutputLock();
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  std::filesystem::path path_;
};

}  // namespace hallubench::pipeline
