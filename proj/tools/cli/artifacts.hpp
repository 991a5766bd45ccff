#pragma once

#include "run_config.hpp"

#include <qmix/io.hpp>

#include <json.hpp>

#include <chrono>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

namespace qmix::cli {

/// Collects everything one run writes. Data files carry no timestamps so a
/// rerun with the same config reproduces them byte for byte; wall time and
/// the start stamp live only in the manifest.
class Artifacts {
 public:
  explicit Artifacts(const RunConfig& cfg);

  /// Opens `name` under the output directory with a CSV header.
  class Csv {
   public:
    Csv(const std::filesystem::path& path, std::vector<std::string> header);
    void row(const std::vector<io::Cell>& cells) { writer_->row(cells); }

   private:
    std::ofstream file_;
    std::unique_ptr<io::CsvWriter> writer_;
  };

  Csv csv(const std::string& name, std::vector<std::string> header);
  /// Raw output stream for writers that emit their own header.
  std::ofstream file(const std::string& name);
  void json(const std::string& name, const nlohmann::ordered_json& value);
  void note(const std::string& line) { summary_.push_back(line); }
  void seed(const std::string& label, std::uint64_t value) { seeds_[label] = value; }
  /// Records a science check; any failed check turns the exit code into 2.
  bool check(bool ok, const std::string& what);
  bool failed() const noexcept { return !failures_.empty(); }
  const std::vector<std::string>& failures() const noexcept { return failures_; }
  /// Results echoed into the manifest.
  nlohmann::ordered_json& results() { return results_; }

  /// Writes summary.txt and manifest.json; `status` is the exit code.
  void finish(int status, const std::string& message);

 private:
  const RunConfig& cfg_;
  std::chrono::steady_clock::time_point start_;
  std::string started_at_;
  std::vector<std::string> files_;
  std::vector<std::string> summary_;
  std::vector<std::string> failures_;
  nlohmann::ordered_json seeds_ = nlohmann::ordered_json::object();
  nlohmann::ordered_json results_ = nlohmann::ordered_json::object();
};

/// Numbers go into JSON at full precision; NaN and infinities become null.
nlohmann::ordered_json number(double v);

}  // namespace qmix::cli
