#include "artifacts.hpp"

#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>

namespace qmix::cli {

nlohmann::ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Artifacts::Csv::Csv(const std::filesystem::path& path, std::vector<std::string> header) : file_(path) {
  if (!file_) throw InputError("cannot write " + path.string());
  writer_ = std::make_unique<io::CsvWriter>(file_, std::move(header));
}

Artifacts::Artifacts(const RunConfig& cfg) : cfg_(cfg), start_(std::chrono::steady_clock::now()) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw InputError("cannot create output directory " + cfg.output_dir.string() + ": " + ec.message());
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream os;
  os << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  started_at_ = os.str();
}

Artifacts::Csv Artifacts::csv(const std::string& name, std::vector<std::string> header) {
  files_.push_back(name);
  return Csv(cfg_.output_dir / name, std::move(header));
}

std::ofstream Artifacts::file(const std::string& name) {
  files_.push_back(name);
  std::ofstream out(cfg_.output_dir / name);
  if (!out) throw InputError("cannot write " + (cfg_.output_dir / name).string());
  return out;
}

void Artifacts::json(const std::string& name, const nlohmann::ordered_json& value) {
  files_.push_back(name);
  std::ofstream out(cfg_.output_dir / name);
  if (!out) throw InputError("cannot write " + (cfg_.output_dir / name).string());
  out << value.dump(2) << '\n';
}

bool Artifacts::check(bool ok, const std::string& what) {
  summary_.push_back(std::string(ok ? "PASS " : "FAIL ") + what);
  if (!ok) failures_.push_back(what);
  return ok;
}

void Artifacts::finish(int status, const std::string& message) {
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  {
    std::ofstream out(cfg_.output_dir / "summary.txt");
    out << "qmix " << cfg_.command << "\n";
    for (const auto& [k, v] : cfg_.params) out << "  " << k << " = " << v << "\n";
    out << "\n";
    for (const auto& line : summary_) out << line << "\n";
    out << "\nstatus: " << status << (message.empty() ? "" : " (" + message + ")") << "\n";
  }
  nlohmann::ordered_json m;
  m["command"] = cfg_.command;
  m["config"] = cfg_.params;
  m["master_seed"] = cfg_.master_seed;
  m["seeds"] = seeds_;
  m["library_version"] = QMIX_VERSION;
  m["started_at"] = started_at_;
  m["wall_time_seconds"] = wall;
  m["status"] = status;
  if (!message.empty()) m["message"] = message;
  m["failed_checks"] = failures_;
  m["files"] = files_;
  m["results"] = results_;
  std::ofstream out(cfg_.output_dir / "manifest.json");
  out << m.dump(2) << '\n';
}

}  // namespace qmix::cli
