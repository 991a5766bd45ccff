#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmix::cli {

/// Bad flags, missing files, malformed values. Maps to exit code 1.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A science check did not hold. Maps to exit code 2.
struct AssertionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::map<std::string, std::string> params;  // flat key -> value, flag names without dashes
  std::filesystem::path output_dir;
  std::uint64_t master_seed = 0;

  bool has(const std::string& key) const { return params.count(key) != 0; }
  std::string text(const std::string& key) const;
  std::string text_or(const std::string& key, const std::string& fallback) const;
  double real(const std::string& key) const;
  double real_or(const std::string& key, double fallback) const;
  long long integer(const std::string& key) const;
  long long integer_or(const std::string& key, long long fallback) const;
  /// epsilon in (0, 1).
  double epsilon_or(double fallback) const;
};

/// key=value lines; '#' starts a comment; blank lines ignored.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// "start:stop:step" (inclusive) or a comma list.
std::vector<Eigen::Index> parse_sizes(const std::string& spec);
/// Same grammar over reals; a single value is a one-point grid.
std::vector<double> parse_real_grid(const std::string& spec);

/// Merges file values under flag values and fills the typed fields.
RunConfig make_run_config(const std::string& command, const std::map<std::string, std::string>& from_file,
                          const std::map<std::string, std::string>& from_flags);

}  // namespace qmix::cli
