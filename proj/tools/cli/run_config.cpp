#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qmix::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || !std::isfinite(x)) throw InputError(key + ": not a number: '" + v + "'");
  return x;
}

long long to_integer(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw InputError(key + ": not an integer: '" + v + "'");
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

}  // namespace

std::string RunConfig::text(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end()) throw InputError(command + " needs --" + key);
  return it->second;
}

std::string RunConfig::text_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? text(key) : fallback;
}

double RunConfig::real(const std::string& key) const { return to_real(key, text(key)); }
double RunConfig::real_or(const std::string& key, double fallback) const { return has(key) ? real(key) : fallback; }
long long RunConfig::integer(const std::string& key) const { return to_integer(key, text(key)); }
long long RunConfig::integer_or(const std::string& key, long long fallback) const {
  return has(key) ? integer(key) : fallback;
}

double RunConfig::epsilon_or(double fallback) const {
  const double e = real_or("epsilon", fallback);
  if (!(e > 0.0 && e < 1.0)) throw InputError("epsilon must lie in (0,1)");
  return e;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    for (char& c : key)
      if (c == '_') c = '-';
    if (key.empty()) throw InputError(path.string() + ":" + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

std::vector<Eigen::Index> parse_sizes(const std::string& spec) {
  std::vector<Eigen::Index> out;
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) throw InputError("sizes: expected start:stop:step, got '" + spec + "'");
    const long long a = to_integer("sizes", parts[0]), b = to_integer("sizes", parts[1]),
                    st = to_integer("sizes", parts[2]);
    if (st <= 0 || b < a) throw InputError("sizes: need step > 0 and stop >= start");
    for (long long v = a; v <= b; v += st) out.push_back(static_cast<Eigen::Index>(v));
  } else {
    for (const auto& p : split(spec, ',')) out.push_back(static_cast<Eigen::Index>(to_integer("sizes", p)));
  }
  if (out.empty()) throw InputError("sizes: empty list");
  return out;
}

std::vector<double> parse_real_grid(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) throw InputError("grid: expected start:stop:step, got '" + spec + "'");
    const double a = to_real("grid", parts[0]), b = to_real("grid", parts[1]), st = to_real("grid", parts[2]);
    if (!(st > 0.0) || b < a) throw InputError("grid: need step > 0 and stop >= start");
    // Integer stepping so the grid does not drift.
    const auto count = static_cast<long long>(std::floor((b - a) / st + 1e-9));
    for (long long k = 0; k <= count; ++k) out.push_back(a + static_cast<double>(k) * st);
  } else {
    for (const auto& p : split(spec, ',')) out.push_back(to_real("grid", p));
  }
  return out;
}

RunConfig make_run_config(const std::string& command, const std::map<std::string, std::string>& from_file,
                          const std::map<std::string, std::string>& from_flags) {
  RunConfig cfg;
  cfg.command = command;
  cfg.params = from_file;
  for (const auto& [k, v] : from_flags) cfg.params[k] = v;
  cfg.params.erase("config");
  cfg.output_dir = cfg.text_or("out", "qmix-out/" + command);
  const long long seed = cfg.integer_or("master-seed", 0);
  if (seed < 0) throw InputError("master-seed must be nonnegative");
  cfg.master_seed = static_cast<std::uint64_t>(seed);
  if (cfg.has("epsilon")) cfg.epsilon_or(0.1);
  return cfg;
}

}  // namespace qmix::cli
