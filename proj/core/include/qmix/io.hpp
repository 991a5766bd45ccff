#pragma once

#include "qmix/markov.hpp"

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace qmix::io {

/// "n" on the first line, then n whitespace-separated rows.
StochasticMatrix parse_chain(std::istream& in);
StochasticMatrix read_chain(const std::filesystem::path& path);
void write_chain(std::ostream& out, const StochasticMatrix& p);

/// Comma-separated index list, e.g. "0,3,5".
MarkedSet parse_marked(const std::string& list, Eigen::Index n);

/// Shortest text that round-trips: 17 significant digits.
std::string format_double(double v);

using Cell = std::variant<double, long long, std::string>;

/// Comma-separated, header row, LF line endings.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);

  void row(const std::vector<Cell>& cells);
  std::size_t columns() const noexcept { return header_.size(); }

 private:
  std::ostream& out_;
  std::vector<std::string> header_;
};

/// Writes "index,value" rows.
void write_index_value_csv(std::ostream& out, const Vector& values);

}  // namespace qmix::io
