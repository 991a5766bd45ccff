#include "qmix/io.hpp"

#include "qmix/errors.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

namespace qmix::io {

StochasticMatrix parse_chain(std::istream& in) {
  long long n = 0;
  if (!(in >> n) || n <= 0) throw ValidationError("chain file: first token must be a positive state count");
  Matrix m(n, n);
  for (long long x = 0; x < n; ++x) {
    for (long long y = 0; y < n; ++y) {
      if (!(in >> m(x, y))) {
        throw ValidationError("chain file: expected " + std::to_string(n * n) + " entries, ran out at row " +
                              std::to_string(x) + " column " + std::to_string(y));
      }
    }
  }
  std::string extra;
  if (in >> extra) throw ValidationError("chain file: trailing content after " + std::to_string(n) + " rows");
  return StochasticMatrix(std::move(m));
}

StochasticMatrix read_chain(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open chain file " + path.string());
  return parse_chain(in);
}

void write_chain(std::ostream& out, const StochasticMatrix& p) {
  out << p.n() << '\n';
  for (Eigen::Index x = 0; x < p.n(); ++x) {
    for (Eigen::Index y = 0; y < p.n(); ++y) out << (y ? " " : "") << format_double(p(x, y));
    out << '\n';
  }
}

MarkedSet parse_marked(const std::string& list, Eigen::Index n) {
  std::vector<Eigen::Index> idx;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto first = tok.find_first_not_of(" \t");
    const auto last = tok.find_last_not_of(" \t");
    if (first == std::string::npos) throw ValidationError("marked list: empty entry in \"" + list + "\"");
    tok = tok.substr(first, last - first + 1);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      throw ValidationError("marked list: \"" + tok + "\" is not an integer");
    idx.push_back(static_cast<Eigen::Index>(v));
  }
  return MarkedSet(std::move(idx), n);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header) : out_(out), header_(std::move(header)) {
  for (std::size_t i = 0; i < header_.size(); ++i) out_ << (i ? "," : "") << header_[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != header_.size()) throw ValidationError("csv row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    std::visit(
        [this](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>)
            out_ << format_double(v);
          else
            out_ << v;
        },
        cells[i]);
  }
  out_ << '\n';
}

void write_index_value_csv(std::ostream& out, const Vector& values) {
  CsvWriter w(out, {"index", "value"});
  for (Eigen::Index i = 0; i < values.size(); ++i) w.row({static_cast<long long>(i), values(i)});
}

}  // namespace qmix::io
