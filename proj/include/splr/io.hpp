#pragma once

// Dense matrix files (CSV, MatrixMarket array format) and edge lists.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "splr/matrix.hpp"

namespace splr::io {

enum class MatrixFormat { Csv, MatrixMarketArray };

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline double parse_double(std::string_view token, const std::string& source, std::size_t line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(source, line, "not a number: '" + std::string(token) + "'");
  if (!std::isfinite(value)) throw ParseError(source, line, "non-finite value: '" + std::string(token) + "'");
  return value;
}

inline std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace detail

/// Comma-separated rows of decimal literals. Blank lines are skipped.
inline Mat read_csv(std::istream& in, const std::string& source = "<csv>") {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = body.find(',', start);
      row.push_back(detail::parse_double(body.substr(start, comma == std::string_view::npos ? body.npos : comma - start),
                                         source, line_no));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(source, line_no,
                       "ragged row: expected " + std::to_string(rows.front().size()) + " values, got " +
                           std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(source, 0, "no data rows");
  Mat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

/// Shortest round-trip decimal representation of every entry.
inline void write_csv(std::ostream& out, const Mat& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << detail::format_double(m(i, j));
    }
    out << '\n';
  }
}

/// MatrixMarket array format: "%%MatrixMarket matrix array real general|symmetric",
/// comment lines starting with '%', a "rows cols" line, then values in
/// column-major order (lower triangle only for symmetric).
inline Mat read_matrix_market(std::istream& in, const std::string& source = "<mtx>") {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(source, 1, "empty file");
  ++line_no;
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
  };
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    throw ParseError(source, 1, "missing '%%MatrixMarket matrix' banner");
  if (lower(format) != "array") throw ParseError(source, 1, "only the array format is supported, got '" + format + "'");
  field = lower(field);
  if (field != "real" && field != "integer" && field != "double")
    throw ParseError(source, 1, "unsupported field '" + field + "'");
  symmetry = lower(symmetry);
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general") throw ParseError(source, 1, "unsupported symmetry '" + symmetry + "'");

  Eigen::Index rows = -1, cols = -1;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '%') continue;
    std::istringstream tokens{std::string(body)};
    std::string tok;
    if (rows < 0) {
      std::vector<std::string> dims;
      while (tokens >> tok) dims.push_back(tok);
      if (dims.size() != 2) throw ParseError(source, line_no, "expected 'rows cols'");
      rows = static_cast<Eigen::Index>(detail::parse_double(dims[0], source, line_no));
      cols = static_cast<Eigen::Index>(detail::parse_double(dims[1], source, line_no));
      if (rows <= 0 || cols <= 0) throw ParseError(source, line_no, "dimensions must be positive");
      if (symmetric && rows != cols) throw ParseError(source, line_no, "symmetric matrix must be square");
      continue;
    }
    while (tokens >> tok) values.push_back(detail::parse_double(tok, source, line_no));
  }
  if (rows < 0) throw ParseError(source, line_no, "missing size line");
  const auto expected = static_cast<std::size_t>(symmetric ? rows * (rows + 1) / 2 : rows * cols);
  if (values.size() != expected)
    throw ParseError(source, line_no,
                     "expected " + std::to_string(expected) + " values, found " + std::to_string(values.size()));
  Mat m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = symmetric ? j : 0; i < rows; ++i) {
      m(i, j) = values[k++];
      if (symmetric) m(j, i) = m(i, j);
    }
  return m;
}

inline void write_matrix_market(std::ostream& out, const Mat& m) {
  out << "%%MatrixMarket matrix array real general\n" << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) out << detail::format_double(m(i, j)) << '\n';
}

inline MatrixFormat format_from_path(std::string_view path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() && path.substr(path.size() - suffix.size()) == suffix;
  };
  return ends_with(".mtx") || ends_with(".mm") ? MatrixFormat::MatrixMarketArray : MatrixFormat::Csv;
}

inline Mat parse_dense_matrix(const std::string& path, MatrixFormat format) {
  auto in = detail::open_input(path);
  return format == MatrixFormat::Csv ? read_csv(in, path) : read_matrix_market(in, path);
}

inline void write_dense_matrix(const std::string& path, const Mat& m, MatrixFormat format = MatrixFormat::Csv) {
  auto out = detail::open_output(path);
  if (format == MatrixFormat::Csv)
    write_csv(out, m);
  else
    write_matrix_market(out, m);
  if (!out) throw IoError("failed writing '" + path + "'");
}

struct EdgeList {
  Mat adjacency;
  std::vector<std::string> warnings;
};

/// Whitespace-separated "i j" pairs with 0-based ids; an optional "# n=<N>"
/// header fixes the node count (otherwise max id + 1). Other '#' lines are
/// comments. Duplicate edges collapse; self-loops are dropped with a warning.
inline EdgeList read_edge_list(std::istream& in, const std::string& source = "<edges>") {
  std::vector<std::pair<long long, long long>> edges;
  long long declared = -1;
  long long max_id = -1;
  std::vector<std::string> warnings;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      auto rest = detail::trim(body.substr(1));
      if (rest.rfind("n=", 0) == 0) {
        const double n = detail::parse_double(rest.substr(2), source, line_no);
        if (n < 0 || n != std::floor(n)) throw ParseError(source, line_no, "node count must be a nonnegative integer");
        declared = static_cast<long long>(n);
      }
      continue;
    }
    std::istringstream tokens{std::string(body)};
    std::string a, b, extra;
    if (!(tokens >> a >> b) || (tokens >> extra)) throw ParseError(source, line_no, "expected 'i j'");
    const double di = detail::parse_double(a, source, line_no);
    const double dj = detail::parse_double(b, source, line_no);
    if (di != std::floor(di) || dj != std::floor(dj)) throw ParseError(source, line_no, "node ids must be integers");
    if (di < 0 || dj < 0) throw ParseError(source, line_no, "negative node id");
    const auto i = static_cast<long long>(di), j = static_cast<long long>(dj);
    if (i == j) {
      warnings.push_back(source + ":" + std::to_string(line_no) + ": self-loop on node " + std::to_string(i) +
                         " dropped");
      max_id = std::max(max_id, i);
      continue;
    }
    max_id = std::max({max_id, i, j});
    edges.emplace_back(i, j);
  }
  const long long n = declared >= 0 ? declared : max_id + 1;
  if (max_id >= n)
    throw ParseError(source, 0, "node id " + std::to_string(max_id) + " exceeds declared n=" + std::to_string(n));
  EdgeList out;
  out.adjacency = Mat::Zero(n, n);
  for (const auto& [i, j] : edges) {
    out.adjacency(i, j) = 1.0;
    out.adjacency(j, i) = 1.0;
  }
  out.warnings = std::move(warnings);
  return out;
}

inline EdgeList parse_edge_list(const std::string& path) {
  auto in = detail::open_input(path);
  return read_edge_list(in, path);
}

/// Writes the upper-triangle edges of a binary symmetric adjacency with an "# n=" header.
inline void write_edge_list(std::ostream& out, const Mat& adjacency) {
  out << "# n=" << adjacency.rows() << '\n';
  for (Eigen::Index i = 0; i < adjacency.rows(); ++i)
    for (Eigen::Index j = i + 1; j < adjacency.cols(); ++j)
      if (adjacency(i, j) != 0.0) out << i << ' ' << j << '\n';
}

}  // namespace splr::io
