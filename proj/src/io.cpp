#include "geosub/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace geosub {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

}  // namespace

PointSet parse_dense(std::istream& in, bool has_header) {
  std::vector<double> values;
  Index cols = -1;
  Index rows = 0;
  std::string line;
  std::size_t lineno = 0;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = trim(line);
    if (sv.empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    Index count = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = sv.find(',', start);
      const std::string_view cell = sv.substr(start, comma == std::string_view::npos ? sv.npos : comma - start);
      double v;
      if (!parse_double(cell, v)) throw ParseError(lineno, "non-numeric cell '" + std::string(cell) + "'");
      values.push_back(v);
      ++count;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cols < 0) cols = count;
    if (count != cols) {
      throw ParseError(lineno, "expected " + std::to_string(cols) + " columns, got " + std::to_string(count));
    }
    ++rows;
  }
  if (rows == 0) throw ParseError(lineno, "no data rows");
  RowMatrix m = Eigen::Map<RowMatrix>(values.data(), rows, cols);
  return PointSet(std::move(m));
}

PointSet load_dense(const std::string& path, bool has_header) {
  auto in = open_or_throw(path);
  return parse_dense(in, has_header);
}

LabeledPoints parse_sparse(std::istream& in) {
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<int> labels;
  Index max_index = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls{std::string(trim(line))};
    std::string tok;
    if (!(ls >> tok)) continue;
    double label;
    if (!parse_double(tok, label)) throw ParseError(lineno, "bad label '" + tok + "'");
    const Index row = static_cast<Index>(labels.size());
    labels.push_back(static_cast<int>(label));
    Index prev = 0;
    while (ls >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) throw ParseError(lineno, "expected idx:val, got '" + tok + "'");
      long long idx = 0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + colon, idx);
      double v;
      if (ec != std::errc() || p != tok.data() + colon || idx < 1 ||
          !parse_double(std::string_view(tok).substr(colon + 1), v)) {
        throw ParseError(lineno, "bad entry '" + tok + "'");
      }
      if (idx <= prev) throw ParseError(lineno, "non-ascending index " + std::to_string(idx));
      prev = static_cast<Index>(idx);
      max_index = std::max(max_index, prev);
      trips.emplace_back(row, prev - 1, v);
    }
  }
  if (labels.empty()) throw ParseError(lineno, "empty file");
  if (max_index == 0) max_index = 1;
  SparseRows m(static_cast<Index>(labels.size()), max_index);
  m.setFromTriplets(trips.begin(), trips.end());
  return {PointSet(std::move(m)), std::move(labels)};
}

LabeledPoints load_sparse(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_sparse(in);
}

void write_dense(const std::string& path, const PointSet& P) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << std::setprecision(17);
  for (Index i = 0; i < P.n(); ++i) {
    const Vector r = P.row(i);
    for (Index j = 0; j < P.d(); ++j) out << (j ? "," : "") << r(j);
    out << '\n';
  }
}

void write_sparse(const std::string& path, const PointSet& P, const std::vector<int>& labels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << std::setprecision(17);
  for (Index i = 0; i < P.n(); ++i) {
    const int label = labels.empty() ? 0 : labels[static_cast<std::size_t>(i)];
    out << (label > 0 ? "+" : "") << label;
    const Vector r = P.row(i);
    for (Index j = 0; j < P.d(); ++j) {
      if (r(j) != 0.0 || j + 1 == P.d()) out << ' ' << (j + 1) << ':' << r(j);
    }
    out << '\n';
  }
}

LabeledPoints load_any(const std::string& path, bool has_header) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) return {load_dense(path, has_header), {}};
  return load_sparse(path);
}

}  // namespace geosub
