#pragma once

#include "geosub/point_set.hpp"

#include <istream>
#include <string>

namespace geosub {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct LabeledPoints {
  PointSet points;
  std::vector<int> labels;
};

/// Comma-separated numeric rows of equal length. Blank lines are skipped.
PointSet load_dense(const std::string& path, bool has_header = false);
PointSet parse_dense(std::istream& in, bool has_header = false);

/// LIBSVM text: "label idx:val ...", 1-based strictly ascending indices, d = max index.
LabeledPoints load_sparse(const std::string& path);
LabeledPoints parse_sparse(std::istream& in);

void write_dense(const std::string& path, const PointSet& P);
void write_sparse(const std::string& path, const PointSet& P, const std::vector<int>& labels);

/// Dispatch on extension: .csv is dense, anything else LIBSVM.
LabeledPoints load_any(const std::string& path, bool has_header = false);

}  // namespace geosub
