#pragma once

#include "geosub/kernel.hpp"

#include <optional>

namespace geosub {

/// Ball center: an explicit coordinate vector, or a convex combination of
/// points of a PointSet (the only form available under a non-linear kernel).
class Center {
 public:
  Center() = default;
  static Center point(Vector coords);
  static Center combination(IndexList support, std::vector<double> weights);
  static Center at_index(Index i) { return combination({i}, {1.0}); }

  bool is_explicit() const { return coords_.has_value(); }
  const Vector& coords() const { return *coords_; }
  const IndexList& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::optional<Vector> coords_;
  IndexList support_;
  std::vector<double> weights_;
};

struct Ball {
  Center center;
  double radius = 0.0;
};

/// Explicit coordinates of a center (combinations are expanded; linear kernel only).
Vector materialize(const PointSet& P, const Center& c);

/// Distances from points of P to a fixed center. Under the linear kernel the
/// center is materialized once; otherwise distances are expanded through
/// kernel evaluations against the support. `expand` forces the kernel path.
class CenterDistance {
 public:
  CenterDistance(const PointSet& P, const Center& c, const Kernel& kernel, bool expand = false);

  double sq(Index i) const;
  double operator()(Index i) const { return std::sqrt(sq(i)); }
  /// Squared distance to an arbitrary point (linear kernel only).
  double sq_to(const Vector& x) const;
  bool expanded() const { return expanded_; }

 private:
  const PointSet* P_;
  Kernel kernel_;
  bool expanded_;
  Vector coords_;
  double coords_sq_ = 0.0;
  IndexList support_;
  std::vector<double> weights_;
  double self_ = 0.0;
};

double eval_distance(const PointSet& P, const Center& o, Index i, const Kernel& kernel);

}  // namespace geosub
