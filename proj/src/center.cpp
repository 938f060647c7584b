#include "geosub/center.hpp"

#include <cmath>
#include <numeric>

namespace geosub {

Center Center::point(Vector coords) {
  Center c;
  c.coords_ = std::move(coords);
  return c;
}

Center Center::combination(IndexList support, std::vector<double> weights) {
  if (support.empty() || support.size() != weights.size())
    throw std::invalid_argument("Center::combination: support and weights must be non-empty and equal length");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("Center::combination: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    // Renormalize accumulated round-off; anything larger is a caller error.
    if (std::abs(sum - 1.0) > 1e-6) throw std::invalid_argument("Center::combination: weights must sum to 1");
    for (double& w : weights) w /= sum;
  }
  Center c;
  c.support_ = std::move(support);
  c.weights_ = std::move(weights);
  return c;
}

Vector materialize(const PointSet& P, const Center& c) {
  if (c.is_explicit()) return c.coords();
  Vector out = Vector::Zero(P.d());
  for (std::size_t k = 0; k < c.support().size(); ++k) P.add_row_to(c.support()[k], c.weights()[k], out);
  return out;
}

CenterDistance::CenterDistance(const PointSet& P, const Center& c, const Kernel& kernel, bool expand)
    : P_(&P), kernel_(kernel), expanded_(expand || !kernel.is_linear()) {
  if (c.is_explicit() && !kernel.is_linear())
    throw std::invalid_argument("explicit center is not representable under a non-linear kernel");
  if (expanded_ && c.is_explicit())
    throw std::invalid_argument("kernel expansion needs a combination center");
  if (!expanded_) {
    coords_ = materialize(P, c);
    coords_sq_ = coords_.squaredNorm();
    return;
  }
  support_ = c.support();
  weights_ = c.weights();
  for (std::size_t a = 0; a < support_.size(); ++a) {
    for (std::size_t b = 0; b < support_.size(); ++b) {
      self_ += weights_[a] * weights_[b] * kernel_.eval(P, support_[a], support_[b]);
    }
  }
}

double CenterDistance::sq(Index i) const {
  if (!expanded_) return P_->sq_distance(i, coords_, coords_sq_);
  double cross = 0.0;
  for (std::size_t a = 0; a < support_.size(); ++a) cross += weights_[a] * kernel_.eval(*P_, i, support_[a]);
  return std::max(0.0, kernel_.self(*P_, i) - 2.0 * cross + self_);
}

double CenterDistance::sq_to(const Vector& x) const {
  if (expanded_) throw std::invalid_argument("CenterDistance::sq_to needs the linear kernel");
  return (x - coords_).squaredNorm();
}

double eval_distance(const PointSet& P, const Center& o, Index i, const Kernel& kernel) {
  return CenterDistance(P, o, kernel)(i);
}

}  // namespace geosub
