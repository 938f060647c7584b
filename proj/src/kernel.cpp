#include "geosub/kernel.hpp"

#include <cmath>

namespace geosub {

Kernel Kernel::rbf(double bandwidth) {
  if (!(bandwidth > 0.0)) throw std::invalid_argument("rbf bandwidth must be positive");
  return {Kind::rbf, bandwidth};
}

double Kernel::eval(const PointSet& P, Index i, Index j) const {
  if (is_linear()) return P.dot(i, j);
  return std::exp(-P.sq_distance(i, j) / (2.0 * bandwidth * bandwidth));
}

double Kernel::eval(const PointSet& P, Index i, const Vector& x) const {
  if (is_linear()) return P.dot(i, x);
  return std::exp(-P.sq_distance(i, x) / (2.0 * bandwidth * bandwidth));
}

double Kernel::eval(const Vector& a, const Vector& b) const {
  if (is_linear()) return a.dot(b);
  return std::exp(-(a - b).squaredNorm() / (2.0 * bandwidth * bandwidth));
}

std::string Kernel::name() const {
  return is_linear() ? "linear" : "rbf(" + std::to_string(bandwidth) + ")";
}

}  // namespace geosub
