#pragma once

#include "geosub/center.hpp"

namespace geosub {

/// Reference solutions for tests and the verify command.
struct OracleResult {
  double optimum_size = 0.0;
  Center optimum_center;
  std::string method;
  /// Combinatorial: numeric tolerance of the support test. Certified:
  /// relative radius gap between the primal and dual bounds.
  double certified_tolerance = 0.0;
  Index subproblems = 1;
};

/// Exact MEB. d <= 3 uses move-to-front pivoting over support sets;
/// larger d grows a support set and solves it exactly by a primal active-set
/// QP, stopping when the farthest point is within 1e-9 relative of the dual bound.
OracleResult exact_meb(const PointSet& P);
/// Both paths are exposed for cross-checking.
OracleResult exact_meb_combinatorial(const PointSet& P);
OracleResult exact_meb_certified(const PointSet& P, double rel_tol = 1e-9);

/// Minimum over all removals of exactly `outliers` points. Refuses above 1e6 subsets.
OracleResult exact_meb_outliers_tiny(const PointSet& P, Index outliers);
/// Same with ceil(gamma n) outliers.
OracleResult exact_meb_outliers_tiny(const PointSet& P, double gamma);

/// min |sum lambda_i p_i| over the simplex, for n <= 6.
OracleResult exact_polytope_distance_tiny(const PointSet& P);

/// Binomial coefficient in double precision (budget checks only).
double binomial(Index n, Index k);

}  // namespace geosub
