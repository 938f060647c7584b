#pragma once

#include "geosub/center.hpp"

namespace geosub {

/// Outcome of one Frank-Wolfe solve over the current core-set.
struct FwOutcome {
  Index iterations = 0;
  bool certified = false;  // gap certificate reached before the iteration cap
  double gap = 0.0;        // max_j |t_j - c|^2 - dual value
};

/// Incremental MEB solver over a growing core-set T of a PointSet.
///
/// Works on the Gram matrix of T only, so it is kernel-agnostic. The center is
/// c = sum_j lambda_j phi(t_j). Frank-Wolfe with away steps and exact line
/// search maximizes the dual Phi(lambda) = sum_j lambda_j K_jj - lambda' K lambda.
/// Since |c - c*|^2 <= max_j |t_j - c|^2 - Rad(T)^2 and Phi <= Rad(T)^2,
/// stopping at gap <= xi^2 Phi certifies |c - c*| <= xi Rad(T).
/// Adding a point keeps lambda, so successive solves are warm-started.
class CoreSetSolver {
 public:
  CoreSetSolver(const PointSet& P, const Kernel& kernel);

  /// Append p_i to T. Returns false (and does nothing) if i is already in T.
  bool add(Index i);
  FwOutcome solve(double xi, Index max_iterations);

  Index size() const { return m_; }
  const IndexList& members() const { return members_; }
  Center center() const;
  double dual_value() const;  // lower bound on Rad(T)^2
  double max_sq_distance() const;  // max_j |t_j - c|^2, upper bound on Rad(T)^2

 private:
  const PointSet* P_;
  Kernel kernel_;
  Index m_ = 0;
  IndexList members_;
  Eigen::MatrixXd K_;
  Vector lambda_;
  Vector Klambda_;

  void refresh();
  double cc() const { return lambda_.head(m_).dot(Klambda_.head(m_)); }
};

/// Default iteration cap ceil(4 / xi^2), clamped to keep tiny xi bounded.
Index fw_iteration_cap(double xi);

/// Center within xi * Rad(T) of the exact MEB center of T.
Center approx_center(const PointSet& P, const IndexList& T, double xi, const Kernel& kernel = Kernel::linear());

/// Farthest point from o; ties go to the lowest index. One full pass.
std::pair<Index, double> farthest_point(const PointSet& P, const Center& o, const Kernel& kernel = Kernel::linear(),
                                        AccessLog* log = nullptr);

struct CoreSetState {
  IndexList T;
  Center center;
  Index iteration = 0;
  double epsilon = 0.0;
  double s = 0.0;
  double xi = 0.0;
  bool size_cap_hit = false;
  AccessLog log;
};

/// |T| bound ceil(2 / ((1 - s) eps)) + 1.
Index coreset_size_bound(double epsilon, double s);

/// (1 + eps)-approximate MEB by core-set growth with approximate centers.
std::pair<Ball, CoreSetState> badoiu_clarkson(const PointSet& P, double epsilon, double s = 1.0 / 3.0,
                                              const Kernel& kernel = Kernel::linear());

}  // namespace geosub
