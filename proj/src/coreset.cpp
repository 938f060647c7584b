#include "geosub/coreset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace geosub {

CoreSetSolver::CoreSetSolver(const PointSet& P, const Kernel& kernel) : P_(&P), kernel_(kernel) {}

bool CoreSetSolver::add(Index i) {
  if (i < 0 || i >= P_->n()) throw std::out_of_range("CoreSetSolver::add: index out of range");
  if (std::find(members_.begin(), members_.end(), i) != members_.end()) return false;
  if (m_ == K_.rows()) {
    const Index cap = std::max<Index>(8, 2 * m_);
    Eigen::MatrixXd K(cap, cap);
    K.topLeftCorner(m_, m_) = K_.topLeftCorner(m_, m_);
    K_.swap(K);
    lambda_.conservativeResize(cap);
    Klambda_.conservativeResize(cap);
  }
  for (Index j = 0; j < m_; ++j) {
    const double v = kernel_.eval(*P_, members_[static_cast<std::size_t>(j)], i);
    K_(j, m_) = v;
    K_(m_, j) = v;
  }
  K_(m_, m_) = kernel_.self(*P_, i);
  members_.push_back(i);
  if (m_ == 0) {
    lambda_(0) = 1.0;
    Klambda_(0) = K_(0, 0);
  } else {
    lambda_(m_) = 0.0;
    Klambda_(m_) = K_.row(m_).head(m_).dot(lambda_.head(m_));
  }
  ++m_;
  return true;
}

void CoreSetSolver::refresh() {
  Klambda_.head(m_).noalias() = K_.topLeftCorner(m_, m_) * lambda_.head(m_);
}

FwOutcome CoreSetSolver::solve(double xi, Index max_iterations) {
  if (m_ == 0) throw std::invalid_argument("CoreSetSolver::solve: empty core-set");
  FwOutcome out;
  const double xi2 = xi * xi;
  Vector dist(m_);
  for (Index it = 0;; ++it) {
    if (it % 64 == 0) refresh();
    const double c2 = cc();
    Index far = 0;
    Index near = -1;
    double phi = 0.0;
    for (Index j = 0; j < m_; ++j) {
      dist(j) = std::max(0.0, K_(j, j) - 2.0 * Klambda_(j) + c2);
      phi += lambda_(j) * dist(j);
      if (dist(j) > dist(far)) far = j;
      if (lambda_(j) > 0.0 && (near < 0 || dist(j) < dist(near))) near = j;
    }
    out.gap = std::max(0.0, dist(far) - phi);
    out.iterations = it;
    if (out.gap <= xi2 * phi || dist(far) <= 0.0) {
      out.certified = true;
      break;
    }
    if (it >= max_iterations) break;

    const double toward_gain = dist(far) - phi;
    const double away_gain = phi - dist(near);
    if (toward_gain >= away_gain || near == far) {
      const double alpha = std::clamp(toward_gain / (2.0 * dist(far)), 0.0, 1.0);
      lambda_.head(m_) *= (1.0 - alpha);
      lambda_(far) += alpha;
      Klambda_.head(m_) = (1.0 - alpha) * Klambda_.head(m_) + alpha * K_.col(far).head(m_);
    } else {
      const double lam = lambda_(near);
      const double alpha_max = lam / (1.0 - lam);
      double alpha = dist(near) > 0.0 ? away_gain / (2.0 * dist(near)) : alpha_max;
      alpha = std::clamp(alpha, 0.0, alpha_max);
      lambda_.head(m_) *= (1.0 + alpha);
      lambda_(near) -= alpha;
      if (alpha == alpha_max) lambda_(near) = 0.0;
      Klambda_.head(m_) = (1.0 + alpha) * Klambda_.head(m_) - alpha * K_.col(near).head(m_);
    }
  }
  return out;
}

Center CoreSetSolver::center() const {
  IndexList support;
  std::vector<double> weights;
  double sum = 0.0;
  for (Index j = 0; j < m_; ++j) {
    if (lambda_(j) > 0.0) {
      support.push_back(members_[static_cast<std::size_t>(j)]);
      weights.push_back(lambda_(j));
      sum += lambda_(j);
    }
  }
  for (double& w : weights) w /= sum;
  return Center::combination(std::move(support), std::move(weights));
}

double CoreSetSolver::dual_value() const {
  const Vector Kl = K_.topLeftCorner(m_, m_) * lambda_.head(m_);
  const double c2 = lambda_.head(m_).dot(Kl);
  return std::max(0.0, lambda_.head(m_).dot(K_.diagonal().head(m_)) - c2);
}

double CoreSetSolver::max_sq_distance() const {
  const Vector Kl = K_.topLeftCorner(m_, m_) * lambda_.head(m_);
  const double c2 = lambda_.head(m_).dot(Kl);
  double best = 0.0;
  for (Index j = 0; j < m_; ++j) best = std::max(best, K_(j, j) - 2.0 * Kl(j) + c2);
  return best;
}

Index fw_iteration_cap(double xi) {
  const double raw = std::ceil(4.0 / (xi * xi));
  return static_cast<Index>(std::min(raw, 2.0e6));
}

Center approx_center(const PointSet& P, const IndexList& T, double xi, const Kernel& kernel) {
  if (T.empty()) throw std::invalid_argument("approx_center: empty T");
  if (!in_open_unit(xi)) throw std::invalid_argument("approx_center: xi must be in (0,1)");
  CoreSetSolver solver(P, kernel);
  for (Index i : T) solver.add(i);
  solver.solve(xi, fw_iteration_cap(xi));
  return solver.center();
}

std::pair<Index, double> farthest_point(const PointSet& P, const Center& o, const Kernel& kernel, AccessLog* log) {
  const CenterDistance dist(P, o, kernel);
  Index best = 0;
  double best_sq = -1.0;
  for (Index i = 0; i < P.n(); ++i) {
    const double d2 = dist.sq(i);
    if (d2 > best_sq) {
      best_sq = d2;
      best = i;
    }
  }
  if (log) log->pass(P.n());
  return {best, std::sqrt(best_sq)};
}

Index coreset_size_bound(double epsilon, double s) {
  return ceil_count(2.0 / ((1.0 - s) * epsilon)) + 1;
}

std::pair<Ball, CoreSetState> badoiu_clarkson(const PointSet& P, double epsilon, double s, const Kernel& kernel) {
  if (!in_open_unit(epsilon)) throw std::invalid_argument("badoiu_clarkson: epsilon must be in (0,1)");
  if (!in_open_unit(s)) throw std::invalid_argument("badoiu_clarkson: s must be in (0,1)");
  CoreSetState st;
  st.epsilon = epsilon;
  st.s = s;
  st.xi = s * epsilon / (1.0 + epsilon);
  const Index bound = coreset_size_bound(epsilon, s);

  CoreSetSolver solver(P, kernel);
  solver.add(0);
  Ball best;
  best.radius = std::numeric_limits<double>::infinity();
  double lower = 0.0;  // max over rounds of sqrt(Phi) <= Rad(T) <= Rad(P)
  while (true) {
    ++st.iteration;
    solver.solve(st.xi, fw_iteration_cap(st.xi));
    const Center o = solver.center();
    const auto [q, far] = farthest_point(P, o, kernel, &st.log);
    lower = std::max(lower, std::sqrt(solver.dual_value()));
    if (far < best.radius) {
      best.radius = far;
      best.center = o;
    }
    if (best.radius <= (1.0 + epsilon) * lower) break;
    if (solver.size() >= bound) {
      st.size_cap_hit = true;
      break;
    }
    if (!solver.add(q)) break;  // farthest point already in T: o is exact up to xi
  }
  st.T = solver.members();
  st.center = best.center;
  return {best, st};
}

}  // namespace geosub
