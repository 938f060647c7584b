#include "geosub/oracle.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <list>

namespace geosub {

namespace {

constexpr double kSupportTol = 1e-12;

/// Gartner-style move-to-front miniball over explicit coordinates.
class Miniball {
 public:
  explicit Miniball(const PointSet& P) : P_(P), d_(P.d()) {
    for (Index i = 0; i < P.n(); ++i) order_.push_back(i);
    center_ = P.row(0);
    r2_ = 0.0;
    mtf(order_.end());
  }

  Vector center() const { return center_; }
  double radius() const { return std::sqrt(r2_); }

 private:
  const PointSet& P_;
  Index d_;
  std::list<Index> order_;
  IndexList support_;
  Vector center_;
  double r2_ = -1.0;

  bool outside(Index i) const {
    return (P_.row(i) - center_).squaredNorm() > r2_ * (1.0 + kSupportTol) + 1e-300;
  }

  // Circumsphere of the support within its affine hull.
  bool fit_support() {
    const std::size_t m = support_.size();
    if (m == 0) {
      r2_ = -1.0;
      return true;
    }
    const Vector q0 = P_.row(support_[0]);
    if (m == 1) {
      center_ = q0;
      r2_ = 0.0;
      return true;
    }
    const Index k = static_cast<Index>(m - 1);
    Eigen::MatrixXd V(d_, k);
    for (Index j = 0; j < k; ++j) V.col(j) = P_.row(support_[static_cast<std::size_t>(j + 1)]) - q0;
    const Eigen::MatrixXd A = 2.0 * V.transpose() * V;
    const Vector b = V.colwise().squaredNorm().transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    lu.setThreshold(1e-12);
    if (lu.rank() < k) return false;
    const Vector mu = lu.solve(b);
    center_ = q0 + V * mu;
    r2_ = (V * mu).squaredNorm();
    return true;
  }

  void mtf(std::list<Index>::iterator end) {
    if (!fit_support()) return;
    if (static_cast<Index>(support_.size()) == d_ + 1) return;
    for (auto it = order_.begin(); it != end;) {
      auto next = std::next(it);
      if (outside(*it)) {
        support_.push_back(*it);
        const Vector saved_c = center_;
        const double saved_r2 = r2_;
        if (fit_support()) {
          mtf(it);
        } else {
          center_ = saved_c;
          r2_ = saved_r2;
        }
        support_.pop_back();
        if (it != order_.begin()) order_.splice(order_.begin(), order_, it);
      }
      it = next;
    }
  }
};

}  // namespace

OracleResult exact_meb_combinatorial(const PointSet& P) {
  Miniball mb(P);
  OracleResult r;
  r.optimum_center = Center::point(mb.center());
  r.optimum_size = mb.radius();
  // Final coverage pass: tolerance absorbs the pivoting round-off.
  double far = 0.0;
  const Vector c = mb.center();
  for (Index i = 0; i < P.n(); ++i) far = std::max(far, std::sqrt(P.sq_distance(i, c)));
  r.optimum_size = std::max(r.optimum_size, far);
  r.method = "combinatorial";
  r.certified_tolerance = kSupportTol;
  return r;
}

namespace {

/// Primal active-set solve of min l'Gl - diag(G)'l over the simplex, restricted
/// to the points in `pts` (coordinates relative to an anchor). `lambda` is a
/// feasible warm start and receives the optimum.
void active_set_meb(const std::vector<Vector>& pts, Vector& lambda) {
  const Index m = static_cast<Index>(pts.size());
  Eigen::MatrixXd G(m, m);
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b <= a; ++b) G(a, b) = G(b, a) = pts[a].dot(pts[b]);
  const Vector diag = G.diagonal();
  std::vector<Index> W;
  for (Index a = 0; a < m; ++a)
    if (lambda(a) > 0.0) W.push_back(a);
  for (int iter = 0; iter < 100000; ++iter) {
    const Index k = static_cast<Index>(W.size());
    // Affinely dependent W: the objective is linear along the dependency, so
    // slide along it (towards the newest point) until a weight reaches zero.
    Eigen::MatrixXd A(pts.front().size() + 1, k);
    for (Index a = 0; a < k; ++a) {
      A.col(a).head(pts.front().size()) = pts[W[a]];
      A(A.rows() - 1, a) = 1.0;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> dep(A);
    dep.setThreshold(1e-10);
    if (dep.rank() < k) {
      Vector v = dep.kernel().col(0);
      if (v(k - 1) < 0.0) v = -v;
      double t = std::numeric_limits<double>::infinity();
      Index blocking = -1;
      for (Index a = 0; a < k; ++a) {
        if (v(a) < 0.0 && lambda(W[a]) / -v(a) < t) {
          t = lambda(W[a]) / -v(a);
          blocking = a;
        }
      }
      for (Index a = 0; a < k; ++a) lambda(W[a]) += t * v(a);
      lambda(W[blocking]) = 0.0;
      W.erase(W.begin() + blocking);
      continue;
    }
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(k + 1, k + 1);
    Vector rhs(k + 1);
    for (Index a = 0; a < k; ++a) {
      for (Index b = 0; b < k; ++b) K(a, b) = 2.0 * G(W[a], W[b]);
      K(a, k) = K(k, a) = 1.0;
      rhs(a) = diag(W[a]);
    }
    rhs(k) = 1.0;
    const Vector sol = K.fullPivLu().solve(rhs);
    double alpha = 1.0;
    Index blocking = -1;
    for (Index a = 0; a < k; ++a) {
      const double cur = lambda(W[a]);
      if (sol(a) < cur && sol(a) < 0.0) {
        const double step = cur / (cur - sol(a));
        if (step < alpha) {
          alpha = step;
          blocking = a;
        }
      }
    }
    for (Index a = 0; a < k; ++a) lambda(W[a]) += alpha * (sol(a) - lambda(W[a]));
    if (blocking >= 0) {
      lambda(W[blocking]) = 0.0;
      W.erase(W.begin() + blocking);
      continue;
    }
    // Stationary on W: add the point that violates the radius most.
    const Vector g = G * lambda;
    const double c2 = lambda.dot(g);
    const double r2 = lambda.dot(diag) - c2;
    Index worst = -1;
    double worst_d2 = r2 * (1.0 + 1e-13) + 1e-300;
    for (Index a = 0; a < m; ++a) {
      const double d2 = diag(a) - 2.0 * g(a) + c2;
      if (lambda(a) == 0.0 && d2 > worst_d2) {
        worst_d2 = d2;
        worst = a;
      }
    }
    if (worst < 0) return;
    W.push_back(worst);
  }
}

}  // namespace

OracleResult exact_meb_certified(const PointSet& P, double rel_tol) {
  OracleResult r;
  r.method = "active-set";
  const Vector anchor = P.row(0);
  std::vector<Vector> pts{Vector::Zero(P.d())};
  IndexList S{0};
  Vector lambda = Vector::Ones(1);
  for (;;) {
    active_set_meb(pts, lambda);
    Vector c = Vector::Zero(P.d());
    for (std::size_t a = 0; a < pts.size(); ++a) c += lambda(static_cast<Index>(a)) * pts[a];
    double lower2 = 0.0;
    for (std::size_t a = 0; a < pts.size(); ++a)
      lower2 += lambda(static_cast<Index>(a)) * (pts[a] - c).squaredNorm();
    const Vector coords = c + anchor;
    const double coords_sq = coords.squaredNorm();
    Index far = 0;
    double far_sq = -1.0;
    for (Index i = 0; i < P.n(); ++i) {
      const double d2 = P.sq_distance(i, coords, coords_sq);
      if (d2 > far_sq) {
        far_sq = d2;
        far = i;
      }
    }
    const double lower = std::sqrt(std::max(0.0, lower2));
    const double upper = std::sqrt(far_sq);
    const double gap = lower > 0.0 ? (upper - lower) / lower : upper;
    ++r.subproblems;
    if (gap <= rel_tol || std::find(S.begin(), S.end(), far) != S.end()) {
      r.optimum_center = Center::point(coords);
      r.optimum_size = upper;
      r.certified_tolerance = std::max(0.0, gap);
      return r;
    }
    S.push_back(far);
    pts.push_back(P.row(far) - anchor);
    lambda.conservativeResize(static_cast<Index>(pts.size()));
    lambda(lambda.size() - 1) = 0.0;
  }
}

OracleResult exact_meb(const PointSet& P) {
  if (P.d() <= 3 && !P.is_sparse()) return exact_meb_combinatorial(P);
  return exact_meb_certified(P);
}

double binomial(Index n, Index k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (Index j = 1; j <= k; ++j) r = r * static_cast<double>(n - k + j) / static_cast<double>(j);
  return std::round(r);
}

OracleResult exact_meb_outliers_tiny(const PointSet& P, Index outliers) {
  const Index n = P.n();
  if (outliers < 0 || outliers >= n) throw std::invalid_argument("exact_meb_outliers_tiny: need 0 <= outliers < n");
  const double count = binomial(n, outliers);
  if (count > 1e6) {
    throw Refusal("exact_meb_outliers_tiny: C(" + std::to_string(n) + "," + std::to_string(outliers) +
                  ") exceeds the enumeration budget 1e6");
  }
  std::vector<bool> removed(static_cast<std::size_t>(n), false);
  std::fill(removed.begin(), removed.begin() + outliers, true);
  OracleResult best;
  best.optimum_size = std::numeric_limits<double>::infinity();
  best.subproblems = 0;
  // prev_permutation over a boolean mask enumerates every k-subset once.
  do {
    IndexList keep;
    for (Index i = 0; i < n; ++i)
      if (!removed[static_cast<std::size_t>(i)]) keep.push_back(i);
    const OracleResult sub = exact_meb(P.subset(keep));
    ++best.subproblems;
    if (sub.optimum_size < best.optimum_size) {
      best.optimum_size = sub.optimum_size;
      best.optimum_center = sub.optimum_center;
      best.method = "enumerate+" + sub.method;
      best.certified_tolerance = sub.certified_tolerance;
    }
  } while (std::prev_permutation(removed.begin(), removed.end()));
  return best;
}

OracleResult exact_meb_outliers_tiny(const PointSet& P, double gamma) {
  if (gamma < 0.0 || gamma >= 1.0) throw std::invalid_argument("exact_meb_outliers_tiny: gamma must be in [0,1)");
  return exact_meb_outliers_tiny(P, ceil_count(gamma * static_cast<double>(P.n())));
}

OracleResult exact_polytope_distance_tiny(const PointSet& P) {
  const Index n = P.n();
  if (n > 6) throw std::invalid_argument("exact_polytope_distance_tiny: n must be <= 6");
  OracleResult best;
  best.optimum_size = std::numeric_limits<double>::infinity();
  best.method = "active-set";
  best.certified_tolerance = 1e-10;
  best.subproblems = 0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    IndexList S;
    for (Index i = 0; i < n; ++i)
      if (mask & (1u << i)) S.push_back(i);
    const Index m = static_cast<Index>(S.size());
    Eigen::MatrixXd X(m, P.d());
    for (Index a = 0; a < m; ++a) X.row(a) = P.row(S[static_cast<std::size_t>(a)]).transpose();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m + 1, m + 1);
    A.topLeftCorner(m, m) = X * X.transpose();
    A.block(0, m, m, 1).setOnes();
    A.block(m, 0, 1, m).setOnes();
    Vector b = Vector::Zero(m + 1);
    b(m) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    lu.setThreshold(1e-12);
    ++best.subproblems;
    if (lu.rank() < m + 1) continue;
    const Vector sol = lu.solve(b);
    const Vector lambda = sol.head(m);
    if (lambda.minCoeff() < -1e-12) continue;
    const Vector v = X.transpose() * lambda;
    const double dist = v.norm();
    if (dist < best.optimum_size) {
      best.optimum_size = dist;
      best.optimum_center = Center::point(v);
    }
  }
  return best;
}

}  // namespace geosub
