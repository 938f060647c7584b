#pragma once

#include "geosub/center.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace geosub {

/// A shape family binds a PointSet and exposes
///   using CenterType = ...;
///   Evaluator bind(const CenterType&) const;      // evaluator.f(i), evaluator.touch(f)
///   double f_point(const CenterType&, const Vector&) const;
///   bool contains(const CenterType&, double size, const Vector&) const;
///   const PointSet& points() const;
/// touch_size is a non-decreasing function of f for every family here, which
/// is what lets one "largest f" ranking serve all of them.
template <class F>
concept ShapeFamily = requires(const F& fam, const typename F::CenterType& c, const Vector& x, Index i, double s) {
  { fam.bind(c).f(i) } -> std::convertible_to<double>;
  { fam.bind(c).touch(s) } -> std::convertible_to<double>;
  { fam.f_point(c, x) } -> std::convertible_to<double>;
  { fam.contains(c, s, x) } -> std::convertible_to<bool>;
  { fam.touch_point(c, x) } -> std::convertible_to<double>;
  { fam.points() } -> std::convertible_to<const PointSet&>;
};

inline constexpr double kInfiniteSize = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Families

class BallFamily {
 public:
  using CenterType = Center;
  explicit BallFamily(const PointSet& P, Kernel kernel = Kernel::linear()) : P_(&P), kernel_(kernel) {}

  struct Evaluator {
    CenterDistance dist;
    double f(Index i) const { return dist(i); }
    static double touch(double f) { return std::max(0.0, f); }
  };
  Evaluator bind(const Center& c) const { return {CenterDistance(*P_, c, kernel_)}; }

  double f_point(const Center& c, const Vector& x) const { return (x - c.coords()).norm(); }
  double touch_point(const Center& c, const Vector& x) const { return f_point(c, x); }
  bool contains(const Center& c, double r, const Vector& x) const { return (x - c.coords()).norm() <= r; }
  const PointSet& points() const { return *P_; }
  const Kernel& kernel() const { return kernel_; }

 private:
  const PointSet* P_;
  Kernel kernel_;
};

/// Union of balls with a common radius; f = distance to the nearest center.
struct KBallUnion {
  std::vector<Vector> centers;
  double radius = 0.0;
};

class KBallFamily {
 public:
  using CenterType = std::vector<Vector>;
  explicit KBallFamily(const PointSet& P) : P_(&P) {}

  struct Evaluator {
    const PointSet* P;
    const std::vector<Vector>* centers;
    std::vector<double> sq_norms;
    double f(Index i) const {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < centers->size(); ++j)
        best = std::min(best, P->sq_distance(i, (*centers)[j], sq_norms[j]));
      return std::sqrt(best);
    }
    static double touch(double f) { return std::max(0.0, f); }
  };
  Evaluator bind(const CenterType& c) const {
    if (c.empty()) throw std::invalid_argument("KBallFamily: need at least one center");
    Evaluator e{P_, &c, {}};
    for (const Vector& v : c) e.sq_norms.push_back(v.squaredNorm());
    return e;
  }

  double f_point(const CenterType& c, const Vector& x) const {
    double best = std::numeric_limits<double>::infinity();
    for (const Vector& v : c) best = std::min(best, (x - v).norm());
    return best;
  }
  double touch_point(const CenterType& c, const Vector& x) const { return f_point(c, x); }
  bool contains(const CenterType& c, double r, const Vector& x) const {
    return std::any_of(c.begin(), c.end(), [&](const Vector& v) { return (x - v).norm() <= r; });
  }
  const PointSet& points() const { return *P_; }

 private:
  const PointSet* P_;
};

/// Line {anchor + t direction}; |direction| = 1.
struct Line {
  Vector anchor;
  Vector direction;
};

struct Slab {
  Line line;
  double width = 0.0;
};

inline double line_distance(const Line& l, const Vector& x) {
  const Vector v = x - l.anchor;
  return (v - v.dot(l.direction) * l.direction).norm();
}

class SlabFamily {
 public:
  using CenterType = Line;
  explicit SlabFamily(const PointSet& P) : P_(&P) {}

  struct Evaluator {
    const PointSet* P;
    const Line* line;
    double anchor_sq;
    double anchor_dot_dir;
    double f(Index i) const {
      if (!P->is_sparse()) {
        const Vector v = P->dense().row(i).transpose() - line->anchor;
        return (v - v.dot(line->direction) * line->direction).norm();
      }
      // |p - a|^2 - <p - a, u>^2 without materializing p.
      const double pa = P->dot(i, line->anchor);
      const double pu = P->dot(i, line->direction);
      const double sq = P->sq_norm(i) - 2.0 * pa + anchor_sq;
      const double along = pu - anchor_dot_dir;
      return std::sqrt(std::max(0.0, sq - along * along));
    }
    static double touch(double f) { return std::max(0.0, f); }
  };
  Evaluator bind(const Line& l) const {
    return {P_, &l, l.anchor.squaredNorm(), l.anchor.dot(l.direction)};
  }

  double f_point(const Line& l, const Vector& x) const { return line_distance(l, x); }
  double touch_point(const Line& l, const Vector& x) const { return f_point(l, x); }
  bool contains(const Line& l, double r, const Vector& x) const { return line_distance(l, x) <= r; }
  const PointSet& points() const { return *P_; }

 private:
  const PointSet* P_;
};

/// Unit direction in feature space, explicit or as a signed combination
/// u = scale * sum_j w_j phi(s_j) (kernel path). Support points are stored by
/// value so a direction may mix points of several sets.
struct Direction {
  Vector coords;  // linear path; empty when expanded
  std::vector<Vector> support;
  std::vector<double> weights;
  double scale = 1.0;

  bool is_explicit() const { return coords.size() > 0; }
};

/// Half-space x(u, s) = {p : sign * (<p,u> - offset) >= 1/s}, f = -sign * (<p,u> - offset).
/// sign = +1 is the one-class margin with the origin at `offset`; sign = -1
/// mirrors the family for the opposite class of a two-class margin.
/// s = 0 is the empty set and s = infinity the closed half-space through the offset.
class HalfSpaceFamily {
 public:
  using CenterType = Direction;
  explicit HalfSpaceFamily(const PointSet& P, Kernel kernel = Kernel::linear(), double sign = 1.0, double offset = 0.0)
      : P_(&P), kernel_(kernel), sign_(sign), offset_(offset) {}

  struct Evaluator {
    const PointSet* P;
    const Direction* u;
    Kernel kernel;
    double sign;
    double offset;
    double projection(Index i) const {
      if (u->is_explicit()) return P->dot(i, u->coords);
      double s = 0.0;
      for (std::size_t j = 0; j < u->support.size(); ++j) s += u->weights[j] * kernel.eval(*P, i, u->support[j]);
      return u->scale * s;
    }
    double f(Index i) const { return -sign * (projection(i) - offset); }
    static double touch(double f) { return f < 0.0 ? 1.0 / (-f) : kInfiniteSize; }
  };
  Evaluator bind(const Direction& u) const { return {P_, &u, kernel_, sign_, offset_}; }

  double f_point(const Direction& u, const Vector& x) const { return -sign_ * (x.dot(u.coords) - offset_); }
  double touch_point(const Direction& u, const Vector& x) const { return Evaluator::touch(f_point(u, x)); }
  /// Decided through touch_point so that membership and touch size agree bit for bit.
  bool contains(const Direction& u, double s, const Vector& x) const {
    if (s <= 0.0 || f_point(u, x) > 0.0) return false;
    return touch_point(u, x) <= s;
  }
  const PointSet& points() const { return *P_; }

 private:
  const PointSet* P_;
  Kernel kernel_;
  double sign_;
  double offset_;
};

// ---------------------------------------------------------------------------
// Generalized primitives

struct RankResult {
  IndexList Q;         // sorted by index
  double l = 0.0;      // touch size of the (t+1)-th ranked point
  Index witness = -1;  // that point
  double witness_f = 0.0;
};

namespace detail {

/// Ranking order: larger f first, ties to the lower index.
struct RankedEntry {
  double f;
  Index index;
  Index position;  // sample position, final tie-break for samples with repeats
  bool operator<(const RankedEntry& o) const {
    if (f != o.f) return f > o.f;
    if (index != o.index) return index < o.index;
    return position < o.position;
  }
};

}  // namespace detail

/// Q = the t largest-f points of P, l = touch size of the next one.
/// t = 0 is accepted and yields the top-ranked point as witness.
/// check_witness verifies that every point outside Q lies in x(center, l)
/// and every point of Q with f above the witness lies outside it.
template <ShapeFamily F>
RankResult generalized_rank(const F& fam, const typename F::CenterType& c, Index t, AccessLog* log = nullptr,
                            bool check_witness = false) {
  const PointSet& P = fam.points();
  if (t < 0 || t >= P.n()) throw std::invalid_argument("generalized_rank: need t < n");
  const auto ev = fam.bind(c);
  std::vector<detail::RankedEntry> e(static_cast<std::size_t>(P.n()));
  for (Index i = 0; i < P.n(); ++i) e[static_cast<std::size_t>(i)] = {ev.f(i), i, i};
  if (log) log->pass(P.n());
  std::nth_element(e.begin(), e.begin() + t, e.end());
  RankResult r;
  for (Index k = 0; k < t; ++k) r.Q.push_back(e[static_cast<std::size_t>(k)].index);
  std::sort(r.Q.begin(), r.Q.end());
  const auto& w = e[static_cast<std::size_t>(t)];
  r.witness = w.index;
  r.witness_f = w.f;
  r.l = ev.touch(w.f);
  if (check_witness) {
    for (std::size_t k = 0; k < e.size(); ++k) {
      const bool in_q = k < static_cast<std::size_t>(t);
      const bool inside = ev.touch(e[k].f) <= r.l;
      if (!in_q && !inside) throw std::logic_error("generalized_rank: point outside Q is not covered");
      if (in_q && e[k].f > w.f && std::isfinite(r.l) && inside)
        throw std::logic_error("generalized_rank: point of Q is covered");
    }
  }
  return r;
}

struct AdaptiveResult {
  Index index = -1;
  Index sample_size = 0;  // n'
  Index top_size = 0;     // |Q'|
};

inline Index adaptive_sample_size(double delta, double eta1, double c2) {
  return ceil_count(c2 / delta * std::log(1.0 / eta1));
}

inline Index adaptive_top_size(double gamma, double delta, Index sample_size) {
  return ceil_count(1.5 * (delta + gamma) * static_cast<double>(sample_size));
}

/// Sample n' points, keep the farthest ceil(1.5 (delta + gamma) n'), return one uniformly.
template <ShapeFamily F>
AdaptiveResult generalized_uniform_adaptive(const F& fam, const typename F::CenterType& c, double gamma, double delta,
                                            double eta1, RngStream& rng, double c2 = 1.0, AccessLog* log = nullptr) {
  if (!(delta > 0.0) || gamma < 0.0 || delta + gamma >= 1.0 || !in_open_unit(eta1))
    throw std::invalid_argument("uniform_adaptive: invalid gamma/delta/eta1");
  const PointSet& P = fam.points();
  AdaptiveResult r;
  r.sample_size = adaptive_sample_size(delta, eta1, c2);
  r.top_size = std::min(adaptive_top_size(gamma, delta, r.sample_size), r.sample_size);
  if (r.sample_size < 1 || r.top_size < 1) throw std::invalid_argument("uniform_adaptive: Q' is empty");
  const auto ev = fam.bind(c);
  std::vector<detail::RankedEntry> e(static_cast<std::size_t>(r.sample_size));
  for (Index k = 0; k < r.sample_size; ++k) {
    const Index i = rng.index(P.n());
    e[static_cast<std::size_t>(k)] = {ev.f(i), i, k};
  }
  if (log) log->sampled(r.sample_size);
  std::partial_sort(e.begin(), e.begin() + r.top_size, e.end());
  r.index = e[static_cast<std::size_t>(rng.index(r.top_size))].index;
  return r;
}

struct SandwichResult {
  double size = 0.0;  // l~
  Index witness = -1;
  double witness_f = 0.0;
  Index sample_size = 0;  // n''
  Index rank = 0;         // t''; l~ is the (t''+1)-th largest
};

inline Index sandwich_sample_size(double gamma, double delta, double eta2, double c3) {
  return ceil_count(c3 * gamma / (delta * delta) * std::log(1.0 / eta2));
}

inline Index sandwich_rank(double gamma, double delta, Index sample_size) {
  const double g = 1.0 + delta / gamma;
  return ceil_count(g * g * gamma * static_cast<double>(sample_size));
}

/// Sample n'' points; l~ = touch size of the (ceil((1 + delta/gamma)^2 gamma n'') + 1)-th largest f.
template <ShapeFamily F>
SandwichResult generalized_sandwich(const F& fam, const typename F::CenterType& c, double gamma, double delta,
                                    double eta2, RngStream& rng, double c3 = 1.0, AccessLog* log = nullptr) {
  if (!(gamma > 0.0) || !(delta > 0.0) || !(delta < gamma / 3.0))
    throw std::invalid_argument("sandwich: requires 0 < delta < gamma/3");
  if (!in_open_unit(eta2)) throw std::invalid_argument("sandwich: eta2 must be in (0,1)");
  const PointSet& P = fam.points();
  SandwichResult r;
  r.sample_size = sandwich_sample_size(gamma, delta, eta2, c3);
  r.rank = sandwich_rank(gamma, delta, r.sample_size);
  if (r.rank + 1 > r.sample_size) throw std::invalid_argument("sandwich: rank exceeds sample size");
  const auto ev = fam.bind(c);
  std::vector<detail::RankedEntry> e(static_cast<std::size_t>(r.sample_size));
  for (Index k = 0; k < r.sample_size; ++k) {
    const Index i = rng.index(P.n());
    e[static_cast<std::size_t>(k)] = {ev.f(i), i, k};
  }
  if (log) log->sampled(r.sample_size);
  std::nth_element(e.begin(), e.begin() + r.rank, e.end());
  const auto& w = e[static_cast<std::size_t>(r.rank)];
  r.witness = w.index;
  r.witness_f = w.f;
  r.size = ev.touch(w.f);
  return r;
}

/// Number of points of P inside x(center, size).
template <ShapeFamily F>
Index count_covered(const F& fam, const typename F::CenterType& c, double size, AccessLog* log = nullptr) {
  const auto ev = fam.bind(c);
  Index k = 0;
  for (Index i = 0; i < fam.points().n(); ++i) k += ev.touch(ev.f(i)) <= size ? 1 : 0;
  if (log) log->pass(fam.points().n());
  return k;
}

}  // namespace geosub
