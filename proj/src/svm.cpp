#include "geosub/mex.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>

namespace geosub {

namespace {

using Clock = std::chrono::steady_clock;

// Closest point to the origin on the segment [v, m], as the step alpha in
// v + alpha (m - v). vm = <v, m>, mm = |m|^2. Returns 0 when the step would
// not shrink |v| (exact arithmetic never does; rounding can).
double segment_step(double vv, double vm, double mm, double* new_vv) {
  const double denom = vv - 2.0 * vm + mm;
  *new_vv = vv;
  if (!(denom > 0.0)) return 0.0;
  const double alpha = std::clamp((vv - vm) / denom, 0.0, 1.0);
  const double nv = (1.0 - alpha) * (1.0 - alpha) * vv + 2.0 * alpha * (1.0 - alpha) * vm + alpha * alpha * mm;
  if (!(nv < vv)) return 0.0;
  *new_vv = std::max(nv, 0.0);
  return alpha;
}

// Max squared distance over pairs of a deterministic subsample (64 points).
double sampled_sq_diameter(const PointSet& P, const Kernel& kernel, RngStream* rng) {
  const Index m = std::min<Index>(64, P.n());
  IndexList idx(static_cast<std::size_t>(m));
  for (Index k = 0; k < m; ++k)
    idx[static_cast<std::size_t>(k)] = rng ? rng->index(P.n()) : (k * P.n()) / m;
  double best = 0.0;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const double sq = kernel.self(P, idx[a]) + kernel.self(P, idx[b]) - 2.0 * kernel.eval(P, idx[a], idx[b]);
      best = std::max(best, sq);
    }
  return best;
}

Index epsilon_rounds(double e_estimate, double epsilon) {
  return 2 * ceil_count(2.0 * e_estimate / epsilon);
}

// v = sum_j w_j phi(s_j) with signed weights; coords carries v itself under
// the linear kernel.
struct Expansion {
  Kernel kernel;
  std::vector<Vector> pts;
  std::vector<double> w;
  Vector coords;
  double vv = 0.0;

  bool linear() const { return kernel.is_linear(); }

  double proj(const PointSet& P, Index i) const {
    if (linear()) return P.dot(i, coords);
    double s = 0.0;
    for (std::size_t j = 0; j < pts.size(); ++j) s += w[j] * kernel.eval(P, i, pts[j]);
    return s;
  }

  void scale(double f) {
    for (double& x : w) x *= f;
    if (linear()) coords *= f;
  }

  void append(const Vector& x, double weight) {
    if (linear()) {
      coords += weight * x;
    } else {
      pts.push_back(x);
      w.push_back(weight);
    }
  }

  Direction direction() const {
    Direction u;
    const double norm = std::sqrt(vv);
    if (linear()) {
      u.coords = coords / norm;
    } else {
      u.support = pts;
      u.weights = w;
      u.scale = 1.0 / norm;
    }
    return u;
  }
};

// Upper quantile of f over a uniform sample, used when gamma = 0 leaves the
// sandwich estimator undefined.
template <class Ev>
double sampled_quantile(const Ev& ev, Index n, Index m, double delta, RngStream& rng, AccessLog* log) {
  std::vector<double> f(static_cast<std::size_t>(m));
  for (auto& v : f) v = ev.f(rng.index(n));
  if (log) log->sampled(m);
  const Index r = std::min<Index>(ceil_count(delta * static_cast<double>(m)), m - 1);
  std::nth_element(f.begin(), f.begin() + r, f.end(), std::greater<>());
  return f[static_cast<std::size_t>(r)];
}

Index resolve_repetitions(const BiCriteriaParams& params, const SvmParams& sparams) {
  Index N = params.repetitions > 0 ? params.repetitions : sparams.repetitions;
  if (params.max_repetitions > 0) N = std::min(N, params.max_repetitions);
  return std::max<Index>(N, 1);
}

void check_common(const BiCriteriaParams& params) {
  if (!in_open_unit(params.epsilon) || !in_open_unit(params.delta) || !in_open_unit(params.eta1))
    throw std::invalid_argument("svm: epsilon, delta, eta1 must be in (0,1)");
}

}  // namespace

GilbertResult gilbert(const PointSet& P, const GilbertTarget& target, const Kernel& kernel) {
  if (P.n() < 1) throw std::invalid_argument("gilbert: empty point set");
  if (target.iterations <= 0 && !(target.epsilon > 0.0))
    throw std::invalid_argument("gilbert: need an iteration count or a relative error");
  const Index n = P.n();
  Vector kd(n);
  for (Index i = 0; i < n; ++i) kd(i) = kernel.self(P, i);

  auto column = [&](Index j) {
    Vector c(n);
    if (kernel.is_linear() && !P.is_sparse()) {
      c.noalias() = P.dense() * P.dense().row(j).transpose();
    } else {
      for (Index i = 0; i < n; ++i) c(i) = kernel.eval(P, i, j);
    }
    return c;
  };

  GilbertResult out;
  Index i0 = 0;
  kd.minCoeff(&i0);
  Vector lambda = Vector::Zero(n);
  lambda(i0) = 1.0;
  Vector g = column(i0);  // g_p = <phi(p), v>
  double vv = kd(i0);
  const double floor = 1e-12 * std::sqrt(kd.maxCoeff());

  double sq_diam = 0.0;
  Index limit = target.iterations > 0 ? target.iterations : target.max_iterations;
  if (target.epsilon > 0.0) sq_diam = sampled_sq_diameter(P, kernel, nullptr);

  Index it = 0;
  while (true) {
    if (std::sqrt(vv) <= floor) {
      vv = 0.0;
      out.flags.push_back("origin-in-hull");
      break;
    }
    if (target.epsilon > 0.0 && it % 100 == 0) {
      out.e_estimate = sq_diam / vv;
      limit = std::min(target.max_iterations, epsilon_rounds(out.e_estimate, target.epsilon));
      if (target.iterations > 0) limit = std::min(limit, target.iterations);
    }
    if (it >= limit) break;
    Index j = 0;
    g.minCoeff(&j);
    double nv;
    const double alpha = segment_step(vv, g(j), kd(j), &nv);
    if (alpha == 0.0) {
      out.flags.push_back("converged");
      break;
    }
    lambda *= (1.0 - alpha);
    lambda(j) += alpha;
    g = (1.0 - alpha) * g + alpha * column(j);
    vv = nv;
    ++it;
    if (target.record_norms) out.norms.push_back(std::sqrt(vv));
  }

  IndexList support;
  std::vector<double> weights;
  for (Index i = 0; i < n; ++i)
    if (lambda(i) > 0.0) {
      support.push_back(i);
      weights.push_back(lambda(i));
    }
  out.center = Center::combination(std::move(support), std::move(weights));
  out.distance = std::sqrt(vv);
  out.iterations = it;
  return out;
}

OneClassResult svm_one_class_outliers(const OutlierInstance& inst, const BiCriteriaParams& params, RngStream& rng,
                                      bool sublinear, const Kernel& kernel, const SvmParams& sparams) {
  if (inst.points == nullptr) throw std::invalid_argument("svm_one_class: missing point set");
  check_common(params);
  const PointSet& P = inst.P();
  const Index n = P.n();
  const double gamma = inst.gamma;
  if (gamma < 0.0 || gamma + params.delta >= 1.0) throw std::invalid_argument("svm_one_class: need 0 <= gamma < 1 - delta");
  const double dp = params.delta / 5.0;
  if (sublinear && gamma > 0.0 && !(dp < gamma / 3.0))
    throw std::invalid_argument("svm_one_class: requires delta/5 < gamma/3");
  const auto start = Clock::now();
  const Index t = std::min(ceil_count((params.delta + gamma) * static_cast<double>(n)), n - 1);
  const Index N = resolve_repetitions(params, sparams);
  const Index cap = params.z > 0 ? params.z : sparams.max_rounds;
  const double eta2 = params.eta2 > 0.0 ? params.eta2 : 1.0 / (static_cast<double>(cap) * static_cast<double>(N));
  const Index quantile_sample = ceil_count(params.c3 / dp * std::log(1.0 / eta2));

  OneClassResult out;
  SolveReport& rep = out.report;
  rep.algorithm = sublinear ? "svm-one-class-sublinear" : "svm-one-class-linear";
  const HalfSpaceFamily fam(P, kernel);
  double e_estimate = 0.0;
  Index rounds_total = 0;

  for (Index r = 0; r < N; ++r) {
    RngStream rr = rng.child(static_cast<std::uint64_t>(r));
    const double sq_diam = sampled_sq_diameter(P, kernel, &rr);
    rep.log.sampled(std::min<Index>(64, n));
    Expansion v{kernel, {}, {}, Vector::Zero(P.d()), 0.0};
    const Index p0 = rr.index(n);
    rep.log.sampled(1);
    v.append(P.row(p0), 1.0);
    v.vv = kernel.self(P, p0);
    bool improved = false;

    for (Index i = 1;; ++i) {
      if (v.vv <= 1e-24 * std::max(1.0, sq_diam)) {
        rep.flag("origin-in-hull");
        break;
      }
      e_estimate = sq_diam / v.vv;
      const Index z = params.z > 0 ? params.z : std::min(cap, epsilon_rounds(e_estimate, params.epsilon));
      const Direction u = v.direction();

      double size;
      Index pick;
      if (sublinear) {
        if (gamma > 0.0) {
          size = generalized_sandwich(fam, u, gamma, dp, eta2, rr, params.c3, &rep.log).size;
        } else {
          const auto ev = fam.bind(u);
          size = HalfSpaceFamily::Evaluator::touch(sampled_quantile(ev, n, quantile_sample, dp, rr, &rep.log));
        }
        pick = generalized_uniform_adaptive(fam, u, gamma, dp, params.eta1, rr, params.c2, &rep.log).index;
      } else {
        const RankResult rank = generalized_rank(fam, u, t, &rep.log);
        size = rank.l;
        pick = rank.Q.empty() ? rank.witness
                              : rank.Q[static_cast<std::size_t>(rr.index(static_cast<Index>(rank.Q.size())))];
      }
      ++rounds_total;
      const double margin = std::isfinite(size) && size > 0.0 ? 1.0 / size : 0.0;
      if (margin > out.shape.margin) {
        out.shape.normal = u;
        out.shape.margin = margin;
        improved = true;
      }
      if (i >= z) break;

      // Gilbert step toward phi(p).
      const double vm = v.proj(P, pick);
      double nv;
      const double alpha = segment_step(v.vv, vm, kernel.self(P, pick), &nv);
      if (alpha == 0.0) continue;
      v.scale(1.0 - alpha);
      v.append(P.row(pick), alpha);
      v.vv = nv;
    }
    if (improved) out.shape.v_norm = std::sqrt(v.vv);
  }

  out.shape.infeasible = !(out.shape.margin > 0.0);
  if (out.shape.infeasible) rep.flag("infeasible");
  rep.params["epsilon"] = params.epsilon;
  rep.params["delta"] = params.delta;
  rep.params["gamma"] = gamma;
  rep.params["eta1"] = params.eta1;
  rep.params["e_estimate"] = e_estimate;
  rep.params["margin"] = out.shape.margin;
  if (sublinear) rep.params["eta2"] = eta2;
  rep.counts["repetitions"] = N;
  rep.counts["max_rounds"] = cap;
  rep.counts["candidates"] = rounds_total;
  if (!sublinear) rep.counts["t"] = t;
  if (!out.shape.infeasible)
    rep.coverage = count_covered(fam, out.shape.normal, out.shape.size(), sublinear ? &rep.verify_log : nullptr);
  rep.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return out;
}

TwoClassResult svm_two_class_outliers(const PointSet& P1, const PointSet& P2, double gamma1, double gamma2,
                                      const BiCriteriaParams& params, RngStream& rng, const Kernel& kernel,
                                      bool sublinear, const SvmParams& sparams) {
  if (P1.n() < 1 || P2.n() < 1) throw std::invalid_argument("svm_two_class: both classes must be nonempty");
  if (P1.d() != P2.d()) throw std::invalid_argument("svm_two_class: dimension mismatch");
  check_common(params);
  const double delta = params.delta;
  for (double g : {gamma1, gamma2}) {
    if (g < 0.0 || g + delta >= 1.0) throw std::invalid_argument("svm_two_class: need 0 <= gamma_c < 1 - delta");
    if (sublinear && g > 0.0 && !(delta < g / 3.0))
      throw std::invalid_argument("svm_two_class: requires delta < gamma_c/3");
  }
  const auto start = Clock::now();
  const Index N = resolve_repetitions(params, sparams);
  const Index cap = params.z > 0 ? params.z : sparams.max_rounds;
  const double eta2 = params.eta2 > 0.0 ? params.eta2 : 1.0 / (2.0 * static_cast<double>(cap) * static_cast<double>(N));
  const Index quantile_sample = ceil_count(params.c3 / delta * std::log(1.0 / eta2));
  const Index t1 = std::min(ceil_count((delta + gamma1) * static_cast<double>(P1.n())), P1.n() - 1);
  const Index t2 = std::min(ceil_count((delta + gamma2) * static_cast<double>(P2.n())), P2.n() - 1);

  TwoClassResult out;
  SolveReport& rep = out.report;
  rep.algorithm = sublinear ? "svm-two-class-sublinear" : "svm-two-class-linear";
  // Class 1 ranks by -<p,u> (its points nearest the other class first), class 2 by +<p,u>.
  const HalfSpaceFamily fam1(P1, kernel, 1.0);
  const HalfSpaceFamily fam2(P2, kernel, -1.0);
  double best = -std::numeric_limits<double>::infinity();
  double e_estimate = 0.0;
  Index rounds_total = 0;

  // Boundary f value for one class: witness f and an update index.
  auto side = [&](const HalfSpaceFamily& fam, const Direction& u, double g, Index t, RngStream& rr) {
    const PointSet& P = fam.points();
    std::pair<double, Index> res;
    if (sublinear) {
      if (g > 0.0) {
        res.first = generalized_sandwich(fam, u, g, delta, eta2, rr, params.c3, &rep.log).witness_f;
      } else {
        res.first = sampled_quantile(fam.bind(u), P.n(), quantile_sample, delta, rr, &rep.log);
      }
      res.second = generalized_uniform_adaptive(fam, u, g, delta, params.eta1, rr, params.c2, &rep.log).index;
    } else {
      const RankResult rank = generalized_rank(fam, u, t, &rep.log);
      res.first = rank.witness_f;
      res.second = rank.Q.empty() ? rank.witness
                                  : rank.Q[static_cast<std::size_t>(rr.index(static_cast<Index>(rank.Q.size())))];
    }
    return res;
  };

  for (Index r = 0; r < N; ++r) {
    RngStream rr = rng.child(static_cast<std::uint64_t>(r));
    const double sq_diam = std::pow(std::sqrt(sampled_sq_diameter(P1, kernel, &rr)) +
                                        std::sqrt(sampled_sq_diameter(P2, kernel, &rr)),
                                    2.0);
    rep.log.sampled(std::min<Index>(64, P1.n()) + std::min<Index>(64, P2.n()));
    Expansion v{kernel, {}, {}, Vector::Zero(P1.d()), 0.0};
    const Index a = rr.index(P1.n());
    const Index b = rr.index(P2.n());
    rep.log.sampled(2);
    const Vector pa = P1.row(a);
    const Vector pb = P2.row(b);
    v.append(pa, 1.0);
    v.append(pb, -1.0);
    v.vv = kernel.self(P1, a) + kernel.self(P2, b) - 2.0 * kernel.eval(pa, pb);
    bool improved = false;

    for (Index i = 1;; ++i) {
      if (v.vv <= 1e-24 * std::max(1.0, sq_diam)) {
        rep.flag("origin-in-hull");
        break;
      }
      e_estimate = sq_diam / v.vv;
      const Index z = params.z > 0 ? params.z : std::min(cap, epsilon_rounds(e_estimate, params.epsilon));
      const Direction u = v.direction();
      const auto [f1, q1] = side(fam1, u, gamma1, t1, rr);
      const auto [f2, q2] = side(fam2, u, gamma2, t2, rr);
      ++rounds_total;
      const double upper = -f1;
      const double lower = f2;
      if (upper - lower > best) {
        best = upper - lower;
        out.shape.normal = u;
        out.shape.upper = upper;
        out.shape.lower = lower;
        improved = true;
      }
      if (i >= z) break;

      // Gilbert step toward phi(p1) - phi(p2).
      const Vector x1 = P1.row(q1);
      const Vector x2 = P2.row(q2);
      const double vm = v.proj(P1, q1) - v.proj(P2, q2);
      const double mm = kernel.self(P1, q1) + kernel.self(P2, q2) - 2.0 * kernel.eval(x1, x2);
      double nv;
      const double alpha = segment_step(v.vv, vm, mm, &nv);
      if (alpha == 0.0) continue;
      v.scale(1.0 - alpha);
      v.append(x1, alpha);
      v.append(x2, -alpha);
      v.vv = nv;
    }
    if (improved) out.shape.v_norm = std::sqrt(v.vv);
  }

  out.shape.infeasible = !(best > 0.0);
  if (out.shape.infeasible) rep.flag("infeasible");
  rep.params["epsilon"] = params.epsilon;
  rep.params["delta"] = delta;
  rep.params["gamma1"] = gamma1;
  rep.params["gamma2"] = gamma2;
  rep.params["eta1"] = params.eta1;
  rep.params["e_estimate"] = e_estimate;
  rep.params["width"] = best;
  if (sublinear) rep.params["eta2"] = eta2;
  rep.counts["repetitions"] = N;
  rep.counts["max_rounds"] = cap;
  rep.counts["candidates"] = rounds_total;
  if (!sublinear) {
    rep.counts["t1"] = t1;
    rep.counts["t2"] = t2;
  }
  if (!out.shape.infeasible) {
    AccessLog* vlog = sublinear ? &rep.verify_log : nullptr;
    const auto ev1 = fam1.bind(out.shape.normal);
    const auto ev2 = fam2.bind(out.shape.normal);
    Index covered1 = 0;
    Index covered2 = 0;
    for (Index i = 0; i < P1.n(); ++i) covered1 += -ev1.f(i) >= out.shape.upper ? 1 : 0;
    for (Index i = 0; i < P2.n(); ++i) covered2 += ev2.f(i) <= out.shape.lower ? 1 : 0;
    if (vlog) {
      vlog->pass(P1.n());
      vlog->pass(P2.n());
    }
    rep.coverage = covered1 + covered2;
    rep.counts["covered1"] = covered1;
    rep.counts["covered2"] = covered2;
  }
  rep.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return out;
}

}  // namespace geosub
