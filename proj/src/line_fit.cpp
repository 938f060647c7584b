#include "geosub/mex.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace geosub {

Index line_fit_rounds(const BiCriteriaParams& params) {
  if (params.z > 0) return params.z;
  const double e = params.epsilon;
  return std::min<Index>(50, std::max<Index>(1, ceil_count(std::log(1.0 / e) / (e * e * e))));
}

namespace {

using Clock = std::chrono::steady_clock;

Line through(const Vector& a, const Vector& b) {
  Vector dir = b - a;
  const double len = dir.norm();
  if (len == 0.0) {
    dir = Vector::Zero(a.size());
    dir(0) = 1.0;
  } else {
    dir /= len;
  }
  return {a, dir};
}

}  // namespace

LineFitResult line_fit_outliers(const OutlierInstance& inst, const BiCriteriaParams& params, Index candidate_budget,
                                RngStream& rng) {
  if (inst.points == nullptr) throw std::invalid_argument("line_fit: missing point set");
  const PointSet& P = inst.P();
  if (P.d() < 2) throw std::invalid_argument("line_fit: requires d >= 2");
  if (inst.gamma < 0.0 || inst.gamma >= 1.0) throw std::invalid_argument("line_fit: gamma must be in [0,1)");
  if (!in_open_unit(params.epsilon) || !in_open_unit(params.delta))
    throw std::invalid_argument("line_fit: epsilon and delta must be in (0,1)");
  if (candidate_budget < 1) throw std::invalid_argument("line_fit: candidate_budget must be >= 1");
  const auto start = Clock::now();
  const Index n = P.n();
  const Index nu = line_fit_rounds(params);
  const double delta0 = params.delta / static_cast<double>(nu + 1);
  const Index t = ceil_count((params.delta + inst.gamma) * static_cast<double>(n));
  const Index t0 = std::max<Index>(1, ceil_count((delta0 + inst.gamma) * static_cast<double>(n)));
  if (t >= n) throw std::invalid_argument("line_fit: (delta + gamma) n must be < n");

  // Candidate grid: m offsets at each of two stations along the current line.
  const Index m = std::max<Index>(2, static_cast<Index>(std::floor(std::sqrt(static_cast<double>(candidate_budget)))));
  Index N = params.repetitions > 0 ? params.repetitions : std::min<Index>(20, params.max_repetitions);
  N = std::max<Index>(N, 1);

  LineFitResult out;
  SolveReport& rep = out.report;
  rep.algorithm = "line-fit";
  const SlabFamily fam(P);
  double best = std::numeric_limits<double>::infinity();
  Index candidates = 0;

  auto score = [&](const Line& l) {
    ++candidates;
    const double w = generalized_rank(fam, l, t, &rep.log).l;
    if (w < best) {
      best = w;
      out.slab = {l, w};
    }
    return w;
  };

  for (Index r = 0; r < N; ++r) {
    RngStream rr = rng.child(static_cast<std::uint64_t>(r));
    const Index p_delta = rr.index(n);
    rep.log.sampled(1);
    const RankResult far = farthest_t(P, Center::at_index(p_delta), t0, Kernel::linear(), &rep.log);
    const Index q_delta = far.Q[static_cast<std::size_t>(rr.index(static_cast<Index>(far.Q.size())))];
    Line line = through(P.row(p_delta), P.row(q_delta));
    score(line);

    for (Index i = 1; i <= nu; ++i) {
      const RankResult q0 = generalized_rank(fam, line, t0, &rep.log);
      const Vector p = P.row(q0.Q[static_cast<std::size_t>(rr.index(static_cast<Index>(q0.Q.size())))]);
      const Vector& u = line.direction;
      Vector w = (p - line.anchor) - (p - line.anchor).dot(u) * u;
      const double rp = w.norm();
      if (rp <= 1e-12 * std::max(1.0, p.norm())) break;
      w /= rp;

      // Stations at the extent of the points the current line keeps.
      double extent = 0.0;
      std::size_t qk = 0;
      for (Index j = 0; j < n; ++j) {
        if (qk < q0.Q.size() && q0.Q[qk] == j) {
          ++qk;
          continue;
        }
        extent = std::max(extent, std::abs(P.dot(j, u) - line.anchor.dot(u)));
      }
      rep.log.pass(n);
      extent = std::max(extent, rp);

      Line next = line;
      double next_w = std::numeric_limits<double>::infinity();
      for (Index a = 0; a < m; ++a) {
        for (Index b = 0; b < m; ++b) {
          const double ya = rp * static_cast<double>(a) / static_cast<double>(m - 1);
          const double yb = rp * static_cast<double>(b) / static_cast<double>(m - 1);
          const Line cand = through(line.anchor - extent * u + ya * w, line.anchor + extent * u + yb * w);
          const double cw = score(cand);
          if (cw < next_w) {
            next_w = cw;
            next = cand;
          }
        }
      }
      line = next;
    }
  }

  rep.params["epsilon"] = params.epsilon;
  rep.params["delta"] = params.delta;
  rep.params["gamma"] = inst.gamma;
  rep.params["delta0"] = delta0;
  rep.counts["nu"] = nu;
  rep.counts["t"] = t;
  rep.counts["t0"] = t0;
  rep.counts["candidate_budget"] = m * m;
  rep.counts["repetitions"] = N;
  rep.counts["candidates"] = candidates;
  rep.coverage = count_covered(fam, out.slab.line, out.slab.width);
  rep.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return out;
}

}  // namespace geosub
