#include "geosub/meb_outliers.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace geosub {

RankResult farthest_t(const PointSet& P, const Center& o, Index t, const Kernel& kernel, AccessLog* log) {
  return generalized_rank(BallFamily(P, kernel), o, t, log);
}

AdaptiveResult uniform_adaptive(const PointSet& P, const Center& o, double gamma, double delta, double eta1,
                                RngStream& rng, const Kernel& kernel, double c2, AccessLog* log) {
  return generalized_uniform_adaptive(BallFamily(P, kernel), o, gamma, delta, eta1, rng, c2, log);
}

SandwichResult sandwich_estimate(const PointSet& P, const Center& o, double gamma, double delta, double eta2,
                                 RngStream& rng, const Kernel& kernel, double c3, AccessLog* log) {
  return generalized_sandwich(BallFamily(P, kernel), o, gamma, delta, eta2, rng, c3, log);
}

Index bicriteria_rounds(const BiCriteriaParams& p) {
  Index z = p.z > 0 ? p.z : ceil_count(2.0 / p.epsilon) + 1;
  if (p.max_rounds > 0) z = std::min(z, p.max_rounds);
  return z;
}

double linear_repetition_schedule(double gamma, double delta, Index z) {
  if (gamma == 0.0) return 1.0;
  return std::ceil(std::pow(1.0 + gamma / delta, static_cast<double>(z)) / (1.0 - gamma));
}

double sublinear_repetition_schedule(double gamma, double delta, double eta1, Index z) {
  const double dp = delta / 5.0;
  const double base = (3.0 + 3.0 * gamma / dp) / (1.0 - eta1);
  return std::ceil(std::pow(base, static_cast<double>(z)) / (1.0 - gamma));
}

namespace {

using Clock = std::chrono::steady_clock;

void check_params(const OutlierInstance& inst, const BiCriteriaParams& p) {
  if (inst.points == nullptr) throw std::invalid_argument("bicriteria: missing point set");
  if (inst.gamma < 0.0 || inst.gamma >= 1.0) throw std::invalid_argument("bicriteria: gamma must be in [0,1)");
  if (!in_open_unit(p.epsilon) || !in_open_unit(p.delta) || !in_open_unit(p.eta1))
    throw std::invalid_argument("bicriteria: epsilon, delta, eta1 must be in (0,1)");
  if (p.delta + inst.gamma >= 1.0) throw std::invalid_argument("bicriteria: delta + gamma must be < 1");
}

Index resolve_repetitions(const BiCriteriaParams& p, double schedule, SolveReport& rep) {
  rep.params["repetition_schedule"] = schedule;
  Index N = p.repetitions > 0 ? p.repetitions : static_cast<Index>(std::min(schedule, 1e15));
  if (p.max_repetitions > 0 && N > p.max_repetitions) {
    N = p.max_repetitions;
    rep.flag("repetitions-capped");
  }
  return std::max<Index>(N, 1);
}

void fill_common(SolveReport& rep, const OutlierInstance& inst, const BiCriteriaParams& p, Index z, Index N) {
  rep.params["epsilon"] = p.epsilon;
  rep.params["delta"] = p.delta;
  rep.params["gamma"] = inst.gamma;
  rep.params["eta1"] = p.eta1;
  rep.params["c2"] = p.c2;
  rep.params["c3"] = p.c3;
  rep.params["max_repetitions"] = static_cast<double>(p.max_repetitions);
  rep.counts["z"] = z;
  rep.counts["repetitions"] = N;
}

}  // namespace

BiCriteriaResult bicriteria_linear(const OutlierInstance& inst, const BiCriteriaParams& params, RngStream& rng,
                                   const Kernel& kernel) {
  check_params(inst, params);
  const auto start = Clock::now();
  const PointSet& P = inst.P();
  const Index n = P.n();
  const Index t = ceil_count((params.delta + inst.gamma) * static_cast<double>(n));
  if (t >= n) throw std::invalid_argument("bicriteria_linear: (delta + gamma) n must be < n");
  const double s = params.epsilon / (2.0 + params.epsilon);
  const double xi = s * params.epsilon / (1.0 + params.epsilon);
  const Index z = bicriteria_rounds(params);

  BiCriteriaResult out;
  SolveReport& rep = out.report;
  rep.algorithm = "outliers-linear";
  const Index N = resolve_repetitions(params, linear_repetition_schedule(inst.gamma, params.delta, z), rep);
  fill_common(rep, inst, params, z, N);
  rep.params["xi"] = xi;
  rep.counts["t"] = t;

  out.best.size_estimate = std::numeric_limits<double>::infinity();
  for (Index r = 0; r < N; ++r) {
    RngStream rr = rng.child(static_cast<std::uint64_t>(r));
    CoreSetSolver solver(P, kernel);
    solver.add(rr.index(n));
    rep.log.sampled(1);
    for (Index i = 1; i <= z; ++i) {
      solver.solve(xi, fw_iteration_cap(xi));
      Candidate cand{solver.center(), 0.0, i, r};
      const RankResult rank = farthest_t(P, cand.center, t, kernel, &rep.log);
      cand.size_estimate = rank.l;
      if (cand.size_estimate < out.best.size_estimate) out.best = cand;
      out.candidates.push_back(cand);
      solver.add(rank.Q[static_cast<std::size_t>(rr.index(static_cast<Index>(rank.Q.size())))]);
    }
  }
  rep.counts["candidates"] = static_cast<std::int64_t>(out.candidates.size());
  out.ball = {out.best.center, out.best.size_estimate};
  rep.coverage = count_covered(BallFamily(P, kernel), out.ball.center, out.ball.radius);
  rep.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return out;
}

BiCriteriaResult bicriteria_sublinear(const OutlierInstance& inst, const BiCriteriaParams& params, RngStream& rng,
                                      const Kernel& kernel) {
  check_params(inst, params);
  const auto start = Clock::now();
  const PointSet& P = inst.P();
  const double gamma = inst.gamma;
  const double dp = params.delta / 5.0;
  if (params.estimate_sizes && gamma > 0.0 && !(dp < gamma / 3.0))
    throw std::invalid_argument("bicriteria_sublinear: requires delta/5 < gamma/3");
  const double s = params.epsilon / (2.0 + params.epsilon);
  const double xi = s * params.epsilon / (1.0 + params.epsilon);
  const Index z = bicriteria_rounds(params);

  BiCriteriaResult out;
  SolveReport& rep = out.report;
  rep.algorithm = "outliers-sublinear";
  const Index N = resolve_repetitions(params, sublinear_repetition_schedule(gamma, params.delta, params.eta1, z), rep);
  fill_common(rep, inst, params, z, N);
  const double eta2 = params.eta2 > 0.0 ? params.eta2 : 1.0 / (static_cast<double>(z) * static_cast<double>(N));
  rep.params["eta2"] = eta2;
  rep.params["xi"] = xi;
  rep.counts["n_prime"] = adaptive_sample_size(dp, params.eta1, params.c2);
  rep.counts["t_prime"] = adaptive_top_size(gamma, dp, rep.counts["n_prime"]);
  if (params.estimate_sizes) {
    if (gamma > 0.0) {
      rep.counts["n_double_prime"] = sandwich_sample_size(gamma, dp, eta2, params.c3);
      rep.counts["t_double_prime"] = sandwich_rank(gamma, dp, rep.counts["n_double_prime"]);
    } else {
      // Without outliers the estimate is a plain upper quantile of the sample.
      rep.counts["n_double_prime"] = ceil_count(params.c3 / dp * std::log(1.0 / eta2));
      rep.counts["t_double_prime"] = ceil_count(dp * static_cast<double>(rep.counts["n_double_prime"]));
      rep.flag("gamma-zero-quantile-estimate");
    }
  }

  const BallFamily fam(P, kernel);
  out.best.size_estimate = std::numeric_limits<double>::infinity();
  for (Index r = 0; r < N; ++r) {
    RngStream rr = rng.child(static_cast<std::uint64_t>(r));
    CoreSetSolver solver(P, kernel);
    solver.add(rr.index(P.n()));
    rep.log.sampled(1);
    for (Index i = 1; i <= z; ++i) {
      solver.solve(xi, fw_iteration_cap(xi));
      Candidate cand{solver.center(), std::numeric_limits<double>::quiet_NaN(), i, r};
      const AdaptiveResult pick = generalized_uniform_adaptive(fam, cand.center, gamma, dp, params.eta1, rr,
                                                               params.c2, &rep.log);
      if (params.estimate_sizes) {
        if (gamma > 0.0) {
          cand.size_estimate = generalized_sandwich(fam, cand.center, gamma, dp, eta2, rr, params.c3, &rep.log).size;
        } else {
          const Index m = rep.counts["n_double_prime"];
          const Index rank = std::min<Index>(rep.counts["t_double_prime"], m - 1);
          const auto ev = fam.bind(cand.center);
          std::vector<double> dist(static_cast<std::size_t>(m));
          for (auto& v : dist) v = ev.f(rr.index(P.n()));
          rep.log.sampled(m);
          std::nth_element(dist.begin(), dist.begin() + rank, dist.end(), std::greater<>());
          cand.size_estimate = dist[static_cast<std::size_t>(rank)];
        }
        if (cand.size_estimate < out.best.size_estimate) out.best = cand;
      }
      out.candidates.push_back(cand);
      solver.add(pick.index);
    }
  }
  rep.counts["candidates"] = static_cast<std::int64_t>(out.candidates.size());
  if (!params.estimate_sizes) out.best = out.candidates.back();
  out.ball = {out.best.center, out.best.size_estimate};
  if (params.verify_scan && params.estimate_sizes)
    rep.coverage = count_covered(fam, out.ball.center, out.ball.radius, &rep.verify_log);
  rep.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return out;
}

}  // namespace geosub
