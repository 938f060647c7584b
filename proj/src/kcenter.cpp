#include "geosub/mex.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>

namespace geosub {

double kcenter_enumeration_budget(Index k, double epsilon) {
  return std::pow(static_cast<double>(k), static_cast<double>(kcenter_branch_additions(k, epsilon)));
}

Index kcenter_branch_additions(Index k, double epsilon) { return k * (ceil_count(2.0 / epsilon) + 1); }

namespace {

using Clock = std::chrono::steady_clock;

struct Node {
  std::vector<CoreSetSolver> clusters;  // one per non-empty cluster, in creation order
  Index added = 0;
};

struct Search {
  const PointSet* P;
  Index k;
  Index max_added;
  Index t;
  double xi;
  double gamma;
  double dp;
  double eta1;
  double eta2;
  double c2;
  double c3;
  Index quantile_sample;
  bool sublinear;
  SolveReport* rep;
  KBallUnion best;
  Index nodes = 0;

  std::vector<Vector> centers(const Node& node) const {
    std::vector<Vector> out;
    for (const auto& s : node.clusters) out.push_back(materialize(*P, s.center()));
    return out;
  }

  double score(const KBallFamily& fam, const std::vector<Vector>& c, RngStream& rr, RankResult* rank) {
    if (!sublinear) {
      *rank = generalized_rank(fam, c, t, &rep->log);
      return rank->l;
    }
    if (gamma > 0.0) return generalized_sandwich(fam, c, gamma, dp, eta2, rr, c3, &rep->log).size;
    const auto ev = fam.bind(c);
    std::vector<double> f(static_cast<std::size_t>(quantile_sample));
    for (auto& v : f) v = ev.f(rr.index(P->n()));
    rep->log.sampled(quantile_sample);
    const Index r = std::min<Index>(ceil_count(dp * static_cast<double>(quantile_sample)), quantile_sample - 1);
    std::nth_element(f.begin(), f.begin() + r, f.end(), std::greater<>());
    return f[static_cast<std::size_t>(r)];
  }

  // `rr` continues into the first child so that k = 1 is one uninterrupted stream.
  void visit(Node& node, RngStream rr) {
    ++nodes;
    const KBallFamily fam(*P);
    const std::vector<Vector> c = centers(node);
    RankResult rank;
    const double l = score(fam, c, rr, &rank);
    if (l < best.radius) best = {c, l};
    if (node.added >= max_added) return;

    Index q;
    if (sublinear) {
      q = generalized_uniform_adaptive(fam, c, gamma, dp, eta1, rr, c2, &rep->log).index;
    } else {
      q = rank.Q[static_cast<std::size_t>(rr.index(static_cast<Index>(rank.Q.size())))];
    }

    const Index existing = static_cast<Index>(node.clusters.size());
    // Empty clusters are interchangeable, so only the first one is tried.
    const Index branches = std::min(k, existing + 1);
    for (Index j = 0; j < branches; ++j) {
      Node child = node;
      child.added += 1;
      if (j == existing) {
        child.clusters.emplace_back(*P, Kernel::linear());
        child.clusters.back().add(q);
      } else {
        child.clusters[static_cast<std::size_t>(j)].add(q);  // a repeat leaves T_j unchanged
      }
      child.clusters[static_cast<std::size_t>(j)].solve(xi, fw_iteration_cap(xi));
      visit(child, j == 0 ? rr : rr.child(static_cast<std::uint64_t>(j)));
    }
  }
};

}  // namespace

KCenterResult kcenter_outliers(const OutlierInstance& inst, Index k, const BiCriteriaParams& params, RngStream& rng,
                               bool sublinear, const KCenterParams& kparams) {
  if (inst.points == nullptr) throw std::invalid_argument("kcenter: missing point set");
  if (k < 1) throw std::invalid_argument("kcenter: k must be >= 1");
  if (inst.gamma < 0.0 || inst.gamma >= 1.0) throw std::invalid_argument("kcenter: gamma must be in [0,1)");
  if (!in_open_unit(params.epsilon) || !in_open_unit(params.delta) || !in_open_unit(params.eta1))
    throw std::invalid_argument("kcenter: epsilon, delta, eta1 must be in (0,1)");
  const auto start = Clock::now();
  const PointSet& P = inst.P();
  const Index n = P.n();

  const double budget = kcenter_enumeration_budget(k, params.epsilon);
  if (!(budget <= kparams.enumeration_cap))
    throw Refusal("kcenter: enumeration budget k^(k(ceil(2/eps)+1)) = " + std::to_string(budget) +
                  " exceeds the cap " + std::to_string(kparams.enumeration_cap));

  KCenterResult out;
  SolveReport& rep = out.report;
  rep.algorithm = sublinear ? "kcenter-sublinear" : "kcenter-linear";

  const double s = params.epsilon / (2.0 + params.epsilon);
  const Index z = bicriteria_rounds(params);
  Search search{};
  search.P = &P;
  search.k = k;
  search.max_added = k * z;
  search.t = ceil_count((params.delta + inst.gamma) * static_cast<double>(n));
  search.xi = s * params.epsilon / (1.0 + params.epsilon);
  search.gamma = inst.gamma;
  search.dp = params.delta / 5.0;
  search.eta1 = params.eta1;
  search.c2 = params.c2;
  search.c3 = params.c3;
  search.sublinear = sublinear;
  search.rep = &rep;
  search.best.radius = std::numeric_limits<double>::infinity();
  if (!sublinear && search.t >= n) throw std::invalid_argument("kcenter: (delta + gamma) n must be < n");
  if (sublinear && inst.gamma > 0.0 && !(search.dp < inst.gamma / 3.0))
    throw std::invalid_argument("kcenter: requires delta/5 < gamma/3");

  const double schedule = sublinear ? sublinear_repetition_schedule(inst.gamma, params.delta, params.eta1, search.max_added)
                                    : linear_repetition_schedule(inst.gamma, params.delta, search.max_added);
  rep.params["repetition_schedule"] = schedule;
  Index N = params.repetitions > 0 ? params.repetitions : static_cast<Index>(std::min(schedule, 1e15));
  if (params.max_repetitions > 0 && N > params.max_repetitions) {
    N = params.max_repetitions;
    rep.flag("repetitions-capped");
  }
  N = std::max<Index>(N, 1);
  search.eta2 = params.eta2 > 0.0 ? params.eta2 : 1.0 / (std::min(budget, 1e6) * static_cast<double>(N));
  search.quantile_sample = ceil_count(params.c3 / search.dp * std::log(1.0 / search.eta2));
  if (sublinear && inst.gamma == 0.0) rep.flag("gamma-zero-quantile-estimate");

  for (Index r = 0; r < N; ++r) {
    RngStream rr = rng.child(static_cast<std::uint64_t>(r));
    Node root;
    root.clusters.emplace_back(P, Kernel::linear());
    root.clusters.back().add(rr.index(n));
    root.added = 1;
    rep.log.sampled(1);
    root.clusters.back().solve(search.xi, fw_iteration_cap(search.xi));
    search.visit(root, rr);
  }

  out.shape = search.best;
  rep.params["epsilon"] = params.epsilon;
  rep.params["delta"] = params.delta;
  rep.params["gamma"] = inst.gamma;
  rep.params["eta1"] = params.eta1;
  rep.params["xi"] = search.xi;
  rep.params["enumeration_budget"] = budget;
  rep.params["enumeration_cap"] = kparams.enumeration_cap;
  if (sublinear) rep.params["eta2"] = search.eta2;
  rep.counts["k"] = k;
  rep.counts["z"] = z;
  rep.counts["branch_additions"] = search.max_added;
  rep.counts["repetitions"] = N;
  rep.counts["nodes"] = search.nodes;
  rep.counts["candidates"] = search.nodes;
  if (!sublinear) rep.counts["t"] = search.t;
  const KBallFamily fam(P);
  rep.coverage = count_covered(fam, out.shape.centers, out.shape.radius, sublinear ? &rep.verify_log : nullptr);
  rep.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return out;
}

}  // namespace geosub
