#include "geosub/hybrid.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

namespace geosub {

std::string to_string(HybridLabel label) {
  return label == HybridLabel::radius_approx ? "radius-approx" : "covering-approx";
}

std::string StabilityBound::text() const {
  std::ostringstream os;
  os << (upper ? "alpha < " : "alpha > ") << value;
  return os.str();
}

double hybrid_meb_threshold(double epsilon) { return (1.0 + epsilon) / (1.0 - epsilon * epsilon / 2.0); }

double outlier_radius_coefficient() {
  const double c = 2.0 * std::numbers::sqrt2 + std::numbers::sqrt3;
  return 1.0 / (2.0 * c * c);
}

double hybrid_outliers_threshold(double epsilon) {
  return (1.0 + epsilon) / (1.0 - epsilon * epsilon * outlier_radius_coefficient());
}

HybridLabel hybrid_label(double radius_candidate, double covering_candidate, double threshold, double* ratio) {
  double q;
  if (covering_candidate > 0.0) {
    q = radius_candidate / covering_candidate;
  } else {
    q = radius_candidate > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  if (ratio) *ratio = q;
  return q <= threshold ? HybridLabel::radius_approx : HybridLabel::covering_approx;
}

namespace {

using Clock = std::chrono::steady_clock;

void check(const HybridParams& p) {
  if (!in_open_unit(p.epsilon) || !in_open_unit(p.delta) || !in_open_unit(p.eta0) || !in_open_unit(p.eta1))
    throw std::invalid_argument("hybrid: epsilon, delta, eta0, eta1 must be in (0,1)");
}

}  // namespace

HybridResult hybrid_meb(const PointSet& P, const HybridParams& params, RngStream& rng, const Kernel& kernel) {
  check(params);
  const auto start = Clock::now();
  const double eps = params.epsilon;
  HybridResult out;
  out.epsilon = eps;
  SolveReport& rep = out.report;
  rep.algorithm = "hybrid-meb";

  // Bi-criteria (1 + eps^2/2, 1 - delta/2) ball on (P, gamma = delta/2).
  OutlierInstance inst{&P, params.delta / 2.0, nullptr};
  BiCriteriaParams bc;
  bc.epsilon = eps * eps / 2.0;
  bc.delta = params.delta / 2.0;
  bc.eta1 = params.eta1;
  bc.max_repetitions = params.max_repetitions;
  bc.max_rounds = params.max_rounds;
  bc.c2 = params.c2;
  bc.c3 = params.c3;
  bc.verify_scan = false;
  RngStream bc_rng = rng.child(1);
  const BiCriteriaResult covering = bicriteria_sublinear(inst, bc, bc_rng, kernel);
  rep.log.merge(covering.report.log);
  for (const auto& [k, v] : covering.report.counts) rep.counts["bc_" + k] = v;
  for (const auto& f : covering.report.flags) rep.flag("bc:" + f);

  // Center under the (eps^2, delta/2)-stability assumption.
  StabilityParams sp{eps, params.delta / 2.0, params.eta0, 1.0};
  RngStream alg2_rng = rng.child(2);
  const Alg2Result stable = meb_alg2(P, sp, alg2_rng, kernel);
  rep.log.merge(stable.log);
  for (const auto& f : stable.flags) rep.flag("alg2:" + f);
  rep.counts["alg2_grid_length"] = stable.grid_length;

  // The single full pass.
  const auto [far_idx, r_o] = farthest_point(P, stable.ball.center, kernel, &rep.log);
  (void)far_idx;
  out.radius_ball = {stable.ball.center, r_o};
  out.covering_ball = covering.ball;
  out.radius_candidate = r_o;
  out.covering_candidate = covering.ball.radius;
  out.threshold = hybrid_meb_threshold(eps);
  out.label = hybrid_label(r_o, covering.ball.radius, out.threshold, &out.ratio);
  out.ball = out.label == HybridLabel::radius_approx ? out.radius_ball : out.covering_ball;
  out.stability_inference = infer_stability(out, eps);

  rep.params["epsilon"] = eps;
  rep.params["delta"] = params.delta;
  rep.params["eta0"] = params.eta0;
  rep.params["eta1"] = params.eta1;
  rep.params["threshold"] = out.threshold;
  rep.params["ratio"] = out.ratio;
  rep.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return out;
}

StabilityBound infer_stability(const HybridResult& result, double epsilon) {
  if (std::abs(result.epsilon - epsilon) > 1e-15) throw std::invalid_argument("infer_stability: epsilon mismatch");
  if (result.label == HybridLabel::radius_approx) return {true, epsilon};
  const double e2 = epsilon * epsilon;
  return {false, result.outliers_variant ? e2 * outlier_radius_coefficient() : e2 / 2.0};
}

OutlierRadii candidate_radii(const PointSet& P, const std::vector<Center>& centers, double gamma, double delta,
                             const Kernel& kernel, AccessLog* log) {
  const Index n = P.n();
  const Index m1 = ceil_count((1.0 - gamma) * static_cast<double>(n));
  const Index m2 = std::max<Index>(1, ceil_count((1.0 - delta - gamma) * static_cast<double>(n)));
  // The k-th smallest of n values is the (n - k + 1)-th largest.
  const Index rank1 = n - m1 + 1;
  const Index rank2 = n - m2 + 1;
  const Index keep = std::max(rank1, rank2);
  const std::size_t C = centers.size();
  OutlierRadii out;
  out.heap_size = keep;
  using MinHeap = std::priority_queue<double, std::vector<double>, std::greater<>>;
  std::vector<MinHeap> heaps(C);
  auto push = [&](std::size_t c, double v) {
    MinHeap& h = heaps[c];
    if (static_cast<Index>(h.size()) < keep) {
      h.push(v);
    } else if (v > h.top()) {
      h.pop();
      h.push(v);
    }
  };

  // Distances go through CenterDistance (direct |p - c| on dense data) so the
  // order statistics agree exactly with any later coverage count.
  std::vector<CenterDistance> dist;
  for (const Center& c : centers) dist.emplace_back(P, c, kernel);
  for (Index i = 0; i < n; ++i)
    for (std::size_t c = 0; c < C; ++c) push(c, dist[c](i));
  if (log) log->pass(n);

  out.r.resize(C);
  out.r_prime.resize(C);
  for (std::size_t c = 0; c < C; ++c) {
    std::vector<double> top;
    while (!heaps[c].empty()) {
      top.push_back(heaps[c].top());
      heaps[c].pop();
    }
    // top is ascending; the j-th largest sits at size - j.
    out.r[c] = top[top.size() - static_cast<std::size_t>(rank1)];
    out.r_prime[c] = top[top.size() - static_cast<std::size_t>(rank2)];
  }
  return out;
}

HybridResult hybrid_meb_outliers(const OutlierInstance& inst, const HybridParams& params, RngStream& rng,
                                 const Kernel& kernel) {
  check(params);
  if (inst.gamma + params.delta >= 1.0) throw std::invalid_argument("hybrid_meb_outliers: delta + gamma must be < 1");
  const auto start = Clock::now();
  const PointSet& P = inst.P();
  const double eps = params.epsilon;
  HybridResult out;
  out.epsilon = eps;
  out.outliers_variant = true;
  SolveReport& rep = out.report;
  rep.algorithm = "hybrid-outliers";

  BiCriteriaParams bc;
  bc.epsilon = eps * eps * outlier_radius_coefficient();
  bc.delta = params.delta;
  bc.eta1 = params.eta1;
  bc.max_repetitions = params.max_repetitions;
  bc.max_rounds = params.max_rounds;
  bc.c2 = params.c2;
  bc.c3 = params.c3;
  bc.verify_scan = false;
  bc.estimate_sizes = false;
  RngStream bc_rng = rng.child(1);
  const BiCriteriaResult gen = bicriteria_sublinear(inst, bc, bc_rng, kernel);
  rep.log.merge(gen.report.log);
  for (const auto& [k, v] : gen.report.counts) rep.counts["bc_" + k] = v;
  for (const auto& f : gen.report.flags) rep.flag("bc:" + f);

  std::vector<Center> xi;
  for (const Candidate& c : gen.candidates) xi.push_back(c.center);
  const OutlierRadii radii = candidate_radii(P, xi, inst.gamma, params.delta, kernel, &rep.log);
  rep.counts["candidates"] = static_cast<std::int64_t>(xi.size());
  rep.counts["heap_size"] = radii.heap_size;

  std::size_t s1 = 0;
  std::size_t s2 = 0;
  for (std::size_t c = 1; c < xi.size(); ++c) {
    if (radii.r[c] < radii.r[s1]) s1 = c;
    if (radii.r_prime[c] < radii.r_prime[s2]) s2 = c;
  }
  out.radius_ball = {xi[s1], radii.r[s1]};
  out.covering_ball = {xi[s2], radii.r_prime[s2]};
  out.radius_candidate = radii.r[s1];
  out.covering_candidate = radii.r_prime[s2];
  out.threshold = hybrid_outliers_threshold(eps);
  out.label = hybrid_label(out.radius_candidate, out.covering_candidate, out.threshold, &out.ratio);
  out.ball = out.label == HybridLabel::radius_approx ? out.radius_ball : out.covering_ball;
  out.stability_inference = infer_stability(out, eps);

  rep.params["epsilon"] = eps;
  rep.params["delta"] = params.delta;
  rep.params["gamma"] = inst.gamma;
  rep.params["eta1"] = params.eta1;
  rep.params["threshold"] = out.threshold;
  rep.params["ratio"] = out.ratio;
  rep.params["radius_error"] = bc.epsilon;
  rep.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return out;
}

}  // namespace geosub
