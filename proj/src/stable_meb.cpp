#include "geosub/stable_meb.hpp"

#include <cmath>
#include <numbers>

namespace geosub {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kSqrt3 = std::numbers::sqrt3;

void check(const StabilityParams& p) {
  if (!in_open_unit(p.epsilon) || !in_open_unit(p.beta0) || !in_open_unit(p.eta))
    throw std::invalid_argument("stability parameters must lie in (0,1)");
}

}  // namespace

RadiusInterval radius_range(const PointSet& P, const StabilityParams& params, RngStream& rng, const Kernel& kernel,
                            AccessLog* log) {
  check(params);
  RadiusInterval out;
  if (P.n() < 2) {
    out.degenerate = true;
    return out;
  }
  const Index p1 = rng.index(P.n());
  out.sample_size = ceil_count(std::log(1.0 / params.eta) / params.beta0);
  double far = 0.0;
  for (Index k = 0; k < out.sample_size; ++k) {
    const Index j = rng.index(P.n());
    const double d2 = kernel.is_linear()
                          ? P.sq_distance(p1, j)
                          : kernel.self(P, p1) + kernel.self(P, j) - 2.0 * kernel.eval(P, p1, j);
    far = std::max(far, std::sqrt(std::max(0.0, d2)));
  }
  if (log) log->sampled(out.sample_size + 1);
  out.a = 0.5 * far;
  out.b = far / (1.0 - params.epsilon * params.epsilon);
  out.degenerate = far == 0.0;
  return out;
}

double alg1_expansion(double epsilon) {
  return (1.0 + (2.0 * kSqrt2 + kSqrt3) * epsilon) / (1.0 - epsilon * epsilon);
}

double alg1_lambda(double epsilon) { return alg1_expansion(epsilon) * (1.0 + epsilon * epsilon); }

Index alg1_sample_size(Index d, const StabilityParams& p) {
  const double dd = static_cast<double>(d);
  const double inner = std::max(std::log(1.0 / p.eta), dd * std::log(dd / p.beta0));
  return ceil_count(p.c1 / p.beta0 * inner);
}

Alg1Result meb_alg1(const PointSet& P, const StabilityParams& params, RngStream& rng, const Kernel& kernel) {
  check(params);
  Alg1Result out;
  out.sample = uniform_sample(P, alg1_sample_size(P.d(), params), rng);
  out.log.sampled(static_cast<Index>(out.sample.size()));
  const PointSet S = P.subset(out.sample);
  auto [ball, state] = badoiu_clarkson(S, params.epsilon * params.epsilon, 1.0 / 3.0, kernel);
  out.sample_radius = ball.radius;
  // Re-express the center as a combination over indices of P.
  const Center& c = ball.center;
  IndexList support;
  for (Index j : c.support()) support.push_back(out.sample[static_cast<std::size_t>(j)]);
  out.ball.center = Center::combination(std::move(support), c.weights());
  out.ball.radius = ball.radius * alg1_expansion(params.epsilon);
  return out;
}

Index test_h_rounds(double epsilon) { return ceil_count(3.0 / (epsilon * epsilon)); }

TestHResult test_h(const PointSet& P, double h, Index z, const StabilityParams& params, RngStream& rng,
                   const Kernel& kernel, AccessLog* log) {
  check(params);
  if (z < 1) throw std::invalid_argument("test_h: z must be >= 1");
  const double e2 = params.epsilon * params.epsilon;
  const double xi = (1.0 / 3.0) * e2 / (1.0 + e2);
  TestHResult out;
  out.sample_size = ceil_count(std::log(static_cast<double>(z) / params.eta) / params.beta0);
  CoreSetSolver solver(P, kernel);
  solver.add(rng.index(P.n()));
  if (log) log->sampled(1);
  for (Index i = 1;; ++i) {
    out.rounds = i;
    solver.solve(xi, fw_iteration_cap(xi));
    out.center = solver.center();
    const CenterDistance dist(P, out.center, kernel);
    Index q = -1;
    double far = -1.0;
    for (Index k = 0; k < out.sample_size; ++k) {
      const Index j = rng.index(P.n());
      const double dj = dist(j);
      if (dj > far || (dj == far && j < q)) {
        far = dj;
        q = j;
      }
    }
    if (log) log->sampled(out.sample_size);
    solver.add(q);
    if (far < h) {
      out.yes = true;
      break;
    }
    if (i + 1 > z) break;
  }
  out.T = solver.members();
  return out;
}

Index alg2_grid_length(double epsilon) {
  const double e2 = epsilon * epsilon;
  return ceil_count(std::log(2.0 / ((1.0 - e2) * (1.0 - e2))) / std::log(1.0 + e2)) + 1;
}

double alg2_radius_factor(double epsilon) {
  const double e2 = epsilon * epsilon;
  const double x2 = (2.0 * kSqrt2 + 2.0 * std::sqrt(6.0) / std::sqrt(1.0 - e2)) * epsilon;
  return (1.0 + x2) / (1.0 + e2);
}

double alg2_lambda(double epsilon) {
  const double e2 = epsilon * epsilon;
  const double x1 = 8.0 * e2 / (1.0 - e2);
  const double x2 = (2.0 * kSqrt2 + 2.0 * std::sqrt(6.0) / std::sqrt(1.0 - e2)) * epsilon;
  return (1.0 + x1) * (1.0 + x2) / (1.0 + e2);
}

Alg2Result meb_alg2(const PointSet& P, const StabilityParams& params, RngStream& rng, const Kernel& kernel) {
  check(params);
  Alg2Result out;
  out.interval = radius_range(P, params, rng, kernel, &out.log);
  if (out.interval.degenerate) {
    out.ball.center = Center::at_index(0);
    out.ball.radius = 0.0;
    out.flags.push_back("degenerate-interval");
    return out;
  }
  const double e2 = params.epsilon * params.epsilon;
  const double a = out.interval.a;
  const Index w = out.grid_length = alg2_grid_length(params.epsilon);
  const Index z = test_h_rounds(params.epsilon);
  StabilityParams probe = params;
  probe.eta = params.eta / (2.0 * std::log2(static_cast<double>(w)));
  auto grid = [&](Index i) { return std::pow(1.0 + e2, static_cast<double>(i)) * (1.0 - e2) * a; };

  // Invariant: lo is a "no" index (or -1), hi is a "yes" index (or w + 1).
  Index lo = -1;
  Index hi = w + 1;
  while (hi - lo > 1) {
    const Index mid = lo + (hi - lo) / 2;
    const bool yes = test_h(P, grid(mid), z, probe, rng, kernel, &out.log).yes;
    out.probes.emplace_back(mid, yes);
    (yes ? hi : lo) = mid;
  }
  if (hi == 0) {
    out.flags.push_back("all-yes");
    out.i0 = 0;
  } else if (hi == w + 1) {
    out.flags.push_back("all-no");
    out.i0 = w - 1;
  } else {
    out.i0 = hi - 1;
  }
  out.h = std::pow(1.0 + e2, static_cast<double>(out.i0 + 2)) * a;
  StabilityParams final_params = params;
  final_params.eta = params.eta / 2.0;
  const TestHResult last = test_h(P, out.h, z, final_params, rng, kernel, &out.log);
  out.final_yes = last.yes;
  if (!last.yes) out.flags.push_back("final-test-no");
  out.ball.center = last.center;
  out.ball.radius = alg2_radius_factor(params.epsilon) * out.h;
  return out;
}

}  // namespace geosub
