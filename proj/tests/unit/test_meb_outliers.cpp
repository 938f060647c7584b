#include "doctest.h"

#include "geosub/meb_outliers.hpp"
#include "geosub/oracle.hpp"

#include <algorithm>

using namespace geosub;

namespace {

GeneratedInstance planted(Index n, Index d, double gamma, std::uint64_t seed) {
  GenerateParams p;
  p.family = "planted-outliers";
  p.n = n;
  p.d = d;
  p.gamma = gamma;
  RngStream rng(seed);
  return generate(p, rng);
}

Index covered(const PointSet& P, const Ball& b) {
  const CenterDistance dist(P, b.center, Kernel::linear());
  Index k = 0;
  for (Index i = 0; i < P.n(); ++i) k += dist(i) <= b.radius ? 1 : 0;
  return k;
}

}  // namespace

TEST_CASE("farthest_t") {
  RowMatrix X(4, 1);
  X << 0, 1, 2, 3;
  const PointSet P(X);
  const RankResult r = farthest_t(P, Center::at_index(0), 2);
  CHECK(r.Q == IndexList{2, 3});
  CHECK(r.l == 1.0);
  CHECK(farthest_t(P, Center::at_index(0), 3).l == 0.0);
  CHECK_THROWS_AS(farthest_t(P, Center::at_index(0), 4), std::invalid_argument);
}

TEST_CASE("uniform_adaptive sizes") {
  CHECK(adaptive_top_size(0.1, 0.05, 200) == 45);
  CHECK(adaptive_sample_size(0.1, 0.1, 1.0) == static_cast<Index>(std::ceil(10.0 * std::log(10.0))));

  const PointSet same(RowMatrix::Constant(20, 2, 1.0));
  RngStream rng(1);
  const AdaptiveResult a = uniform_adaptive(same, Center::at_index(0), 0.1, 0.05, 0.1, rng);
  CHECK(a.index >= 0);
  CHECK(same.row(a.index) == same.row(0));

  RngStream bad(2);
  // c2 = 0 makes n' zero.
  CHECK_THROWS_AS(uniform_adaptive(same, Center::at_index(0), 0.1, 0.05, 0.1, bad, Kernel::linear(), 0.0),
                  std::invalid_argument);
}

TEST_CASE("sandwich_estimate") {
  CHECK(sandwich_rank(0.1, 0.02, 1000) == 144);
  // n'' = ceil(c3 gamma / delta^2 ln(1/eta2)) = ceil(250 ln 10)
  CHECK(sandwich_sample_size(0.1, 0.02, 0.1, 1.0) == static_cast<Index>(std::ceil(250.0 * std::log(10.0))));

  // Points on a sphere around the origin: every f is the same.
  RowMatrix X(50, 2);
  for (Index i = 0; i < 50; ++i) {
    X(i, 0) = 2.0 * std::cos(0.1 * i);
    X(i, 1) = 2.0 * std::sin(0.1 * i);
  }
  const PointSet P(X);
  RngStream rng(3);
  const SandwichResult s = sandwich_estimate(P, Center::point(Vector::Zero(2)), 0.1, 0.02, 0.1, rng);
  CHECK(s.size == doctest::Approx(2.0));

  RngStream r2(4);
  CHECK_THROWS_AS(sandwich_estimate(P, Center::at_index(0), 0.1, 0.04, 0.1, r2), std::invalid_argument);
}

TEST_CASE("repetition schedules") {
  CHECK(bicriteria_rounds(BiCriteriaParams{}) == static_cast<Index>(std::ceil(2.0 / 0.3)) + 1);
  // (1/0.9)(1 + 0.1/0.1)^3 = 8.888...
  CHECK(linear_repetition_schedule(0.1, 0.1, 3) == doctest::Approx(9.0));
  // (1/0.9)((1/0.9)(3 + 3 * 0.1 / 0.02))^2 = 1.111 * (20)^2
  CHECK(sublinear_repetition_schedule(0.1, 0.1, 0.1, 2) == doctest::Approx(std::ceil(400.0 / 0.9)));
}

TEST_CASE("bicriteria_linear") {
  const GeneratedInstance g = planted(2000, 10, 0.05, 5);
  BiCriteriaParams bp;
  bp.epsilon = 0.3;
  bp.delta = 0.05;
  RngStream rng(6);
  const BiCriteriaResult r = bicriteria_linear({&g.points, g.gamma, &g.truth}, bp, rng);
  const Index t = ceil_count((bp.delta + g.gamma) * 2000.0);
  CHECK(covered(g.points, r.ball) >= 2000 - t);
  CHECK(*r.report.coverage >= 2000 - t);
  CHECK(r.ball.radius <= (1.0 + bp.epsilon) * g.truth.optimum_size);

  SUBCASE("gamma = 0 matches the plain core-set quality") {
    const GeneratedInstance h = planted(800, 5, 0.0, 7);
    BiCriteriaParams p0;
    p0.epsilon = 0.2;
    p0.delta = 0.01;
    p0.repetitions = 3;
    RngStream r0(8);
    const BiCriteriaResult b = bicriteria_linear({&h.points, 0.0, &h.truth}, p0, r0);
    CHECK(b.ball.radius <= 1.2 * exact_meb(h.points).optimum_size);
  }
}

TEST_CASE("bicriteria_sublinear") {
  const GeneratedInstance g = planted(5000, 20, 0.1, 9);
  BiCriteriaParams bp;
  bp.epsilon = 0.3;
  bp.delta = 0.1;
  RngStream rng(10);
  const BiCriteriaResult r = bicriteria_sublinear({&g.points, g.gamma, &g.truth}, bp, rng);
  CHECK(r.report.log.full_passes == 0);
  CHECK(r.report.verify_log.full_passes == 1);
  // n'' with delta' = delta/5 and eta2 = 1/(zN)
  const double z = static_cast<double>(r.report.counts.at("z"));
  const double N = static_cast<double>(r.report.counts.at("repetitions"));
  const double eta2 = 1.0 / (z * N);
  CHECK(r.report.counts.at("n_double_prime") ==
        static_cast<std::int64_t>(std::ceil(0.1 * 25.0 / 0.01 * std::log(1.0 / eta2) - 1e-9)));
  CHECK(static_cast<double>(*r.report.coverage) >= (1.0 - bp.delta - g.gamma) * 5000.0);
  CHECK(r.ball.radius <= (1.0 + bp.epsilon) * g.truth.optimum_size);

  BiCriteriaParams low = bp;
  low.delta = 0.6;  // delta' = 0.12 >= gamma/3
  RngStream r2(11);
  CHECK_THROWS_AS(bicriteria_sublinear({&g.points, g.gamma, &g.truth}, low, r2), std::invalid_argument);
}
