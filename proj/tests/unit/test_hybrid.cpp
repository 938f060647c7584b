#include "doctest.h"

#include "geosub/hybrid.hpp"
#include "geosub/oracle.hpp"

#include <algorithm>

using namespace geosub;

TEST_CASE("thresholds and the outlier coefficient") {
  CHECK(hybrid_meb_threshold(0.2) == doctest::Approx(1.2 / 0.98).epsilon(1e-12));
  CHECK(hybrid_meb_threshold(0.2) == doctest::Approx(1.224490).epsilon(1e-6));

  // (2 sqrt2 + sqrt3)^2 = 8 + 3 + 4 sqrt6 = 11 + 9.797958971 = 20.797958971
  const double sq = 11.0 + 4.0 * std::sqrt(6.0);
  CHECK(sq == doctest::Approx(20.797958971).epsilon(1e-10));
  CHECK(outlier_radius_coefficient() == doctest::Approx(1.0 / (2.0 * sq)).epsilon(1e-12));
  CHECK(outlier_radius_coefficient() == doctest::Approx(0.024040).epsilon(1e-4));
  CHECK(hybrid_outliers_threshold(0.3) == doctest::Approx(1.3 / (1.0 - 0.09 / (2.0 * sq))).epsilon(1e-12));
}

TEST_CASE("hybrid_label") {
  double ratio = -1.0;
  CHECK(hybrid_label(0.0, 0.0, 1.1, &ratio) == HybridLabel::radius_approx);
  CHECK(ratio == 1.0);
  CHECK(hybrid_label(1.05, 1.0, 1.1) == HybridLabel::radius_approx);
  CHECK(hybrid_label(1.2, 1.0, 1.1) == HybridLabel::covering_approx);
  CHECK(to_string(HybridLabel::radius_approx) == "radius-approx");
  CHECK(to_string(HybridLabel::covering_approx) == "covering-approx");
}

TEST_CASE("stability inference text") {
  HybridResult r;
  r.epsilon = 0.3;
  r.label = HybridLabel::radius_approx;
  CHECK(infer_stability(r, 0.3).text() == "alpha < 0.3");
  r.label = HybridLabel::covering_approx;
  CHECK(infer_stability(r, 0.3).text() == "alpha > 0.045");
  r.outliers_variant = true;
  const StabilityBound b = infer_stability(r, 0.3);
  CHECK_FALSE(b.upper);
  CHECK(b.value == doctest::Approx(0.002164).epsilon(1e-3));
  CHECK_THROWS_AS(infer_stability(r, 0.2), std::invalid_argument);
}

TEST_CASE("candidate_radii order statistics") {
  RngStream rng(1);
  RowMatrix X(101, 3);
  for (Index i = 0; i < X.rows(); ++i) X.row(i) = random_in_ball(3, 1.0, rng).transpose();
  const PointSet P(X);
  std::vector<Center> centers{Center::at_index(0), Center::point(Vector::Zero(3))};
  AccessLog log;
  const OutlierRadii r = candidate_radii(P, centers, 0.05, 0.1, Kernel::linear(), &log);
  CHECK(log.full_passes == 1);
  for (std::size_t q = 0; q < centers.size(); ++q) {
    const CenterDistance dist(P, centers[q], Kernel::linear());
    std::vector<double> ds;
    for (Index i = 0; i < P.n(); ++i) ds.push_back(dist(i));
    std::sort(ds.begin(), ds.end());
    CHECK(r.r[q] == ds[static_cast<std::size_t>(ceil_count(0.95 * 101) - 1)]);
    CHECK(r.r_prime[q] == ds[static_cast<std::size_t>(ceil_count(0.85 * 101) - 1)]);
  }

  // gamma = 0: r is the max distance and r' <= r.
  const OutlierRadii z = candidate_radii(P, {Center::at_index(3)}, 0.0, 0.1, Kernel::linear(), nullptr);
  CHECK(z.r[0] == doctest::Approx(farthest_point(P, Center::at_index(3)).second));
  CHECK(z.r_prime[0] <= z.r[0]);
}

TEST_CASE("hybrid_meb") {
  const PointSet one(RowMatrix::Ones(1, 4));
  RngStream r0(2);
  const HybridResult single = hybrid_meb(one, {}, r0);
  CHECK(single.ball.radius == 0.0);
  CHECK(single.label == HybridLabel::radius_approx);
  CHECK(single.ratio == 1.0);

  GenerateParams gp;
  gp.family = "uniform-ball";
  gp.n = 2000;
  gp.d = 10;
  RngStream g(3);
  const GeneratedInstance inst = generate(gp, g);
  HybridParams hp;
  hp.epsilon = 0.3;
  RngStream rng(4);
  const HybridResult r = hybrid_meb(inst.points, hp, rng);
  CHECK(r.report.log.full_passes == 1);
  CHECK(r.threshold == doctest::Approx(hybrid_meb_threshold(0.3)));
  if (r.label == HybridLabel::radius_approx) CHECK(r.ball.radius <= 1.3 * inst.truth.optimum_size);
}

TEST_CASE("hybrid_meb_outliers") {
  GenerateParams gp;
  gp.family = "planted-outliers";
  gp.n = 2000;
  gp.d = 10;
  gp.gamma = 0.05;
  RngStream g(5);
  const GeneratedInstance inst = generate(gp, g);
  HybridParams hp;
  hp.max_rounds = 40;
  RngStream rng(6);
  const HybridResult r = hybrid_meb_outliers({&inst.points, inst.gamma, &inst.truth}, hp, rng);
  CHECK(r.outliers_variant);
  CHECK(r.report.log.full_passes == 1);
  const CenterDistance dist(inst.points, r.ball.center, Kernel::linear());
  Index covered = 0;
  for (Index i = 0; i < inst.points.n(); ++i) covered += dist(i) <= r.ball.radius ? 1 : 0;
  if (r.label == HybridLabel::radius_approx) {
    CHECK(r.ball.radius <= 1.3 * inst.truth.optimum_size);
    CHECK(covered >= ceil_count(0.95 * 2000));
  } else {
    CHECK(r.ball.radius <= inst.truth.optimum_size);
    CHECK(covered >= ceil_count(0.85 * 2000));
  }
}
