#include "doctest.h"

#include "geosub/coreset.hpp"
#include "geosub/generate.hpp"
#include "geosub/oracle.hpp"

using namespace geosub;

namespace {

PointSet points(std::initializer_list<std::initializer_list<double>> rows) {
  const Index d = static_cast<Index>(rows.begin()->size());
  RowMatrix X(static_cast<Index>(rows.size()), d);
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (double v : r) X(i, j++) = v;
    ++i;
  }
  return PointSet(X);
}

PointSet ball_points(Index n, Index d, std::uint64_t seed) {
  RngStream rng(seed);
  RowMatrix X(n, d);
  for (Index i = 0; i < n; ++i) X.row(i) = random_in_ball(d, 1.0, rng).transpose();
  return PointSet(X);
}

}  // namespace

TEST_CASE("approx_center") {
  const PointSet two = points({{0, 0}, {2, 0}});
  CHECK_THROWS_AS(approx_center(two, {}, 0.1), std::invalid_argument);

  const Vector single = materialize(two, approx_center(two, {1}, 0.1));
  CHECK(single(0) == 2.0);
  CHECK(single(1) == 0.0);

  const Vector mid = materialize(two, approx_center(two, {0, 1}, 0.1));
  CHECK((mid - Vector::Unit(2, 0)).norm() <= 0.1);

  const PointSet S(regular_simplex(3));
  const Vector c = materialize(S, approx_center(S, {0, 1, 2, 3}, 0.01));
  const Vector centroid = S.dense().colwise().mean().transpose();
  CHECK((c - centroid).norm() <= 0.01 * std::sqrt(3.0 / 8.0));
}

TEST_CASE("CoreSetSolver certificate bounds the center error") {
  const PointSet P = ball_points(40, 6, 3);
  IndexList all;
  for (Index i = 0; i < P.n(); ++i) all.push_back(i);
  const OracleResult exact = exact_meb(P);
  for (double xi : {0.1, 0.01, 1e-3}) {
    const Vector c = materialize(P, approx_center(P, all, xi));
    CHECK((c - exact.optimum_center.coords()).norm() <= xi * exact.optimum_size * (1.0 + 1e-9));
  }
  CoreSetSolver s(P, Kernel::linear());
  CHECK(s.add(2));
  CHECK_FALSE(s.add(2));
  CHECK(s.size() == 1);
}

TEST_CASE("farthest_point") {
  const PointSet two = points({{0, 0}, {3, 0}});
  const auto [i, dist] = farthest_point(two, Center::point(Vector::Zero(2)));
  CHECK(i == 1);
  CHECK(dist == 3.0);

  const PointSet same = points({{1, 1}, {1, 1}, {1, 1}});
  const auto [j, zero] = farthest_point(same, Center::at_index(2));
  CHECK(j == 0);
  CHECK(zero == 0.0);

  const PointSet P = ball_points(100, 5, 4);
  RngStream rng(4);
  const Vector o = random_in_ball(5, 1.0, rng);
  Index naive = 0;
  for (Index k = 1; k < P.n(); ++k)
    if ((P.row(k) - o).norm() > (P.row(naive) - o).norm()) naive = k;
  AccessLog log;
  CHECK(farthest_point(P, Center::point(o), Kernel::linear(), &log).first == naive);
  CHECK(log.full_passes == 1);
  CHECK(log.points_touched == 100);
}

TEST_CASE("badoiu_clarkson") {
  // z = 3/eps for s = 1/3, plus the initial point.
  CHECK(coreset_size_bound(0.1, 1.0 / 3.0) - 1 == 30);

  const PointSet one = points({{4, 2, 1}});
  const auto [b1, s1] = badoiu_clarkson(one, 0.1);
  CHECK(b1.radius == 0.0);
  CHECK(s1.T.size() == 1);

  const PointSet P = ball_points(500, 8, 5);
  const double rad = exact_meb(P).optimum_size;
  const auto [ball, state] = badoiu_clarkson(P, 0.05);
  CHECK(ball.radius / rad >= 1.0 - 1e-12);
  CHECK(ball.radius / rad <= 1.05 + 1e-9);
  CHECK(static_cast<Index>(state.T.size()) <= coreset_size_bound(0.05, 1.0 / 3.0));
  const Vector c = materialize(P, ball.center);
  for (Index i = 0; i < P.n(); ++i) CHECK((P.row(i) - c).norm() <= ball.radius + 1e-9);
}

TEST_CASE("combination and explicit centers agree under the linear kernel") {
  const PointSet P = ball_points(60, 4, 6);
  const Center comb = Center::combination({1, 5, 9}, {0.2, 0.3, 0.5});
  const Center expl = Center::point(materialize(P, comb));
  const CenterDistance a(P, comb, Kernel::linear(), true);
  const CenterDistance b(P, expl, Kernel::linear());
  for (Index i = 0; i < P.n(); ++i) CHECK(std::abs(a(i) - b(i)) <= 1e-9);
}

TEST_CASE("eval_distance") {
  const PointSet P = points({{1, 0}, {0, 0}, {2, 0}, {1, 1}});
  CHECK(eval_distance(P, Center::point(Vector::Unit(2, 0)), 0, Kernel::linear()) == 0.0);
  const Center comb = Center::combination({1, 2}, {0.5, 0.5});
  CHECK(eval_distance(P, comb, 3, Kernel::linear()) == doctest::Approx(1.0));
  CHECK(eval_distance(P, Center::at_index(3), 3, Kernel::rbf(1.0)) == doctest::Approx(0.0));
  CHECK_THROWS_AS(eval_distance(P, Center::point(Vector::Zero(2)), 0, Kernel::rbf(1.0)), std::invalid_argument);
}

TEST_CASE("rbf core-set radius respects the feature-space bound") {
  // In rbf feature space all points lie on the unit sphere, so Rad <= 1.
  const PointSet P = ball_points(200, 3, 7);
  const auto [ball, state] = badoiu_clarkson(P, 0.1, 1.0 / 3.0, Kernel::rbf(0.5));
  CHECK(ball.radius <= 1.1 + 1e-12);
  CHECK(ball.radius > 0.0);
  const CenterDistance dist(P, ball.center, Kernel::rbf(0.5));
  for (Index i = 0; i < P.n(); ++i) CHECK(dist(i) <= ball.radius + 1e-9);
}
