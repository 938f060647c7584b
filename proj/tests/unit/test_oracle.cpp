#include "doctest.h"

#include "geosub/generate.hpp"
#include "geosub/mex.hpp"
#include "geosub/oracle.hpp"

#include <algorithm>
#include <numeric>

using namespace geosub;

namespace {

PointSet random_points(Index n, Index d, std::uint64_t seed, double spread = 1.0) {
  RngStream rng(seed);
  RowMatrix X(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) X(i, j) = spread * rng.normal();
  return PointSet(X);
}

}  // namespace

TEST_CASE("exact_meb small cases") {
  RowMatrix two(2, 2);
  two << 0, 0, 2, 0;
  const OracleResult r = exact_meb(PointSet(two));
  CHECK(r.optimum_size == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.optimum_center.coords()(0) == doctest::Approx(1.0));

  CHECK(exact_meb(PointSet(regular_simplex(3))).optimum_size ==
        doctest::Approx(std::sqrt(3.0 / 8.0)).epsilon(1e-9));

  // Obtuse triangle: the longest side is a diameter.
  RowMatrix obtuse(3, 2);
  obtuse << 0, 0, 4, 0, 1, 0.5;
  CHECK(exact_meb(PointSet(obtuse)).optimum_size == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("both exact paths agree in low dimension") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const PointSet P = random_points(50 + static_cast<Index>(s), 3, 100 + s);
    const double a = exact_meb_combinatorial(P).optimum_size;
    const OracleResult b = exact_meb_certified(P);
    CHECK(a == doctest::Approx(b.optimum_size).epsilon(1e-9));
    CHECK(b.certified_tolerance <= 1e-9);
  }
}

TEST_CASE("certified path handles degenerate supports") {
  // Points on a 2-flat inside R^6 and heavy duplication.
  RngStream rng(8);
  RowMatrix X = RowMatrix::Zero(80, 6);
  for (Index i = 0; i < 80; ++i) {
    X(i, 0) = rng.normal();
    X(i, 1) = rng.normal();
  }
  for (Index i = 40; i < 80; ++i) X.row(i) = X.row(i % 5);
  const PointSet P(X);
  const OracleResult r = exact_meb_certified(P);
  CHECK(r.optimum_size == doctest::Approx(exact_meb_combinatorial(PointSet(RowMatrix(X.leftCols(3)))).optimum_size)
                              .epsilon(1e-9));
}

TEST_CASE("exact_meb_outliers_tiny") {
  RowMatrix X = RowMatrix::Zero(5, 2);
  X(4, 0) = 100.0;
  CHECK(exact_meb_outliers_tiny(PointSet(X), 0.2).optimum_size == 0.0);

  // Same instance with rows permuted gives the same optimum.
  const PointSet P = random_points(10, 2, 9);
  IndexList perm(10);
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  std::swap(perm[2], perm[7]);
  CHECK(exact_meb_outliers_tiny(P, 0.2).optimum_size ==
        doctest::Approx(exact_meb_outliers_tiny(P.subset(perm), 0.2).optimum_size).epsilon(1e-12));

  const PointSet twelve = random_points(12, 2, 10);
  CHECK(exact_meb_outliers_tiny(twelve, 1.0 / 12.0).subproblems == 12);

  CHECK_THROWS_AS(exact_meb_outliers_tiny(random_points(40, 2, 11), Index{20}), Refusal);
}

TEST_CASE("exact_polytope_distance_tiny") {
  RowMatrix a(1, 2);
  a << 3, 4;
  CHECK(exact_polytope_distance_tiny(PointSet(a)).optimum_size == doctest::Approx(5.0));
  RowMatrix b(2, 2);
  b << 1, 0, 0, 1;
  CHECK(exact_polytope_distance_tiny(PointSet(b)).optimum_size == doctest::Approx(std::sqrt(0.5)));

  // Agreement with long Gilbert runs on instances whose optimum is a vertex or an edge.
  RowMatrix c(4, 3);
  c << 1, 0, 0, 1, 1, 0, 2, -1, 0.5, 3, 2, 2;
  GilbertTarget tg;
  tg.iterations = 100000;
  const PointSet C(c);
  CHECK(gilbert(C, tg).distance == doctest::Approx(exact_polytope_distance_tiny(C).optimum_size).epsilon(1e-6));
}

TEST_CASE("binomial") {
  CHECK(binomial(12, 1) == 12.0);
  CHECK(binomial(12, 3) == 220.0);
  CHECK(binomial(5, 7) == 0.0);
}
