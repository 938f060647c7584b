#include "doctest.h"

#include "geosub/generate.hpp"
#include "geosub/io.hpp"
#include "geosub/oracle.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace geosub;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("geosub_unit_" + name)).string();
}

}  // namespace

TEST_CASE("parse_dense reads rows and honours the header flag") {
  std::istringstream plain("0,0\n2,0\n");
  const PointSet P = parse_dense(plain);
  CHECK(P.n() == 2);
  CHECK(P.d() == 2);
  CHECK(P.row(1)(0) == 2.0);

  std::istringstream with_header("x,y\n0,0\n2,0\n");
  const PointSet H = parse_dense(with_header, true);
  CHECK(H.n() == 2);
  CHECK(H.dense() == P.dense());

  std::istringstream blank("1,2\n\n3,4\n");
  CHECK(parse_dense(blank).n() == 2);
}

TEST_CASE("parse_dense errors name the offending line") {
  std::istringstream ragged("1,2\n3\n");
  try {
    parse_dense(ragged);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream bad_cell("1,2\n3,abc\n");
  CHECK_THROWS_AS(parse_dense(bad_cell), ParseError);
}

TEST_CASE("parse_sparse follows the LIBSVM layout") {
  std::istringstream one("+1 1:3 3:4\n");
  const LabeledPoints L = parse_sparse(one);
  CHECK(L.points.n() == 1);
  CHECK(L.points.d() == 3);
  CHECK(L.labels == std::vector<int>{1});
  const Vector r = L.points.row(0);
  CHECK(r(0) == 3.0);
  CHECK(r(1) == 0.0);
  CHECK(r(2) == 4.0);

  std::istringstream two("1 5:1\n-1 2:7\n");
  const LabeledPoints T = parse_sparse(two);
  CHECK(T.points.d() == 5);
  CHECK(T.labels == std::vector<int>{1, -1});

  std::istringstream descending("+1 2:1 1:1\n");
  CHECK_THROWS_AS(parse_sparse(descending), ParseError);
  std::istringstream empty("");
  CHECK_THROWS(parse_sparse(empty));
}

TEST_CASE("dense and sparse round trips keep the digest") {
  RngStream rng(5);
  RowMatrix X(20, 3);
  for (Index i = 0; i < X.rows(); ++i)
    for (Index j = 0; j < X.cols(); ++j) X(i, j) = (i + j) % 3 == 0 ? 0.0 : rng.normal();
  const PointSet P(X);
  const std::string csv = temp_path("rt.csv");
  const std::string svm = temp_path("rt.svm");
  write_dense(csv, P);
  write_sparse(svm, P, std::vector<int>(20, 1));
  CHECK(dataset_digest(load_dense(csv)) == dataset_digest(P));
  CHECK(dataset_digest(load_sparse(svm).points) == dataset_digest(P));
  CHECK(dataset_digest(load_any(svm).points) == dataset_digest(P));
  std::filesystem::remove(csv);
  std::filesystem::remove(svm);

  RowMatrix Y = X;
  Y(3, 1) += 1e-12;
  CHECK(dataset_digest(PointSet(Y)) != dataset_digest(P));
}

TEST_CASE("high-dimensional sparse rows stay sparse and agree with dense math") {
  const Index d = 200;
  std::vector<Eigen::Triplet<double>> trips{{0, 3, 1.0}, {0, 150, -2.0}, {1, 3, 4.0}, {1, 7, 0.5}};
  SparseRows S(2, d);
  S.setFromTriplets(trips.begin(), trips.end());
  const PointSet P(S);
  CHECK(P.is_sparse());
  CHECK(P.nnz() == 4);
  const RowMatrix D = RowMatrix(S.toDense());
  CHECK(P.sq_distance(0, 1) == doctest::Approx((D.row(0) - D.row(1)).squaredNorm()));
  CHECK(P.dot(0, 1) == doctest::Approx(D.row(0).dot(D.row(1))));
  CHECK(dataset_digest(P) == dataset_digest(PointSet(D)));
}

TEST_CASE("uniform_sample") {
  const PointSet one(RowMatrix::Zero(1, 2));
  RngStream rng(9);
  CHECK(uniform_sample(one, 5, rng) == IndexList(5, 0));
  CHECK_THROWS_AS(uniform_sample(one, 0, rng), std::invalid_argument);

  const PointSet ten(RowMatrix::Zero(10, 1));
  RngStream a(77), b(77);
  CHECK(uniform_sample(ten, 50, a) == uniform_sample(ten, 50, b));

  // Frequencies of 1e5 draws over 10 cells: binomial(1e5, 0.1), sigma = 94.87.
  RngStream c(78);
  std::vector<int> freq(10, 0);
  for (Index i : uniform_sample(ten, 100000, c)) ++freq[static_cast<std::size_t>(i)];
  const double sigma = std::sqrt(100000 * 0.1 * 0.9);
  double chi2 = 0.0;
  for (int f : freq) {
    CHECK(std::abs(f - 10000) <= 3.0 * sigma);
    chi2 += (f - 10000.0) * (f - 10000.0) / 10000.0;
  }
  CHECK(chi2 < 27.88);  // chi-square 9 dof, p = 0.001
}

TEST_CASE("rng streams") {
  RngStream a(1, 2);
  const RngStream child_before = a.child(3);
  a.next_u64();
  const RngStream child_after = a.child(3);
  RngStream x = child_before, y = child_after;
  CHECK(x.next_u64() == y.next_u64());
  RngStream p = a.child(3), q = a.child(4);
  CHECK(p.next_u64() != q.next_u64());

  RngStream r(11);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const Index k = r.index(7);
    CHECK(k >= 0);
    CHECK(k < 7);
  }
}

TEST_CASE("ceil_count absorbs round-off only") {
  CHECK(ceil_count(1.5 * 0.15 * 200) == 45);
  CHECK(ceil_count(45.01) == 46);
  CHECK(ceil_count(0.0) == 0);
}

TEST_CASE("generator families") {
  SUBCASE("simplex") {
    GenerateParams p;
    p.family = "simplex";
    p.d = 3;
    RngStream rng(1);
    const GeneratedInstance g = generate(p, rng);
    REQUIRE(g.points.n() == 4);
    for (Index i = 0; i < 4; ++i)
      for (Index j = i + 1; j < 4; ++j) CHECK(g.points.distance(i, j) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.truth.optimum_size == doctest::Approx(std::sqrt(3.0 / 8.0)).epsilon(1e-12));
  }
  SUBCASE("uniform ball radius 2") {
    GenerateParams p;
    p.family = "uniform-ball";
    p.n = 1000;
    p.d = 10;
    p.radius = 2.0;
    RngStream rng(2);
    const GeneratedInstance g = generate(p, rng);
    const double rad = exact_meb(g.points).optimum_size;
    double diam = 0.0;
    for (Index i = 0; i < 200; ++i)
      for (Index j = 0; j < 200; ++j) diam = std::max(diam, g.points.distance(i, j));
    CHECK(rad <= 2.0);
    CHECK(rad >= diam / 2.0);
    CHECK(g.truth.optimum_size == doctest::Approx(rad).epsilon(1e-9));
  }
  SUBCASE("planted outliers") {
    GenerateParams p;
    p.family = "planted-outliers";
    p.n = 100;
    p.gamma = 0.05;
    p.separation = 10.0;
    RngStream rng(3);
    const GeneratedInstance g = generate(p, rng);
    CHECK(g.truth.inlier_indices.size() == 95);
    const std::set<Index> in(g.truth.inlier_indices.begin(), g.truth.inlier_indices.end());
    const Vector c = g.truth.optimum_center.front();
    for (Index i = 0; i < g.points.n(); ++i) {
      const double dist = (g.points.row(i) - c).norm();
      if (in.count(i))
        CHECK(dist <= g.truth.optimum_size + 1e-9);
      else
        CHECK(dist > g.truth.optimum_size);
    }
  }
  SUBCASE("two-class labels") {
    GenerateParams p;
    p.family = "two-class-margin";
    p.n = 200;
    RngStream rng(4);
    const GeneratedInstance g = generate(p, rng);
    CHECK(g.labels.size() == 200);
    CHECK(std::set<int>(g.labels.begin(), g.labels.end()) == std::set<int>{-1, 1});
  }
  SUBCASE("invalid parameters") {
    GenerateParams p;
    p.family = "planted-outliers";
    p.gamma = 1.0;
    RngStream rng(5);
    CHECK_THROWS_AS(generate(p, rng), std::invalid_argument);
    p.family = "no-such-family";
    p.gamma = 0.0;
    CHECK_THROWS_AS(generate(p, rng), std::invalid_argument);
  }
  SUBCASE("every family generates") {
    for (const std::string& f : generator_families()) {
      GenerateParams p;
      p.family = f;
      p.n = 300;
      p.d = 4;
      p.gamma = 0.05;
      RngStream rng(6);
      const GeneratedInstance g = generate(p, rng);
      CHECK(g.points.n() > 0);
      CHECK(g.truth.optimum_size >= 0.0);
    }
  }
}
