#include "doctest.h"

#include "geosub/generate.hpp"
#include "geosub/oracle.hpp"
#include "geosub/stable_meb.hpp"

using namespace geosub;

TEST_CASE("closed forms evaluated by hand") {
  // (1 + (2*1.41421356 + 1.73205081) * 0.1) / 0.99
  CHECK(alg1_expansion(0.1) == doctest::Approx(1.4560477932 / 0.99).epsilon(1e-9));
  CHECK(alg1_expansion(0.1) == doctest::Approx(1.470755).epsilon(1e-6));
  CHECK(alg1_lambda(0.1) == doctest::Approx(1.470755 * 1.01).epsilon(1e-6));

  // log_{1.25}(2 / 0.5625) = ln(3.5556)/ln(1.25) = 5.685 -> 6, plus one.
  CHECK(alg2_grid_length(0.5) == 7);
  CHECK(test_h_rounds(0.5) == 12);
  CHECK(test_h_rounds(0.1) == 300);

  // x1 = 8*0.04/0.96, x2 = (2 sqrt2 + 2 sqrt6 / sqrt(0.96)) * 0.2
  const double x1 = 0.32 / 0.96;
  const double x2 = (2.0 * 1.4142135624 + 2.0 * 2.4494897428 / std::sqrt(0.96)) * 0.2;
  CHECK(alg2_lambda(0.2) == doctest::Approx((1.0 + x1) * (1.0 + x2) / 1.04).epsilon(1e-9));

  StabilityParams sp{0.1, 0.1, 0.05, 1.0};
  // max{ln 20, 3 ln 30} / 0.1
  CHECK(alg1_sample_size(3, sp) == static_cast<Index>(std::ceil(3.0 * std::log(30.0) / 0.1)));
}

TEST_CASE("radius_range") {
  RowMatrix X(2, 1);
  X << 0.0, 1.0;
  const PointSet P(X);
  StabilityParams sp{0.1, 0.5, 0.1, 1.0};
  // With two points, some draw is the other point with overwhelming probability.
  RngStream rng(3);
  const RadiusInterval iv = radius_range(P, sp, rng);
  if (!iv.degenerate) {
    CHECK(iv.a == doctest::Approx(0.5));
    CHECK(iv.b == doctest::Approx(1.0 / 0.99));
  }

  const PointSet twin(RowMatrix::Ones(2, 3));
  RngStream r2(4);
  const RadiusInterval z = radius_range(twin, sp, r2);
  CHECK(z.degenerate);
  CHECK(z.a == 0.0);
  CHECK(z.b == 0.0);

  const PointSet S(regular_simplex(3));
  const double rad = std::sqrt(3.0 / 8.0);
  StabilityParams tight{0.2, 0.2, 0.01, 1.0};
  int hits = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    RngStream rng_s(1000 + s);
    const RadiusInterval r = radius_range(S, tight, rng_s);
    hits += r.a <= rad && rad <= r.b;
  }
  CHECK(hits >= 198);
}

TEST_CASE("meb_alg1") {
  const PointSet same(RowMatrix::Constant(30, 4, 2.5));
  RngStream rng(5);
  CHECK(meb_alg1(same, {}, rng).ball.radius == 0.0);

  GenerateParams gp;
  gp.family = "uniform-ball";
  gp.n = 3000;
  gp.d = 3;
  RngStream g(6);
  const GeneratedInstance inst = generate(gp, g);
  StabilityParams sp{0.1, 0.1, 0.1, 1.0};
  RngStream r(7);
  const Alg1Result res = meb_alg1(inst.points, sp, r);
  CHECK(res.ball.radius == doctest::Approx(res.sample_radius * alg1_expansion(0.1)).epsilon(1e-9));
  CHECK(res.ball.radius <= alg1_lambda(0.1) * inst.truth.optimum_size);
  CHECK(res.log.full_passes == 0);
}

TEST_CASE("test_h edge cases and simplex rates") {
  const PointSet S(regular_simplex(5));
  const double rad = simplex_radius(5);
  StabilityParams sp{0.3, 0.1, 0.05, 1.0};
  const Index z = test_h_rounds(sp.epsilon);

  RngStream r0(8);
  const TestHResult big = test_h(S, 10.0, z, sp, r0);
  CHECK(big.yes);
  CHECK(big.rounds == 1);
  RngStream r1(9);
  CHECK_FALSE(test_h(S, 0.0, z, sp, r1).yes);

  int yes = 0, no = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    RngStream a(2000 + s), b(3000 + s);
    yes += test_h(S, 1.2 * rad, z, sp, a).yes;
    no += !test_h(S, 0.8 * rad, z, sp, b).yes;
  }
  CHECK(yes >= 95);
  CHECK(no >= 95);
}

TEST_CASE("meb_alg2") {
  const PointSet one(RowMatrix::Ones(1, 3));
  RngStream rng(10);
  CHECK(meb_alg2(one, {}, rng).ball.radius == 0.0);

  const PointSet S(regular_simplex(6));
  StabilityParams sp{0.3, 0.2, 0.1, 1.0};
  RngStream r(11);
  const Alg2Result res = meb_alg2(S, sp, r);
  CHECK(res.grid_length == alg2_grid_length(0.3));
  CHECK(res.ball.radius >= simplex_radius(6) * (1.0 - 1e-9));
  CHECK(res.ball.radius <= alg2_lambda(0.3) * simplex_radius(6));
  CHECK(res.log.full_passes == 0);
}
