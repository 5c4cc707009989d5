#include <catch2/catch_amalgamated.hpp>

#include "logbm/bodies.hpp"
#include "logbm/measure.hpp"
#include "test_support.hpp"

using namespace logbm;
using Catch::Approx;

TEST_CASE("make_box basics") {
  Body sq = make_box({1.0, 1.0});
  CHECK(volume_exact(sq) == Approx(4.0));
  CHECK(sq.support({1.0, 0.0}) == Approx(1.0));
  CHECK(sq.support({1.0, 1.0}) == Approx(2.0));

  Body k0 = make_box({0.25, 2.0, 2.0});
  CHECK(volume_exact(k0) == Approx(8.0));

  CHECK_THROWS_AS(make_box({1.0, 0.0}), invalid_parameter);
  CHECK_THROWS_AS(make_box({-1.0}), invalid_parameter);
}

TEST_CASE("make_cross basics") {
  Body diamond = make_cross({1.0, 1.0});
  CHECK(volume_exact(diamond) == Approx(2.0));
  Body octa = make_cross({1.0, 1.0, 1.0});
  CHECK(volume_exact(octa) == Approx(4.0 / 3.0));
  Body stretched = make_cross({2.0, 1.0});
  CHECK(stretched.support({1.0, 0.0}) == Approx(2.0));
  CHECK_THROWS_AS(make_cross({1.0, -2.0}), invalid_parameter);
}

TEST_CASE("contains examples") {
  Body sq = make_box({1.0, 1.0});
  CHECK(sq.contains({0.5, -0.9}));
  CHECK_FALSE(sq.contains({1.0001, 0.0}));
  Body octa = make_cross({1.0, 1.0, 1.0});
  CHECK(octa.contains({1.0 / 3, 1.0 / 3, 1.0 / 3}));  // boundary point
}

TEST_CASE("cut_corners") {
  Body sq = make_box({1.0, 1.0});
  Body oct = cut_corners(sq, 0.5);
  CHECK(volume_exact(oct) == Approx(3.5));

  // independent Monte-Carlo oracle, plain loop
  std::mt19937_64 eng(99);
  long long hits = 0, total = 200000;
  for (long long s = 0; s < total; ++s) {
    double x = 2.0 * double(eng() >> 11) * 0x1.0p-53 - 1.0;
    double y = 2.0 * double(eng() >> 11) * 0x1.0p-53 - 1.0;
    if (oct.contains({x, y})) ++hits;
  }
  double est = 4.0 * double(hits) / double(total);
  double sigma = 4.0 * std::sqrt(0.875 * 0.125 / double(total));
  CHECK(std::fabs(est - 3.5) < 3.0 * sigma + 1e-9);

  // depth -> 0 recovers the box volume
  Body tiny = cut_corners(sq, 1e-6);
  CHECK(volume_exact(tiny) == Approx(4.0).margin(1e-10));

  CHECK_THROWS_AS(cut_corners(sq, 1.5), invalid_parameter);
  CHECK_THROWS_AS(cut_corners(make_cross({1.0, 1.0}), 0.5), invalid_parameter);
}

TEST_CASE("direct_sum") {
  Body seg1 = make_box({1.0});
  Body seg2 = make_box({2.0});
  Body sum = direct_sum({{seg1, {0}}, {seg2, {1}}});
  CHECK(sum.support({1.0, 0.0}) == Approx(1.0));
  CHECK(sum.support({0.0, 1.0}) == Approx(2.0));
  CHECK(sum.contains({0.9, -1.9}));
  CHECK_FALSE(sum.contains({1.1, 0.0}));
  CHECK(volume_exact(sum) == Approx(8.0));

  Body diamond = make_cross({1.0, 1.0});
  Body mix = direct_sum({{diamond, {0, 1}}, {make_box({1.0}), {2}}});
  CHECK(volume_exact(mix) == Approx(4.0));

  CHECK_THROWS_AS(direct_sum({{diamond, {0, 1}}, {make_box({1.0}), {1}}}), invalid_parameter);
}

TEST_CASE("linear_image") {
  Body sq = make_box({1.0, 1.0});
  Mat A = Mat::diagonal({2.0, 3.0});
  Body img = linear_image(sq, A);
  CHECK(volume_exact(img) == Approx(24.0));
  CHECK(img.support({1.0, 0.0}) == Approx(2.0));
  CHECK(bodies_equal(img, make_box({2.0, 3.0})));

  Body octa = make_cross({1.0, 1.0, 1.0});
  CHECK(bodies_equal(linear_image(octa, Mat::identity(3)), octa));
  Mat P(3, 3);
  P(0, 1) = 1;
  P(1, 2) = 1;
  P(2, 0) = 1;
  CHECK(bodies_equal(linear_image(octa, P), octa));

  Mat S(2, 2);
  S(0, 0) = 1.0;
  S(0, 1) = 1.0;
  S(1, 0) = 1.0;
  S(1, 1) = 1.0;
  CHECK_THROWS_AS(linear_image(sq, S), invalid_parameter);
}

TEST_CASE("unconditional_closure") {
  Body box = make_box({1.0, 2.0});
  CHECK(bodies_equal(unconditional_closure(box), box));

  // orthant piece = triangle conv{0, 2e1, 2e2}: closure is the diamond
  Body tri = make_vpolytope({{2.0, 0.0}, {0.0, 2.0}, {-0.5, -0.5}}, 2);
  // use a body whose orthant piece is down-closed: the diamond scaled by 2
  Body target = make_cross({2.0, 2.0});
  Body closed = unconditional_closure(target);
  CHECK(bodies_equal(closed, target));

  // brute-force grid oracle for the triangle's closure
  Body closure = detail::unconditional_from_orthant_cloud({{2.0, 0.0}, {0.0, 2.0}}, 2);
  for (double x = -2.2; x <= 2.2; x += 0.13) {
    for (double y = -2.2; y <= 2.2; y += 0.13) {
      bool expect = std::fabs(x) / 2 + std::fabs(y) / 2 <= 1.0 + 1e-9;
      CHECK(closure.contains({x, y}) == expect);
    }
  }

  // not down-closed: a shifted body fails the precondition
  Body skew = make_vpolytope({{1.0, 1.0}, {-1.0, 0.2}, {0.2, -1.0}, {-0.4, -0.4}}, 2);
  CHECK_THROWS_AS(unconditional_closure(skew), precondition_violation);
  (void)tri;
}

TEST_CASE("support homogeneity across variants") {
  auto bodies = test_bodies_sample();
  Rng rng(42);
  for (const Body& b : bodies) {
    for (int k = 0; k < 20; ++k) {
      Vec u = rng.unit_vector(b.dim());
      double t = rng.uniform(0.1, 5.0);
      double lhs = b.support(t * u);
      double rhs = t * b.support(u);
      CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, std::fabs(rhs)));
    }
  }
}

TEST_CASE("support subadditivity on polytopes") {
  Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    Body P = random_symmetric_polytope(3, 6, rng);
    for (int k = 0; k < 50; ++k) {
      Vec u = rng.unit_vector(3), v = rng.unit_vector(3);
      CHECK(P.support(u + v) <= P.support(u) + P.support(v) + 1e-12);
    }
  }
}

TEST_CASE("H-V round trip") {
  Rng rng(44);
  for (int n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 6; ++trial) {
      Body P = random_symmetric_polytope(n, n + 3, rng);
      const PolytopeData* pd = P.as_polytope();
      REQUIRE(pd);
      Body V = make_vpolytope(pd->vertices, n);
      Body H = make_hpolytope(V.as_polytope()->halfspaces, n);
      CHECK(bodies_equal(H, P));
    }
  }
}

TEST_CASE("oracle consistency on polytopes") {
  Rng rng(45);
  Body P = random_symmetric_polytope(3, 7, rng);
  const PolytopeData* pd = P.as_polytope();
  Vec hw = P.bounding_halfwidths();
  for (int k = 0; k < 1000; ++k) {
    Vec x = rng.point_in_box(1.2 * hw);
    double worst = -1e300;
    for (const auto& h : pd->halfspaces) worst = std::max(worst, dot(x, h.u) - h.b);
    CHECK(P.contains(x) == (worst <= geom::kMembershipSlack));
  }
}

TEST_CASE("direct sum volume multiplicativity") {
  Rng rng(46);
  Body A = random_symmetric_polytope(2, 5, rng);
  Body B = random_symmetric_polytope(2, 5, rng);
  Body sum = direct_sum({{A, {0, 1}}, {B, {2, 3}}});
  MCEstimate mc = volume_mc(sum, 200000, 7);
  double expect = volume_exact(A) * volume_exact(B);
  CHECK(std::fabs(mc.value - expect) <= 3.0 * mc.stderr_ + 1e-9);
  CHECK(volume_exact(sum) == Approx(expect));
}
