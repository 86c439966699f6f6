#include <cmath>

#include "doctest.h"
#include "ncap/grid.hpp"
#include "ncap/region.hpp"

using namespace ncap;

TEST_CASE("unit square at h = 0.5") {
  auto g = build_grid(Region::box({0, 0}, {1, 1}, false), 0.5, ScalarField::constant(1), 2);
  CHECK(g.num_nodes() == 9);
  CHECK(g.num_edges() == 12);
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) CHECK(g.measure(v) == doctest::Approx(0.25));
  for (const auto& e : g.edges()) {
    CHECK(e.length == doctest::Approx(0.5));
    CHECK(e.weight == doctest::Approx(0.25));
  }
  REQUIRE(g.meta().mesh_size.has_value());
  CHECK(*g.meta().mesh_size == 0.5);
  CHECK(g.meta().dimension == 2);
}

TEST_CASE("annulus rasterization matches a brute-force lattice count") {
  const double h = 1.0 / 64;
  const double R = std::exp(1.0);
  auto annulus = Region::subtract(Region::ball({0, 0}, R, true), Region::ball({0, 0}, 1.0, true));
  auto g = build_grid(annulus, h, ScalarField::constant(1), 2);

  std::size_t count = 0;
  const int k = static_cast<int>(std::ceil(R / h)) + 1;
  for (int i = -k; i <= k; ++i)
    for (int j = -k; j <= k; ++j) {
      double r2 = (i * h) * (i * h) + (j * h) * (j * h);
      if (r2 >= 1.0 && r2 < R * R) ++count;
    }
  CHECK(g.num_nodes() == count);
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
    CHECK(g.degree(v) >= 2);
    CHECK(g.degree(v) <= 4);
  }
}

TEST_CASE("weighted lattice samples the field at nodes and midpoints") {
  auto g = build_grid(Region::box({1, 0}, {2, 0}, false), 0.5, ScalarField::radial_power(2), 2);
  // Nodes at x = 1, 1.5, 2 on the segment y = 0 (n = 2 so h^n = 0.25).
  REQUIRE(g.num_nodes() == 3);
  CHECK(g.measure(0) == doctest::Approx(1.0 * 0.25));
  CHECK(g.measure(2) == doctest::Approx(4.0 * 0.25));
  REQUIRE(g.num_edges() == 2);
  CHECK(g.edge(0).weight == doctest::Approx(1.25 * 1.25 * 0.25));
}

TEST_CASE("rasterization errors") {
  auto w = ScalarField::constant(1);
  CHECK_THROWS_WITH_AS(build_grid(Region::ball({0.5, 0.5}, 0.1, true), 1.0, w, 2)
                           .num_nodes(),
                       doctest::Contains("empty rasterization"), ValidationError);
  CHECK_THROWS_AS(build_grid(Region::box({0, 0}, {1, 1}, false), 0.0, w, 2), ValidationError);
  CHECK_THROWS_AS(build_grid(Region::halfspace({1, 0}, 0, false), 0.5, w, 2), ValidationError);
  CHECK_THROWS_AS(build_grid(Region::box({0, 0}, {1, 1}, false), 0.5, ScalarField::constant(-1), 2),
                  ValidationError);
}

TEST_CASE("weight field specs") {
  double pt[2] = {3.0, 4.0};
  CHECK(ScalarField::parse("const:2.5").eval(pt) == 2.5);
  CHECK(ScalarField::parse("power:2").eval(pt) == doctest::Approx(25.0));
  CHECK_THROWS_AS(ScalarField::parse("cubic:1"), ValidationError);
}

TEST_CASE("region predicates") {
  auto ball = Region::ball({0, 0}, 1.0, true);
  double on[2] = {1.0, 0.0};
  double in[2] = {0.5, 0.0};
  CHECK_FALSE(ball.contains_point(on));
  CHECK(ball.contains_point(in));
  CHECK(Region::ball({0, 0}, 1.0, false).contains_point(on));
  CHECK(ball.openness() == Openness::open);
  CHECK(Region::box({0, 0}, {1, 1}, false).openness() == Openness::closed);

  auto half = Region::halfspace({1, 0}, 0.0, true);  // x < 0
  double left[2] = {-0.1, 5.0};
  CHECK(half.contains_point(left));
  CHECK_FALSE(half.contains_point(on));

  auto diff = Region::subtract(Region::box({-1, -1}, {1, 1}, false), ball);
  CHECK(diff.contains_point(on));
  CHECK_FALSE(diff.contains_point(in));

  CHECK_THROWS_AS(Region::list({1}).contains_point(in), ValidationError);
  CHECK_FALSE(Region::intersect({ball, half}).contains_point(in));
}

TEST_CASE("region JSON round trip") {
  auto r = Region::unite({Region::ball({0, 0}, 1.0, true),
                          Region::subtract(Region::box({0, 0}, {2, 1}, false), Region::list({3}))});
  auto back = Region::from_json(r.to_json());
  CHECK(back.to_json() == r.to_json());
  CHECK_THROWS_AS(Region::from_json(nlohmann::json{{"sphere", 1}}), ValidationError);
}

TEST_CASE("id lists resolve against the graph") {
  auto g = build_grid(Region::box({0, 0}, {1, 1}, false), 0.5, ScalarField::constant(1), 2);
  auto s = Region::list({0, 4}).evaluate(g);
  CHECK(s.size() == 2);
  CHECK_THROWS_AS(Region::list({99}).evaluate(g), ValidationError);
  CHECK(Region::all().evaluate(g).size() == 9);
}
