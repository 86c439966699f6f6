#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ncap/capacity.hpp"
#include "ncap/grid.hpp"
#include "ncap/properties.hpp"
#include "ncap/region.hpp"
#include "support.hpp"

using namespace ncap;
using ncap::test::nodes;
using ncap::test::path;

namespace {

SolverConfig with_p(double p) {
  SolverConfig c;
  c.p = p;
  return c;
}

// Series formula, written out independently of the library oracle.
double series(std::vector<double> w, double p) {
  double s = 0.0;
  for (double x : w) s += std::pow(x, -1.0 / (p - 1.0));
  return std::pow(s, 1.0 - p);
}

}  // namespace

TEST_CASE("capacity of the empty set vanishes") {
  auto fx = grid9_fixture();
  for (double p : {1.5, 2.0, 4.0}) {
    CHECK(variational_capacity(fx.graph, NodeSet{}, fx.E, with_p(p)).value == 0.0);
    CHECK(sobolev_capacity(fx.graph, NodeSet{}, with_p(p)).value == 0.0);
  }
}

TEST_CASE("three-node path capacities") {
  auto g = path(3);
  auto r2 = variational_capacity(g, nodes({0}), nodes({0, 1}), with_p(2));
  CHECK(r2.value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r2.converged());
  CHECK(r2.echo.a_size == 1);
  CHECK(r2.echo.e_size == 2);
  CHECK(r2.echo.space_hash == g.content_hash());
  CHECK(variational_capacity(g, nodes({0}), nodes({0, 1}), with_p(3)).value ==
        doctest::Approx(0.25).epsilon(1e-9));
  CHECK_THROWS_WITH_AS(variational_capacity(g, nodes({2}), nodes({0}), with_p(2)),
                       doctest::Contains("A not contained in E"), ValidationError);
}

TEST_CASE("E covering the whole graph gives zero capacity") {
  auto g = path(4);
  auto r = variational_capacity(g, nodes({1}), NodeSet::all(g), with_p(2));
  CHECK(r.value == doctest::Approx(0.0));
}

TEST_CASE("random series paths match the series formula") {
  std::vector<double> w{0.3, 2.0, 7.5, 1.1};
  auto g = path(5, w);
  std::vector<NodeIndex> e{0, 1, 2, 3};
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    auto r = variational_capacity(g, nodes({0}), NodeSet(e), with_p(p));
    CHECK(r.value == doctest::Approx(series(w, p)).epsilon(1e-9));
  }
}

TEST_CASE("Sobolev capacity examples") {
  std::vector<NodeData> nd{{0, 2.5, {}}, {1, 1.0, {}}, {2, 1.0, {}}};
  auto g = MetricMeasureGraph::build(nd, {{1, 2, 1, 1}});
  CHECK(sobolev_capacity(g, nodes({0}), with_p(2)).value == doctest::Approx(2.5));
  CHECK(sobolev_capacity(g, NodeSet::all(g), with_p(3)).value == doctest::Approx(4.5));
}

TEST_CASE("scaling the measure scales capacities") {
  auto fx = grid9_fixture();
  auto A = Region::box({0.375, 0.375}, {0.625, 0.625}, false).evaluate(fx.graph);
  auto scaled = fx.graph.scaled(3.0);
  for (double p : {1.5, 2.0}) {
    double a = variational_capacity(fx.graph, A, fx.E, with_p(p)).value;
    double b = variational_capacity(scaled, A, fx.E, with_p(p)).value;
    CHECK(b == doctest::Approx(3.0 * a).epsilon(1e-8));
  }
}

TEST_CASE("capacity potentials satisfy the constraints and truncation does not help") {
  auto fx = grid9_fixture();
  auto A = Region::box({0.25, 0.25}, {0.5, 0.5}, false).evaluate(fx.graph);
  for (double p : {1.5, 2.0, 4.0}) {
    auto r = variational_capacity(fx.graph, A, fx.E, with_p(p));
    REQUIRE(r.potential.has_value());
    const auto& u = *r.potential;
    for (NodeIndex v : A.members()) CHECK(u[v] == 1.0);
    auto inE = fx.E.mask(fx.graph.num_nodes());
    for (NodeIndex v = 0; v < fx.graph.num_nodes(); ++v) {
      if (!inE[v]) CHECK(u[v] == 0.0);
      CHECK(u[v] >= -1e-9);
      CHECK(u[v] <= 1.0 + 1e-9);
    }
    double truncated = p_energy(fx.graph, min_upper_gradient(fx.graph, truncate(u, 1.0)), p);
    CHECK(r.value <= truncated + 1e-9);
  }
}

TEST_CASE("annulus capacity approaches 2 pi / ln(R / r)") {
  auto fx = annulus_fixture(1.0 / 64);
  auto r = variational_capacity(fx.graph, fx.A, fx.E, with_p(2));
  double exact = 2.0 * std::numbers::pi;  // ln(e / 1) = 1
  CHECK(std::abs(r.value - exact) / exact <= 0.02);
  CHECK_FALSE(r.a_touches_boundary);
}

TEST_CASE("outer profile") {
  auto fx = grid9_fixture();
  auto A = Region::ball({0.5, 0.5}, 1e-9, false).evaluate(fx.graph);
  const double h = fx.graph.min_edge_length();
  SUBCASE("schedule below the edge length is constant") {
    std::vector<double> eps{0.9 * h, 0.5 * h, 0.1 * h};
    auto prof = outer_capacity_profile(fx.graph, A, fx.E, eps, with_p(2));
    for (double c : prof.capacities) CHECK(c == prof.base);
  }
  SUBCASE("refining schedule is nonincreasing and ends at cap") {
    std::vector<double> eps{4 * h, 2 * h, 0.5 * h};
    auto prof = outer_capacity_profile(fx.graph, A, fx.E, eps, with_p(2));
    CHECK(prof.capacities[1] <= prof.capacities[0]);
    CHECK(prof.capacities[2] <= prof.capacities[1]);
    CHECK(std::abs(prof.limit_estimate - prof.base) <= 1e-9);
  }
  SUBCASE("A = E") {
    std::vector<double> eps{2 * h, 0.5 * h};
    auto prof = outer_capacity_profile(fx.graph, fx.E, fx.E, eps, with_p(2));
    CHECK(prof.capacities[0] == prof.base);
    CHECK(prof.capacities[1] == prof.base);
  }
  SUBCASE("bad schedules") {
    std::vector<double> up{h, 2 * h};
    std::vector<double> none;
    std::vector<double> negative{h, -h};
    CHECK_THROWS_AS(outer_capacity_profile(fx.graph, A, fx.E, up, with_p(2)), ValidationError);
    CHECK_THROWS_AS(outer_capacity_profile(fx.graph, A, fx.E, none, with_p(2)), ValidationError);
    CHECK_THROWS_AS(outer_capacity_profile(fx.graph, A, fx.E, negative, with_p(2)),
                    ValidationError);
  }
}

TEST_CASE("tilde capacity") {
  auto fx = grid9_fixture();
  auto A = Region::box({0.25, 0.25}, {0.5, 0.5}, false).evaluate(fx.graph);
  const double h = fx.graph.min_edge_length();
  auto cap = variational_capacity(fx.graph, A, fx.E, with_p(2));

  SUBCASE("relatively open A alone reproduces cap") {
    auto open_A = relative_dilation(fx.graph, A, fx.E, 0.5 * h);
    std::vector<NodeSet> family{open_A};
    auto t = tilde_capacity(fx.graph, open_A, fx.E, family, with_p(2));
    CHECK(t.value == doctest::Approx(cap.value).epsilon(1e-12));
    CHECK(t.attained_by == std::size_t{0});
  }
  SUBCASE("family {E}") {
    std::vector<NodeSet> family{fx.E.with_openness(Openness::open)};
    auto t = tilde_capacity(fx.graph, A, fx.E, family, with_p(2));
    auto full = variational_capacity(fx.graph, fx.E, fx.E, with_p(2));
    CHECK(t.value == doctest::Approx(full.value));
  }
  SUBCASE("minimum over dilations dominates cap") {
    std::vector<NodeSet> family{relative_dilation(fx.graph, A, fx.E, 2.5 * h),
                                relative_dilation(fx.graph, A, fx.E, 1.5 * h)};
    auto t = tilde_capacity(fx.graph, A, fx.E, family, with_p(2));
    CHECK(t.value >= cap.value - 1e-12);
    CHECK(t.attained_by == std::size_t{1});
  }
  SUBCASE("empty family") {
    std::vector<NodeSet> family;
    CHECK(tilde_capacity(fx.graph, A, fx.E, family, with_p(2)).is_infinite());
  }
  SUBCASE("members must sit between A and E") {
    std::vector<NodeSet> family{NodeSet::all(fx.graph, Openness::open)};
    CHECK_THROWS_AS(tilde_capacity(fx.graph, A, fx.E, family, with_p(2)), ValidationError);
  }
}

TEST_CASE("boundary identity on a closed block") {
  auto fx = grid9_fixture();
  auto F = Region::box({0.25, 0.25}, {0.5, 0.5}, false).evaluate(fx.graph);
  REQUIRE(is_combinatorially_closed(fx.graph, F));
  auto bc = boundary_capacity_check(fx.graph, F, fx.E, with_p(2));
  CHECK(std::abs(bc.cap_f.value - bc.cap_boundary.value) <= 1e-8);
  CHECK(bc.boundary.size() == 8);
  CHECK(bc.pasted_energy <= bc.cap_boundary.value + 1e-12);

  auto single = Region::ball({0.5, 0.5}, 1e-9, false).evaluate(fx.graph);
  auto bs = boundary_capacity_check(fx.graph, single, fx.E, with_p(2));
  CHECK(bs.boundary == single);

  auto ring = set_difference(F, Region::ball({0.375, 0.375}, 1e-9, false).evaluate(fx.graph));
  CHECK_THROWS_WITH_AS(boundary_capacity_check(fx.graph, ring, fx.E, with_p(2)),
                       doctest::Contains("not combinatorially closed"), ValidationError);
}

TEST_CASE("ambient comparison") {
  auto fx = annulus_fixture(1.0 / 16);
  auto all = NodeSet::all(fx.graph);
  auto same = ambient_comparison(fx.graph, all, all, fx.A, fx.E, with_p(2));
  CHECK(same.smaller_ambient.value == doctest::Approx(same.larger_ambient.value));

  // Restricting to the upper half plane removes competitors' constraints
  // below the axis; the condenser sees a smaller capacity.
  auto upper = Region::halfspace({0, -1}, 0.0, false).evaluate(fx.graph);
  auto A = set_intersection(fx.A, upper);
  auto E = set_intersection(fx.E, upper);
  auto cmp = ambient_comparison(fx.graph, upper, all, A, E, with_p(2));
  CHECK(cmp.smaller_ambient.value < cmp.larger_ambient.value);

  CHECK_THROWS_AS(ambient_comparison(fx.graph, all, upper, A, E, with_p(2)), ValidationError);
}

TEST_CASE("radial and path oracles") {
  auto one = [](double) { return 1.0; };
  CHECK(radial_condenser_oracle(1.0, std::exp(1.0), 2.0, 2, one) ==
        doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-12));
  CHECK(radial_condenser_oracle(1.0, 2.0, 2.0, 3, one) ==
        doctest::Approx(8.0 * std::numbers::pi).epsilon(1e-12));
  // Thin shells blow up.
  CHECK(radial_condenser_oracle(1.0, 1.0 + 1e-6, 2.0, 2, one) > 1e6);
  // Closed form for w(s) = s^2, n = 3, p = 3: integrand (4 pi s^4)^(-1/2).
  double closed = std::pow((1.0 - 0.5) / std::sqrt(4.0 * std::numbers::pi), -2.0);
  CHECK(radial_condenser_oracle(1.0, 2.0, 3.0, 3, [](double s) { return s * s; }) ==
        doctest::Approx(closed).epsilon(1e-12));
  CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * std::numbers::pi));

  std::vector<double> two{1.0, 1.0};
  CHECK(path_capacity_oracle(two, 2.0) == doctest::Approx(0.5));
  CHECK(path_capacity_oracle(two, 3.0) == doctest::Approx(0.25));
  std::vector<double> single{3.7};
  CHECK(path_capacity_oracle(single, 2.5) == doctest::Approx(3.7));
}
