#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "ncap/grid.hpp"
#include "ncap/io.hpp"
#include "support.hpp"

using namespace ncap;
using nlohmann::json;

TEST_CASE("space files round trip") {
  auto g = build_grid(Region::box({1, 1}, {2, 2}, false), 0.5, ScalarField::radial_power(1), 2);
  auto back = space_from_json(space_to_json(g));
  CHECK(back.content_hash() == g.content_hash());
  CHECK(back.meta().mesh_size == 0.5);
  CHECK(back.meta().dimension == 2);

  auto tmp = std::filesystem::temp_directory_path() / "ncap_io_roundtrip.json";
  write_space(g, tmp.string());
  CHECK(read_space(tmp.string()).content_hash() == g.content_hash());
  std::filesystem::remove(tmp);
}

TEST_CASE("edge weight defaults to one") {
  json j = json::parse(R"({"nodes":[{"id":3,"measure":1},{"id":8,"measure":2}],
                           "edges":[{"a":3,"b":8,"length":0.5}]})");
  auto g = space_from_json(j);
  CHECK(g.edge(0).weight == 1.0);
  CHECK(g.id(1) == 8);
}

TEST_CASE("malformed inputs raise validation errors") {
  CHECK_THROWS_AS(space_from_json(json::parse(R"({"nodes":[{"measure":1}],"edges":[]})")),
                  ValidationError);
  CHECK_THROWS_AS(read_space("/nonexistent/space.json"), ValidationError);
  CHECK_THROWS_AS(parse_region("{not json"), ValidationError);
  CHECK_THROWS_AS(function_from_json(json::parse(R"(["a"])")), ValidationError);
}

TEST_CASE("inline and file set specs agree") {
  auto inline_region = parse_region(R"({"ball":{"center":[0,0],"radius":1},"open":true})");
  auto tmp = std::filesystem::temp_directory_path() / "ncap_io_region.json";
  write_text_file(tmp.string(), inline_region.to_json().dump());
  CHECK(parse_region(tmp.string()).to_json() == inline_region.to_json());
  std::filesystem::remove(tmp);
}

TEST_CASE("capacity JSON") {
  auto g = ncap::test::path(3);
  SolverConfig cfg;
  auto r = variational_capacity(g, NodeSet({0}), NodeSet({0, 1}), cfg);
  auto j = capacity_to_json(r);
  CHECK(j["value"].get<double>() == doctest::Approx(0.5));
  CHECK(j["converged"] == true);
  CHECK(j["echo"]["A_size"] == 1);
  CHECK(j.contains("energy_history_length"));
  CHECK(j["flags"]["A_touches_boundary"] == false);
  auto touching = variational_capacity(g, NodeSet({1}), NodeSet({0, 1}), cfg);
  CHECK(capacity_to_json(touching)["flags"]["A_touches_boundary"] == true);

  CapacityResult inf;
  inf.value = kInfiniteCapacity;
  CHECK(capacity_to_json(inf)["value"] == "inf");
}

TEST_CASE("function arrays") {
  DiscreteFunction u({0.0, 0.25, 1.0});
  auto back = function_from_json(function_to_json(u));
  CHECK(back[1] == 0.25);
}
