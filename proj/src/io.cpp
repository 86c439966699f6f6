#include "ncap/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace ncap {

using nlohmann::json;

json space_to_json(const MetricMeasureGraph& g) {
  json nodes = json::array();
  for (const auto& n : g.node_data()) {
    json j{{"id", n.id}, {"measure", n.measure}};
    if (!n.position.empty()) j["pos"] = n.position;
    nodes.push_back(std::move(j));
  }
  json edges = json::array();
  for (const auto& e : g.edge_data())
    edges.push_back({{"a", e.a}, {"b", e.b}, {"length", e.length}, {"weight", e.weight}});
  json meta = json::object();
  if (g.meta().mesh_size) meta["h"] = *g.meta().mesh_size;
  if (g.meta().dimension) meta["dim"] = *g.meta().dimension;
  return json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}, {"meta", meta}};
}

MetricMeasureGraph space_from_json(const json& j) {
  try {
    std::vector<NodeData> nodes;
    for (const auto& n : j.at("nodes")) {
      NodeData d;
      d.id = n.at("id").get<NodeId>();
      d.measure = n.at("measure").get<double>();
      if (n.contains("pos")) d.position = n.at("pos").get<std::vector<double>>();
      nodes.push_back(std::move(d));
    }
    std::vector<EdgeData> edges;
    for (const auto& e : j.at("edges")) {
      EdgeData d;
      d.a = e.at("a").get<NodeId>();
      d.b = e.at("b").get<NodeId>();
      d.length = e.at("length").get<double>();
      d.weight = e.value("weight", 1.0);
      edges.push_back(d);
    }
    SpaceMeta meta;
    if (j.contains("meta")) {
      const auto& m = j.at("meta");
      if (m.contains("h")) meta.mesh_size = m.at("h").get<double>();
      if (m.contains("dim")) meta.dimension = m.at("dim").get<int>();
    }
    return MetricMeasureGraph::build(std::move(nodes), std::move(edges), meta);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed space file: ") + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("malformed JSON in " + path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
}

MetricMeasureGraph read_space(const std::string& path) {
  return space_from_json(read_json_file(path));
}

void write_space(const MetricMeasureGraph& g, const std::string& path) {
  write_text_file(path, space_to_json(g).dump() + "\n");
}

Region parse_region(const std::string& inline_or_path) {
  auto first = inline_or_path.find_first_not_of(" \t\n");
  if (first != std::string::npos && inline_or_path[first] == '{') {
    try {
      return Region::from_json(json::parse(inline_or_path));
    } catch (const json::exception& e) {
      throw ValidationError(std::string("malformed set spec: ") + e.what());
    }
  }
  return Region::from_json(read_json_file(inline_or_path));
}

json function_to_json(const DiscreteFunction& u) {
  return json(std::vector<double>(u.values().begin(), u.values().end()));
}

json function_to_json(const EdgeFunction& g) {
  return json(std::vector<double>(g.values().begin(), g.values().end()));
}

DiscreteFunction function_from_json(const json& j) {
  try {
    return DiscreteFunction(j.get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed function array: ") + e.what());
  }
}

json capacity_to_json(const CapacityResult& r) {
  json j;
  if (std::isfinite(r.value))
    j["value"] = r.value;
  else
    j["value"] = "inf";
  j["converged"] = r.diagnostics.converged;
  j["iterations"] = r.diagnostics.iterations;
  j["kkt"] = r.diagnostics.final_kkt;
  j["energy_history_length"] = r.diagnostics.energy_history.size();
  j["flags"] = {{"A_touches_boundary", r.a_touches_boundary}};
  std::ostringstream hash;
  hash << std::hex << r.echo.space_hash;
  j["echo"] = {{"A_size", r.echo.a_size},
               {"E_size", r.echo.e_size},
               {"p", r.echo.p},
               {"space_hash", hash.str()}};
  if (r.attained_by) j["attained_by"] = *r.attained_by;
  return j;
}

}  // namespace ncap
