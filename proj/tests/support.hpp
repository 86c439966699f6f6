#pragma once

#include <vector>

#include "ncap/space.hpp"

namespace ncap::test {

// Path v0 - v1 - ... - v{n-1} with unit lengths.
inline MetricMeasureGraph path(std::size_t n, std::vector<double> weights = {},
                               std::vector<double> measures = {}) {
  std::vector<NodeData> nodes;
  for (std::size_t i = 0; i < n; ++i)
    nodes.push_back({static_cast<NodeId>(i), measures.empty() ? 1.0 : measures[i], {}});
  std::vector<EdgeData> edges;
  for (std::size_t i = 0; i + 1 < n; ++i)
    edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(i + 1), 1.0,
                     weights.empty() ? 1.0 : weights[i]});
  return MetricMeasureGraph::build(std::move(nodes), std::move(edges));
}

inline NodeSet nodes(std::vector<NodeIndex> v) { return NodeSet(std::move(v)); }

}  // namespace ncap::test
