#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace ncap {

using NodeIndex = std::size_t;
using EdgeIndex = std::size_t;
using NodeId = std::int64_t;

/// Raised for malformed spaces, sets and inclusion violations.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct NodeData {
  NodeId id = 0;
  double measure = 1.0;
  std::vector<double> position;  // empty when the node carries no coordinates
};

/// Edge input; endpoints are node ids, not indices.
struct EdgeData {
  NodeId a = 0;
  NodeId b = 0;
  double length = 1.0;
  double weight = 1.0;
};

struct SpaceMeta {
  std::optional<int> dimension;
  std::optional<double> mesh_size;
};

struct Edge {
  NodeIndex a;
  NodeIndex b;
  double length;
  double weight;  // energy weight
};

struct Incidence {
  NodeIndex neighbor;
  EdgeIndex edge;
};

/// A discretized metric measure space: weighted nodes joined by edges with
/// positive lengths and energy weights. Immutable once built.
class MetricMeasureGraph {
 public:
  /// Validates every invariant and throws ValidationError on the first
  /// violation (duplicate ids, nonpositive data, dangling or repeated edges,
  /// lengths inconsistent with positions).
  static MetricMeasureGraph build(std::vector<NodeData> nodes,
                                  std::vector<EdgeData> edges,
                                  SpaceMeta meta = {});

  std::size_t num_nodes() const { return ids_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  NodeId id(NodeIndex v) const { return ids_[v]; }
  std::optional<NodeIndex> index_of(NodeId id) const;
  double measure(NodeIndex v) const { return measures_[v]; }
  std::span<const double> measures() const { return measures_; }

  bool has_positions() const { return dim_ > 0; }
  std::size_t position_dim() const { return dim_; }
  std::span<const double> position(NodeIndex v) const;

  const Edge& edge(EdgeIndex e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Incidence> neighbors(NodeIndex v) const;
  std::size_t degree(NodeIndex v) const { return offsets_[v + 1] - offsets_[v]; }
  std::optional<EdgeIndex> find_edge(NodeIndex a, NodeIndex b) const;

  const SpaceMeta& meta() const { return meta_; }
  double total_measure() const;
  double min_edge_length() const;

  /// FNV-1a over ids, measures, positions and edges; used to echo inputs.
  std::uint64_t content_hash() const;

  /// Copy with every node measure and edge weight multiplied by `factor`.
  MetricMeasureGraph scaled(double factor) const;

  /// Rebuild input records (node order and edge order preserved).
  std::vector<NodeData> node_data() const;
  std::vector<EdgeData> edge_data() const;

 private:
  MetricMeasureGraph() = default;
  void build_adjacency();

  std::vector<NodeId> ids_;
  std::vector<double> measures_;
  std::vector<double> positions_;  // row-major, dim_ per node
  std::size_t dim_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Incidence> incidences_;
  std::unordered_map<NodeId, NodeIndex> index_;
  SpaceMeta meta_;
};

/// Continuum openness carried along with a node set.
enum class Openness { open, closed, unknown };

std::string to_string(Openness o);

/// Sorted, deduplicated set of node indices with an openness tag.
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(std::vector<NodeIndex> members,
                   Openness openness = Openness::unknown);

  static NodeSet all(const MetricMeasureGraph& g,
                     Openness openness = Openness::unknown);

  std::span<const NodeIndex> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(NodeIndex v) const;
  Openness openness() const { return openness_; }
  NodeSet with_openness(Openness o) const;

  bool is_subset_of(const NodeSet& other) const;
  std::vector<char> mask(std::size_t num_nodes) const;

  /// Throws ValidationError when a member is not a node of `g`.
  void check_within(const MetricMeasureGraph& g) const;

  friend bool operator==(const NodeSet& a, const NodeSet& b) {
    return a.members_ == b.members_;
  }

 private:
  std::vector<NodeIndex> members_;
  Openness openness_ = Openness::unknown;
};

NodeSet set_union(const NodeSet& a, const NodeSet& b);
NodeSet set_intersection(const NodeSet& a, const NodeSet& b);
NodeSet set_difference(const NodeSet& a, const NodeSet& b);
NodeSet set_from_mask(const std::vector<char>& mask,
                      Openness openness = Openness::unknown);

// Combinatorial topology.
NodeSet interior(const MetricMeasureGraph& g, const NodeSet& s);
NodeSet closure(const MetricMeasureGraph& g, const NodeSet& s);
/// closure(S) minus interior(S).
NodeSet boundary(const MetricMeasureGraph& g, const NodeSet& s);
/// Nodes of S with a neighbor outside S; the part of boundary(S) inside S.
NodeSet inner_boundary(const MetricMeasureGraph& g, const NodeSet& s);

/// S is closed when it already contains every node whose neighbors all lie
/// in S (no enclosed holes).
bool is_combinatorially_closed(const MetricMeasureGraph& g, const NodeSet& s);
/// Smallest superset of S that is combinatorially closed.
NodeSet closed_hull(const MetricMeasureGraph& g, const NodeSet& s);
/// G is relatively open in E when each node of G has all its E-neighbors in G.
bool is_relatively_open(const MetricMeasureGraph& g, const NodeSet& set,
                        const NodeSet& within);

/// Nodes at distance strictly less than `eps` from S. Euclidean distance
/// when the graph has positions, shortest-path distance otherwise. The
/// result is tagged open.
NodeSet dilate(const MetricMeasureGraph& g, const NodeSet& s, double eps);

/// Shortest-path distances from the set (Dijkstra over edge lengths).
std::vector<double> graph_distance(const MetricMeasureGraph& g,
                                   const NodeSet& sources);

enum class Monotonicity { increasing, decreasing, none };

struct SetFamily {
  std::vector<NodeSet> sets;
  Monotonicity tag = Monotonicity::none;

  /// Throws ValidationError when the tag does not hold.
  void validate() const;
};

/// Induced subgraph together with the index maps between the two graphs.
struct Restriction {
  MetricMeasureGraph graph;
  std::vector<NodeIndex> to_parent;                  // child index -> parent
  std::vector<std::optional<NodeIndex>> to_child;    // parent index -> child

  /// Map a parent-graph set into the child; throws if a member was dropped.
  NodeSet map_into(const NodeSet& parent_set) const;
};

Restriction restrict_ambient(const MetricMeasureGraph& g, const NodeSet& keep);

}  // namespace ncap
