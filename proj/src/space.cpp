#include "ncap/space.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <unordered_set>
#include <utility>

namespace ncap {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

std::string id_str(NodeId id) { return std::to_string(id); }

struct Fnv {
  std::uint64_t h = 1469598103934665603ULL;
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  }
  template <typename T>
  void value(const T& v) {
    bytes(&v, sizeof(T));
  }
};

}  // namespace

MetricMeasureGraph MetricMeasureGraph::build(std::vector<NodeData> nodes,
                                             std::vector<EdgeData> edges,
                                             SpaceMeta meta) {
  MetricMeasureGraph g;
  g.meta_ = meta;
  if (meta.mesh_size && !positive_finite(*meta.mesh_size))
    throw ValidationError("mesh size must be positive");

  g.ids_.reserve(nodes.size());
  g.measures_.reserve(nodes.size());
  std::size_t dim = nodes.empty() ? 0 : nodes.front().position.size();
  for (const auto& n : nodes) {
    if (!g.index_.emplace(n.id, g.ids_.size()).second)
      throw ValidationError("duplicate node id " + id_str(n.id));
    if (!positive_finite(n.measure))
      throw ValidationError("node " + id_str(n.id) +
                            " has nonpositive measure");
    if (n.position.size() != dim)
      throw ValidationError("node " + id_str(n.id) +
                            " position dimension mismatch");
    for (double x : n.position)
      if (!std::isfinite(x))
        throw ValidationError("node " + id_str(n.id) + " has a non-finite position");
    g.ids_.push_back(n.id);
    g.measures_.push_back(n.measure);
    g.positions_.insert(g.positions_.end(), n.position.begin(),
                        n.position.end());
  }
  g.dim_ = dim;

  std::set<std::pair<NodeIndex, NodeIndex>> seen;
  g.edges_.reserve(edges.size());
  for (const auto& e : edges) {
    auto ia = g.index_of(e.a);
    auto ib = g.index_of(e.b);
    if (!ia || !ib)
      throw ValidationError("edge (" + id_str(e.a) + "," + id_str(e.b) +
                            ") references a missing node");
    if (*ia == *ib)
      throw ValidationError("edge (" + id_str(e.a) + "," + id_str(e.b) +
                            ") is a self-loop");
    if (!positive_finite(e.length))
      throw ValidationError("edge (" + id_str(e.a) + "," + id_str(e.b) +
                            ") has nonpositive length");
    if (!positive_finite(e.weight))
      throw ValidationError("edge (" + id_str(e.a) + "," + id_str(e.b) +
                            ") has nonpositive weight");
    auto key = std::minmax(*ia, *ib);
    if (!seen.insert(key).second)
      throw ValidationError("duplicate edge (" + id_str(e.a) + "," +
                            id_str(e.b) + ")");
    g.edges_.push_back(Edge{*ia, *ib, e.length, e.weight});
  }

  if (g.dim_ > 0) {
    for (const auto& e : g.edges_) {
      auto pa = g.position(e.a);
      auto pb = g.position(e.b);
      double d2 = 0.0;
      for (std::size_t k = 0; k < g.dim_; ++k) d2 += (pa[k] - pb[k]) * (pa[k] - pb[k]);
      double d = std::sqrt(d2);
      if (std::abs(d - e.length) > 1e-12 * std::max(d, e.length))
        throw ValidationError("edge (" + id_str(g.ids_[e.a]) + "," +
                              id_str(g.ids_[e.b]) +
                              ") length disagrees with endpoint distance");
    }
  }

  g.build_adjacency();
  return g;
}

void MetricMeasureGraph::build_adjacency() {
  const std::size_t n = ids_.size();
  offsets_.assign(n + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.a + 1];
    ++offsets_[e.b + 1];
  }
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] += offsets_[v];
  incidences_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (EdgeIndex i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    incidences_[fill[e.a]++] = Incidence{e.b, i};
    incidences_[fill[e.b]++] = Incidence{e.a, i};
  }
}

std::optional<NodeIndex> MetricMeasureGraph::index_of(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const double> MetricMeasureGraph::position(NodeIndex v) const {
  return std::span<const double>(positions_).subspan(v * dim_, dim_);
}

std::span<const Incidence> MetricMeasureGraph::neighbors(NodeIndex v) const {
  return std::span<const Incidence>(incidences_)
      .subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
}

std::optional<EdgeIndex> MetricMeasureGraph::find_edge(NodeIndex a,
                                                       NodeIndex b) const {
  if (a >= num_nodes() || b >= num_nodes()) return std::nullopt;
  for (const auto& inc : neighbors(a))
    if (inc.neighbor == b) return inc.edge;
  return std::nullopt;
}

double MetricMeasureGraph::total_measure() const {
  double s = 0.0;
  for (double m : measures_) s += m;
  return s;
}

double MetricMeasureGraph::min_edge_length() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : edges_) m = std::min(m, e.length);
  return m;
}

std::uint64_t MetricMeasureGraph::content_hash() const {
  Fnv f;
  f.value(ids_.size());
  for (std::size_t v = 0; v < ids_.size(); ++v) {
    f.value(ids_[v]);
    f.value(measures_[v]);
  }
  f.value(dim_);
  for (double x : positions_) f.value(x);
  f.value(edges_.size());
  for (const auto& e : edges_) {
    f.value(e.a);
    f.value(e.b);
    f.value(e.length);
    f.value(e.weight);
  }
  return f.h;
}

MetricMeasureGraph MetricMeasureGraph::scaled(double factor) const {
  if (!positive_finite(factor))
    throw ValidationError("scale factor must be positive");
  MetricMeasureGraph g = *this;
  for (double& m : g.measures_) m *= factor;
  for (auto& e : g.edges_) e.weight *= factor;
  return g;
}

std::vector<NodeData> MetricMeasureGraph::node_data() const {
  std::vector<NodeData> out(num_nodes());
  for (NodeIndex v = 0; v < num_nodes(); ++v) {
    out[v].id = ids_[v];
    out[v].measure = measures_[v];
    auto p = position(v);
    out[v].position.assign(p.begin(), p.end());
  }
  return out;
}

std::vector<EdgeData> MetricMeasureGraph::edge_data() const {
  std::vector<EdgeData> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_)
    out.push_back(EdgeData{ids_[e.a], ids_[e.b], e.length, e.weight});
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(Openness o) {
  switch (o) {
    case Openness::open:
      return "open";
    case Openness::closed:
      return "closed";
    case Openness::unknown:
      break;
  }
  return "unknown";
}

NodeSet::NodeSet(std::vector<NodeIndex> members, Openness openness)
    : members_(std::move(members)), openness_(openness) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

NodeSet NodeSet::all(const MetricMeasureGraph& g, Openness openness) {
  std::vector<NodeIndex> m(g.num_nodes());
  for (NodeIndex v = 0; v < m.size(); ++v) m[v] = v;
  return NodeSet(std::move(m), openness);
}

bool NodeSet::contains(NodeIndex v) const {
  return std::binary_search(members_.begin(), members_.end(), v);
}

NodeSet NodeSet::with_openness(Openness o) const {
  NodeSet s = *this;
  s.openness_ = o;
  return s;
}

bool NodeSet::is_subset_of(const NodeSet& other) const {
  return std::includes(other.members_.begin(), other.members_.end(),
                       members_.begin(), members_.end());
}

std::vector<char> NodeSet::mask(std::size_t num_nodes) const {
  std::vector<char> m(num_nodes, 0);
  for (NodeIndex v : members_)
    if (v < num_nodes) m[v] = 1;
  return m;
}

void NodeSet::check_within(const MetricMeasureGraph& g) const {
  if (!members_.empty() && members_.back() >= g.num_nodes())
    throw ValidationError("node set references node index " +
                          std::to_string(members_.back()) +
                          " outside the graph");
}

NodeSet set_union(const NodeSet& a, const NodeSet& b) {
  std::vector<NodeIndex> out;
  std::set_union(a.members().begin(), a.members().end(), b.members().begin(),
                 b.members().end(), std::back_inserter(out));
  Openness o = Openness::unknown;
  if (a.openness() == b.openness()) o = a.openness();
  return NodeSet(std::move(out), o);
}

NodeSet set_intersection(const NodeSet& a, const NodeSet& b) {
  std::vector<NodeIndex> out;
  std::set_intersection(a.members().begin(), a.members().end(),
                        b.members().begin(), b.members().end(),
                        std::back_inserter(out));
  Openness o = Openness::unknown;
  if (a.openness() == b.openness()) o = a.openness();
  return NodeSet(std::move(out), o);
}

NodeSet set_difference(const NodeSet& a, const NodeSet& b) {
  std::vector<NodeIndex> out;
  std::set_difference(a.members().begin(), a.members().end(),
                      b.members().begin(), b.members().end(),
                      std::back_inserter(out));
  Openness o = Openness::unknown;
  if (a.openness() == Openness::open && b.openness() == Openness::closed)
    o = Openness::open;
  else if (a.openness() == Openness::closed && b.openness() == Openness::open)
    o = Openness::closed;
  return NodeSet(std::move(out), o);
}

NodeSet set_from_mask(const std::vector<char>& mask, Openness openness) {
  std::vector<NodeIndex> out;
  for (NodeIndex v = 0; v < mask.size(); ++v)
    if (mask[v]) out.push_back(v);
  return NodeSet(std::move(out), openness);
}

NodeSet interior(const MetricMeasureGraph& g, const NodeSet& s) {
  s.check_within(g);
  auto in = s.mask(g.num_nodes());
  std::vector<NodeIndex> out;
  for (NodeIndex v : s.members()) {
    bool inside = true;
    for (const auto& inc : g.neighbors(v))
      if (!in[inc.neighbor]) {
        inside = false;
        break;
      }
    if (inside) out.push_back(v);
  }
  return NodeSet(std::move(out), Openness::open);
}

NodeSet closure(const MetricMeasureGraph& g, const NodeSet& s) {
  s.check_within(g);
  auto in = s.mask(g.num_nodes());
  for (NodeIndex v : s.members())
    for (const auto& inc : g.neighbors(v)) in[inc.neighbor] = 1;
  return set_from_mask(in, Openness::closed);
}

NodeSet boundary(const MetricMeasureGraph& g, const NodeSet& s) {
  return set_difference(closure(g, s), interior(g, s))
      .with_openness(Openness::closed);
}

NodeSet inner_boundary(const MetricMeasureGraph& g, const NodeSet& s) {
  return set_difference(s, interior(g, s)).with_openness(Openness::unknown);
}

bool is_combinatorially_closed(const MetricMeasureGraph& g, const NodeSet& s) {
  return closed_hull(g, s).size() == s.size();
}

NodeSet closed_hull(const MetricMeasureGraph& g, const NodeSet& s) {
  s.check_within(g);
  auto in = s.mask(g.num_nodes());
  // Filling a hole can enclose another one, so iterate to a fixed point.
  bool changed = true;
  while (changed) {
    changed = false;
    for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
      if (in[v] || g.degree(v) == 0) continue;
      bool surrounded = true;
      for (const auto& inc : g.neighbors(v))
        if (!in[inc.neighbor]) {
          surrounded = false;
          break;
        }
      if (surrounded) {
        in[v] = 1;
        changed = true;
      }
    }
  }
  return set_from_mask(in, s.openness());
}

bool is_relatively_open(const MetricMeasureGraph& g, const NodeSet& set,
                        const NodeSet& within) {
  set.check_within(g);
  auto in_set = set.mask(g.num_nodes());
  auto in_within = within.mask(g.num_nodes());
  for (NodeIndex v : set.members()) {
    if (!in_within[v]) return false;
    for (const auto& inc : g.neighbors(v))
      if (in_within[inc.neighbor] && !in_set[inc.neighbor]) return false;
  }
  return true;
}

std::vector<double> graph_distance(const MetricMeasureGraph& g,
                                   const NodeSet& sources) {
  sources.check_within(g);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.num_nodes(), inf);
  using Item = std::pair<double, NodeIndex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (NodeIndex v : sources.members()) {
    dist[v] = 0.0;
    heap.emplace(0.0, v);
  }
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (const auto& inc : g.neighbors(v)) {
      double nd = d + g.edge(inc.edge).length;
      if (nd < dist[inc.neighbor]) {
        dist[inc.neighbor] = nd;
        heap.emplace(nd, inc.neighbor);
      }
    }
  }
  return dist;
}

namespace {

// Euclidean dilation using a uniform bucket grid of cell size eps.
NodeSet euclidean_dilation(const MetricMeasureGraph& g, const NodeSet& s,
                           double eps) {
  const std::size_t dim = g.position_dim();
  struct KeyHash {
    std::size_t operator()(const std::vector<long long>& k) const {
      std::size_t h = 1469598103934665603ULL;
      for (long long x : k) {
        h ^= static_cast<std::size_t>(x);
        h *= 1099511628211ULL;
      }
      return h;
    }
  };
  std::unordered_map<std::vector<long long>, std::vector<NodeIndex>, KeyHash>
      buckets;
  auto cell_of = [&](std::span<const double> p) {
    std::vector<long long> k(dim);
    for (std::size_t i = 0; i < dim; ++i)
      k[i] = static_cast<long long>(std::floor(p[i] / eps));
    return k;
  };
  for (NodeIndex v : s.members()) buckets[cell_of(g.position(v))].push_back(v);

  auto in = s.mask(g.num_nodes());
  const double eps2 = eps * eps;
  std::vector<long long> probe(dim);
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
    if (in[v]) continue;
    auto p = g.position(v);
    auto base = cell_of(p);
    bool hit = false;
    // Visit the 3^dim neighboring cells.
    std::size_t combos = 1;
    for (std::size_t i = 0; i < dim; ++i) combos *= 3;
    for (std::size_t c = 0; c < combos && !hit; ++c) {
      std::size_t r = c;
      for (std::size_t i = 0; i < dim; ++i) {
        probe[i] = base[i] + static_cast<long long>(r % 3) - 1;
        r /= 3;
      }
      auto it = buckets.find(probe);
      if (it == buckets.end()) continue;
      for (NodeIndex w : it->second) {
        auto q = g.position(w);
        double d2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) d2 += (p[i] - q[i]) * (p[i] - q[i]);
        if (d2 < eps2) {
          hit = true;
          break;
        }
      }
    }
    if (hit) in[v] = 1;
  }
  return set_from_mask(in, Openness::open);
}

}  // namespace

NodeSet dilate(const MetricMeasureGraph& g, const NodeSet& s, double eps) {
  if (!(eps > 0.0)) throw ValidationError("dilation radius must be positive");
  s.check_within(g);
  if (s.empty()) return NodeSet({}, Openness::open);
  if (g.has_positions()) return euclidean_dilation(g, s, eps);
  auto dist = graph_distance(g, s);
  std::vector<char> in(g.num_nodes(), 0);
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) in[v] = dist[v] < eps;
  for (NodeIndex v : s.members()) in[v] = 1;
  return set_from_mask(in, Openness::open);
}

void SetFamily::validate() const {
  for (std::size_t i = 0; i + 1 < sets.size(); ++i) {
    if (tag == Monotonicity::increasing && !sets[i].is_subset_of(sets[i + 1]))
      throw ValidationError("family tagged increasing is not nested at " +
                            std::to_string(i));
    if (tag == Monotonicity::decreasing && !sets[i + 1].is_subset_of(sets[i]))
      throw ValidationError("family tagged decreasing is not nested at " +
                            std::to_string(i));
  }
}

NodeSet Restriction::map_into(const NodeSet& parent_set) const {
  std::vector<NodeIndex> out;
  out.reserve(parent_set.size());
  for (NodeIndex v : parent_set.members()) {
    if (v >= to_child.size() || !to_child[v])
      throw ValidationError("set member " + std::to_string(v) +
                            " is not part of the restricted space");
    out.push_back(*to_child[v]);
  }
  return NodeSet(std::move(out), parent_set.openness());
}

Restriction restrict_ambient(const MetricMeasureGraph& g, const NodeSet& keep) {
  if (keep.empty()) throw ValidationError("ambient restriction to an empty set");
  keep.check_within(g);
  std::vector<std::optional<NodeIndex>> to_child(g.num_nodes());
  std::vector<NodeIndex> to_parent(keep.members().begin(), keep.members().end());
  std::vector<NodeData> nodes;
  nodes.reserve(to_parent.size());
  for (NodeIndex i = 0; i < to_parent.size(); ++i) {
    NodeIndex v = to_parent[i];
    to_child[v] = i;
    auto p = g.position(v);
    nodes.push_back(NodeData{g.id(v), g.measure(v), {p.begin(), p.end()}});
  }
  std::vector<EdgeData> edges;
  for (const auto& e : g.edges())
    if (to_child[e.a] && to_child[e.b])
      edges.push_back(EdgeData{g.id(e.a), g.id(e.b), e.length, e.weight});
  return Restriction{
      MetricMeasureGraph::build(std::move(nodes), std::move(edges), g.meta()),
      std::move(to_parent), std::move(to_child)};
}

}  // namespace ncap
