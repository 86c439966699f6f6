#include "ncap/region.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace ncap {

struct Region::Impl {
  Kind kind;
  std::vector<double> a;  // center / lo / normal
  std::vector<double> b;  // hi
  double scalar = 0.0;    // radius / offset
  bool open = false;
  std::unordered_set<NodeId> ids;
  std::vector<NodeId> id_list;  // original order for serialization
  std::vector<Region> children;
};

namespace {

void check_dim(std::size_t expected, std::size_t got) {
  if (expected != got)
    throw ValidationError("point dimension " + std::to_string(got) +
                          " does not match predicate dimension " +
                          std::to_string(expected));
}

Openness combine(Openness a, Openness b) {
  return a == b ? a : Openness::unknown;
}

}  // namespace

Region Region::ball(std::vector<double> center, double radius, bool open) {
  if (center.empty()) throw ValidationError("ball needs a center");
  if (!(radius > 0.0)) throw ValidationError("ball radius must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::ball;
  impl->a = std::move(center);
  impl->scalar = radius;
  impl->open = open;
  return Region(impl);
}

Region Region::box(std::vector<double> lo, std::vector<double> hi, bool open) {
  if (lo.empty() || lo.size() != hi.size())
    throw ValidationError("box corners must have equal nonzero dimension");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] <= hi[i])) throw ValidationError("box corner lo exceeds hi");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::box;
  impl->a = std::move(lo);
  impl->b = std::move(hi);
  impl->open = open;
  return Region(impl);
}

Region Region::halfspace(std::vector<double> normal, double offset, bool open) {
  if (normal.empty()) throw ValidationError("halfspace needs a normal");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::halfspace;
  impl->a = std::move(normal);
  impl->scalar = offset;
  impl->open = open;
  return Region(impl);
}

Region Region::list(std::vector<NodeId> ids) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::list;
  impl->ids.insert(ids.begin(), ids.end());
  impl->id_list = std::move(ids);
  return Region(impl);
}

Region Region::all() {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::all;
  impl->open = true;
  return Region(impl);
}

Region Region::unite(std::vector<Region> parts) {
  if (parts.empty()) throw ValidationError("union of no predicates");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::unite;
  impl->children = std::move(parts);
  return Region(impl);
}

Region Region::intersect(std::vector<Region> parts) {
  if (parts.empty()) throw ValidationError("intersection of no predicates");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::intersect;
  impl->children = std::move(parts);
  return Region(impl);
}

Region Region::subtract(Region from, Region removed) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::subtract;
  impl->children = {std::move(from), std::move(removed)};
  return Region(impl);
}

Region::Kind Region::kind() const { return impl_->kind; }

bool Region::is_geometric() const {
  if (impl_->kind == Kind::list) return false;
  return std::all_of(impl_->children.begin(), impl_->children.end(),
                     [](const Region& r) { return r.is_geometric(); });
}

Openness Region::openness() const {
  const auto& c = impl_->children;
  switch (impl_->kind) {
    case Kind::ball:
    case Kind::box:
    case Kind::halfspace:
      return impl_->open ? Openness::open : Openness::closed;
    case Kind::all:
      return Openness::open;
    case Kind::list:
      return Openness::unknown;
    case Kind::unite:
    case Kind::intersect: {
      Openness o = c.front().openness();
      for (std::size_t i = 1; i < c.size(); ++i) o = combine(o, c[i].openness());
      return o;
    }
    case Kind::subtract: {
      Openness a = c[0].openness(), b = c[1].openness();
      if (a == Openness::open && b == Openness::closed) return Openness::open;
      if (a == Openness::closed && b == Openness::open) return Openness::closed;
      return Openness::unknown;
    }
  }
  return Openness::unknown;
}

bool Region::contains_point(std::span<const double> x) const {
  const Impl& r = *impl_;
  switch (r.kind) {
    case Kind::ball: {
      check_dim(r.a.size(), x.size());
      double d2 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) d2 += (x[i] - r.a[i]) * (x[i] - r.a[i]);
      double r2 = r.scalar * r.scalar;
      return r.open ? d2 < r2 : d2 <= r2;
    }
    case Kind::box: {
      check_dim(r.a.size(), x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        bool in = r.open ? (x[i] > r.a[i] && x[i] < r.b[i])
                         : (x[i] >= r.a[i] && x[i] <= r.b[i]);
        if (!in) return false;
      }
      return true;
    }
    case Kind::halfspace: {
      check_dim(r.a.size(), x.size());
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += r.a[i] * x[i];
      return r.open ? s < r.scalar : s <= r.scalar;
    }
    case Kind::all:
      return true;
    case Kind::list:
      throw ValidationError("id-list predicate has no point membership");
    case Kind::unite:
      return std::any_of(r.children.begin(), r.children.end(),
                         [&](const Region& c) { return c.contains_point(x); });
    case Kind::intersect:
      return std::all_of(r.children.begin(), r.children.end(),
                         [&](const Region& c) { return c.contains_point(x); });
    case Kind::subtract:
      return r.children[0].contains_point(x) && !r.children[1].contains_point(x);
  }
  return false;
}

bool Region::contains_node(const MetricMeasureGraph& g, NodeIndex v) const {
  const Impl& r = *impl_;
  switch (r.kind) {
    case Kind::list:
      return r.ids.count(g.id(v)) > 0;
    case Kind::all:
      return true;
    case Kind::unite:
      return std::any_of(r.children.begin(), r.children.end(),
                         [&](const Region& c) { return c.contains_node(g, v); });
    case Kind::intersect:
      return std::all_of(r.children.begin(), r.children.end(),
                         [&](const Region& c) { return c.contains_node(g, v); });
    case Kind::subtract:
      return r.children[0].contains_node(g, v) &&
             !r.children[1].contains_node(g, v);
    default:
      if (!g.has_positions())
        throw ValidationError(
            "geometric predicates require a space with node positions");
      return contains_point(g.position(v));
  }
}

std::optional<Bounds> Region::bounds() const {
  const Impl& r = *impl_;
  switch (r.kind) {
    case Kind::ball: {
      Bounds b{r.a, r.a};
      for (std::size_t i = 0; i < r.a.size(); ++i) {
        b.lo[i] -= r.scalar;
        b.hi[i] += r.scalar;
      }
      return b;
    }
    case Kind::box:
      return Bounds{r.a, r.b};
    case Kind::halfspace:
    case Kind::all:
    case Kind::list:
      return std::nullopt;
    case Kind::unite: {
      std::optional<Bounds> acc;
      for (const auto& c : r.children) {
        auto cb = c.bounds();
        if (!cb) return std::nullopt;
        if (!acc) {
          acc = cb;
          continue;
        }
        check_dim(acc->lo.size(), cb->lo.size());
        for (std::size_t i = 0; i < acc->lo.size(); ++i) {
          acc->lo[i] = std::min(acc->lo[i], cb->lo[i]);
          acc->hi[i] = std::max(acc->hi[i], cb->hi[i]);
        }
      }
      return acc;
    }
    case Kind::intersect: {
      std::optional<Bounds> acc;
      for (const auto& c : r.children) {
        auto cb = c.bounds();
        if (!cb) continue;
        if (!acc) {
          acc = cb;
          continue;
        }
        check_dim(acc->lo.size(), cb->lo.size());
        for (std::size_t i = 0; i < acc->lo.size(); ++i) {
          acc->lo[i] = std::max(acc->lo[i], cb->lo[i]);
          acc->hi[i] = std::min(acc->hi[i], cb->hi[i]);
        }
      }
      return acc;
    }
    case Kind::subtract:
      return r.children[0].bounds();
  }
  return std::nullopt;
}

NodeSet Region::evaluate(const MetricMeasureGraph& g) const {
  std::vector<NodeIndex> out;
  for (NodeIndex v = 0; v < g.num_nodes(); ++v)
    if (contains_node(g, v)) out.push_back(v);
  if (impl_->kind == Kind::list) {
    for (NodeId id : impl_->id_list)
      if (!g.index_of(id))
        throw ValidationError("set lists node id " + std::to_string(id) +
                              " which is not in the space");
    NodeSet s(std::move(out));
    // Explicit sets use the combinatorial notion: open iff S = interior(S).
    return s.with_openness(interior(g, s).size() == s.size() ? Openness::open
                                                             : Openness::unknown);
  }
  return NodeSet(std::move(out), openness());
}

nlohmann::json Region::to_json() const {
  using nlohmann::json;
  const Impl& r = *impl_;
  switch (r.kind) {
    case Kind::ball:
      return json{{"ball", {{"center", r.a}, {"radius", r.scalar}}}, {"open", r.open}};
    case Kind::box:
      return json{{"box", {{"lo", r.a}, {"hi", r.b}}}, {"open", r.open}};
    case Kind::halfspace:
      return json{{"halfspace", {{"normal", r.a}, {"offset", r.scalar}}},
                  {"open", r.open}};
    case Kind::list:
      return json{{"list", r.id_list}};
    case Kind::all:
      return json{{"all", true}};
    case Kind::unite:
    case Kind::intersect:
    case Kind::subtract: {
      json arr = json::array();
      for (const auto& c : r.children) arr.push_back(c.to_json());
      const char* key = r.kind == Kind::unite      ? "union"
                        : r.kind == Kind::intersect ? "inter"
                                                    : "diff";
      return json{{key, arr}};
    }
  }
  return json();
}

Region Region::from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw ValidationError("set spec must be a JSON object");
    bool open = j.value("open", false);
    if (j.contains("ball")) {
      const auto& b = j.at("ball");
      return ball(b.at("center").get<std::vector<double>>(),
                  b.at("radius").get<double>(), open);
    }
    if (j.contains("box")) {
      const auto& b = j.at("box");
      return box(b.at("lo").get<std::vector<double>>(),
                 b.at("hi").get<std::vector<double>>(), open);
    }
    if (j.contains("halfspace")) {
      const auto& b = j.at("halfspace");
      return halfspace(b.at("normal").get<std::vector<double>>(),
                       b.at("offset").get<double>(), open);
    }
    if (j.contains("list")) return list(j.at("list").get<std::vector<NodeId>>());
    if (j.contains("all")) return all();
    auto children = [&](const char* key) {
      std::vector<Region> out;
      for (const auto& c : j.at(key)) out.push_back(from_json(c));
      return out;
    };
    if (j.contains("union")) return unite(children("union"));
    if (j.contains("inter")) return intersect(children("inter"));
    if (j.contains("diff")) {
      auto parts = children("diff");
      if (parts.size() != 2)
        throw ValidationError("diff takes exactly two predicates");
      return subtract(parts[0], parts[1]);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed set spec: ") + e.what());
  }
  throw ValidationError("set spec has no recognized predicate key");
}

}  // namespace ncap
