#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "ncap/space.hpp"

namespace ncap {

/// Axis-aligned bounding box.
struct Bounds {
  std::vector<double> lo;
  std::vector<double> hi;
};

/// Set predicate tree: geometric leaves (ball, box, halfspace), explicit id
/// lists, and union / intersection / difference nodes. Each geometric leaf
/// carries an `open` flag which is propagated to evaluated node sets.
class Region {
 public:
  enum class Kind { ball, box, halfspace, list, all, unite, intersect, subtract };

  static Region ball(std::vector<double> center, double radius, bool open);
  static Region box(std::vector<double> lo, std::vector<double> hi, bool open);
  /// {x : normal . x <= offset} (closed) or {x : normal . x < offset} (open).
  static Region halfspace(std::vector<double> normal, double offset, bool open);
  static Region list(std::vector<NodeId> ids);
  static Region all();
  static Region unite(std::vector<Region> parts);
  static Region intersect(std::vector<Region> parts);
  static Region subtract(Region from, Region removed);

  Kind kind() const;
  /// True when no explicit id list appears anywhere in the tree.
  bool is_geometric() const;
  /// Continuum openness derived from the leaf flags; `list` leaves report
  /// unknown and are resolved combinatorially in evaluate().
  Openness openness() const;

  /// Point membership; throws ValidationError for trees containing lists.
  bool contains_point(std::span<const double> x) const;
  /// Node membership; geometric leaves require node positions.
  bool contains_node(const MetricMeasureGraph& g, NodeIndex v) const;
  std::optional<Bounds> bounds() const;

  NodeSet evaluate(const MetricMeasureGraph& g) const;

  nlohmann::json to_json() const;
  static Region from_json(const nlohmann::json& j);

 private:
  struct Impl;
  explicit Region(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

}  // namespace ncap
