#pragma once

#include <span>
#include <vector>

#include "ncap/space.hpp"

namespace ncap {

/// Node-indexed finite real values.
class DiscreteFunction {
 public:
  DiscreteFunction() = default;
  explicit DiscreteFunction(std::vector<double> values);
  static DiscreteFunction constant(const MetricMeasureGraph& g, double c);
  static DiscreteFunction indicator(const MetricMeasureGraph& g, const NodeSet& s);

  std::size_t size() const { return values_.size(); }
  double operator[](NodeIndex v) const { return values_[v]; }
  std::span<const double> values() const { return values_; }

  /// Throws ValidationError unless size() == g.num_nodes().
  void check_on(const MetricMeasureGraph& g) const;

 private:
  std::vector<double> values_;
};

/// Edge-indexed nonnegative values (upper-gradient candidates).
class EdgeFunction {
 public:
  EdgeFunction() = default;
  explicit EdgeFunction(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](EdgeIndex e) const { return values_[e]; }
  std::span<const double> values() const { return values_; }

  void check_on(const MetricMeasureGraph& g) const;

 private:
  std::vector<double> values_;
};

/// g_u(e) = |u(a) - u(b)| / length(e).
EdgeFunction min_upper_gradient(const MetricMeasureGraph& g,
                                const DiscreteFunction& u);

/// sum_e weight(e) * grad(e)^p, summed in edge order.
double p_energy(const MetricMeasureGraph& g, const EdgeFunction& grad, double p);

/// p-th power of the Newtonian norm: sum_x mu(x)|u(x)|^p + p_energy(g_u).
double sobolev_norm_p(const MetricMeasureGraph& g, const DiscreteFunction& u,
                      double p);

DiscreteFunction lattice_max(const DiscreteFunction& u1, const DiscreteFunction& u2);
DiscreteFunction lattice_min(const DiscreteFunction& u1, const DiscreteFunction& u2);
/// Pointwise supremum of a nonempty family.
DiscreteFunction lattice_sup(std::span<const DiscreteFunction> family);
DiscreteFunction truncate(const DiscreteFunction& u, double c);
DiscreteFunction pointwise_product(const DiscreteFunction& u,
                                   const DiscreteFunction& v);
DiscreteFunction scale(const DiscreteFunction& u, double c);

/// Discrete Lip u(x): the largest incident difference quotient, 0 at
/// isolated nodes. Diagnostic only.
DiscreteFunction pointwise_dilation(const MetricMeasureGraph& g,
                                    const DiscreteFunction& u);

using NodePath = std::vector<NodeIndex>;

struct UpperGradientCheck {
  bool holds = true;
  double worst_violation = 0.0;  // max of |u(start)-u(end)| - integral, or 0
  std::size_t worst_path = 0;
};

/// Checks |u(start) - u(end)| <= sum over path edges of cand(e) * length(e)
/// for each path, with 1e-12 absolute slack. Throws ValidationError when
/// consecutive path nodes are not adjacent.
UpperGradientCheck verify_upper_gradient(const MetricMeasureGraph& g,
                                         const DiscreteFunction& u,
                                         const EdgeFunction& cand,
                                         std::span<const NodePath> paths);

/// All single-edge paths, in edge order.
std::vector<NodePath> single_edge_paths(const MetricMeasureGraph& g);

}  // namespace ncap
