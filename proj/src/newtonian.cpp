#include "ncap/newtonian.hpp"

#include <algorithm>
#include <cmath>

namespace ncap {

DiscreteFunction::DiscreteFunction(std::vector<double> values)
    : values_(std::move(values)) {
  for (double x : values_)
    if (!std::isfinite(x))
      throw ValidationError("discrete function has a non-finite value");
}

DiscreteFunction DiscreteFunction::constant(const MetricMeasureGraph& g, double c) {
  return DiscreteFunction(std::vector<double>(g.num_nodes(), c));
}

DiscreteFunction DiscreteFunction::indicator(const MetricMeasureGraph& g,
                                             const NodeSet& s) {
  s.check_within(g);
  std::vector<double> v(g.num_nodes(), 0.0);
  for (NodeIndex i : s.members()) v[i] = 1.0;
  return DiscreteFunction(std::move(v));
}

void DiscreteFunction::check_on(const MetricMeasureGraph& g) const {
  if (values_.size() != g.num_nodes())
    throw ValidationError("function has " + std::to_string(values_.size()) +
                          " values but the graph has " +
                          std::to_string(g.num_nodes()) + " nodes");
}

EdgeFunction::EdgeFunction(std::vector<double> values) : values_(std::move(values)) {
  for (double x : values_)
    if (!(x >= 0.0) || !std::isfinite(x))
      throw ValidationError("edge function values must be finite and nonnegative");
}

void EdgeFunction::check_on(const MetricMeasureGraph& g) const {
  if (values_.size() != g.num_edges())
    throw ValidationError("edge function has " + std::to_string(values_.size()) +
                          " values but the graph has " +
                          std::to_string(g.num_edges()) + " edges");
}

EdgeFunction min_upper_gradient(const MetricMeasureGraph& g,
                                const DiscreteFunction& u) {
  u.check_on(g);
  std::vector<double> out(g.num_edges());
  for (EdgeIndex i = 0; i < g.num_edges(); ++i) {
    const auto& e = g.edge(i);
    out[i] = std::abs(u[e.a] - u[e.b]) / e.length;
  }
  return EdgeFunction(std::move(out));
}

double p_energy(const MetricMeasureGraph& g, const EdgeFunction& grad, double p) {
  if (!(p >= 1.0)) throw ValidationError("exponent p must be at least 1");
  grad.check_on(g);
  double s = 0.0;
  for (EdgeIndex i = 0; i < g.num_edges(); ++i)
    s += g.edge(i).weight * std::pow(grad[i], p);
  return s;
}

double sobolev_norm_p(const MetricMeasureGraph& g, const DiscreteFunction& u,
                      double p) {
  u.check_on(g);
  double mass = 0.0;
  for (NodeIndex v = 0; v < g.num_nodes(); ++v)
    mass += g.measure(v) * std::pow(std::abs(u[v]), p);
  return mass + p_energy(g, min_upper_gradient(g, u), p);
}

namespace {

template <typename Op>
DiscreteFunction combine(const DiscreteFunction& u1, const DiscreteFunction& u2,
                         Op op) {
  if (u1.size() != u2.size())
    throw ValidationError("functions live on different graphs");
  std::vector<double> out(u1.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(u1[i], u2[i]);
  return DiscreteFunction(std::move(out));
}

}  // namespace

DiscreteFunction lattice_max(const DiscreteFunction& u1, const DiscreteFunction& u2) {
  return combine(u1, u2, [](double a, double b) { return std::max(a, b); });
}

DiscreteFunction lattice_min(const DiscreteFunction& u1, const DiscreteFunction& u2) {
  return combine(u1, u2, [](double a, double b) { return std::min(a, b); });
}

DiscreteFunction lattice_sup(std::span<const DiscreteFunction> family) {
  if (family.empty()) throw ValidationError("supremum of an empty family");
  DiscreteFunction acc = family.front();
  for (std::size_t i = 1; i < family.size(); ++i) acc = lattice_max(acc, family[i]);
  return acc;
}

DiscreteFunction pointwise_product(const DiscreteFunction& u,
                                   const DiscreteFunction& v) {
  return combine(u, v, [](double a, double b) { return a * b; });
}

DiscreteFunction truncate(const DiscreteFunction& u, double c) {
  std::vector<double> out(u.values().begin(), u.values().end());
  for (double& x : out) x = std::min(x, c);
  return DiscreteFunction(std::move(out));
}

DiscreteFunction scale(const DiscreteFunction& u, double c) {
  std::vector<double> out(u.values().begin(), u.values().end());
  for (double& x : out) x *= c;
  return DiscreteFunction(std::move(out));
}

DiscreteFunction pointwise_dilation(const MetricMeasureGraph& g,
                                    const DiscreteFunction& u) {
  u.check_on(g);
  std::vector<double> out(g.num_nodes(), 0.0);
  for (NodeIndex v = 0; v < g.num_nodes(); ++v)
    for (const auto& inc : g.neighbors(v))
      out[v] = std::max(out[v], std::abs(u[inc.neighbor] - u[v]) /
                                    g.edge(inc.edge).length);
  return DiscreteFunction(std::move(out));
}

UpperGradientCheck verify_upper_gradient(const MetricMeasureGraph& g,
                                         const DiscreteFunction& u,
                                         const EdgeFunction& cand,
                                         std::span<const NodePath> paths) {
  u.check_on(g);
  cand.check_on(g);
  constexpr double kSlack = 1e-12;
  UpperGradientCheck result;
  for (std::size_t k = 0; k < paths.size(); ++k) {
    const auto& path = paths[k];
    if (path.empty()) continue;
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      auto e = g.find_edge(path[i], path[i + 1]);
      if (!e)
        throw ValidationError("path " + std::to_string(k) +
                              " steps between nonadjacent nodes");
      integral += cand[*e] * g.edge(*e).length;
    }
    double excess = std::abs(u[path.front()] - u[path.back()]) - integral;
    if (excess > kSlack) result.holds = false;
    if (excess > result.worst_violation) {
      result.worst_violation = excess;
      result.worst_path = k;
    }
  }
  return result;
}

std::vector<NodePath> single_edge_paths(const MetricMeasureGraph& g) {
  std::vector<NodePath> out;
  out.reserve(g.num_edges());
  for (const auto& e : g.edges()) out.push_back({e.a, e.b});
  return out;
}

}  // namespace ncap
