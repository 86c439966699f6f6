#include "ncap/capacity.hpp"

#include <algorithm>
#include <cmath>

namespace ncap {

namespace {

CapacityEcho make_echo(const MetricMeasureGraph& g, const NodeSet& A,
                       const NodeSet& E, double p) {
  return CapacityEcho{A.size(), E.size(), p, g.content_hash()};
}

}  // namespace

CapacityResult variational_capacity(const MetricMeasureGraph& g, const NodeSet& A,
                                    const NodeSet& E, const SolverConfig& cfg) {
  A.check_within(g);
  E.check_within(g);
  if (!A.is_subset_of(E)) throw ValidationError("A not contained in E");

  FixedValues fixed;
  fixed.reserve(A.size());
  for (NodeIndex v : A.members()) fixed.emplace_back(v, 1.0);
  auto solved = minimize_p_energy(g, fixed, set_difference(E, A), cfg);

  CapacityResult out;
  out.value = p_energy(g, min_upper_gradient(g, solved.u), cfg.p);
  out.potential = std::move(solved.u);
  out.diagnostics = std::move(solved.diagnostics);
  out.a_touches_boundary = !A.is_subset_of(interior(g, E));
  out.echo = make_echo(g, A, E, cfg.p);
  return out;
}

CapacityResult sobolev_capacity(const MetricMeasureGraph& g, const NodeSet& A,
                                const SolverConfig& cfg) {
  A.check_within(g);
  FixedValues fixed;
  for (NodeIndex v : A.members()) fixed.emplace_back(v, 1.0);
  auto solved = minimize_newtonian_norm(g, fixed, cfg);

  CapacityResult out;
  out.value = sobolev_norm_p(g, solved.u, cfg.p);
  out.potential = std::move(solved.u);
  out.diagnostics = std::move(solved.diagnostics);
  out.echo = make_echo(g, A, NodeSet::all(g), cfg.p);
  return out;
}

NodeSet relative_dilation(const MetricMeasureGraph& g, const NodeSet& A,
                          const NodeSet& E, double eps) {
  return set_intersection(dilate(g, A, eps), E).with_openness(Openness::open);
}

OuterProfile outer_capacity_profile(const MetricMeasureGraph& g, const NodeSet& A,
                                    const NodeSet& E, std::span<const double> eps,
                                    const SolverConfig& cfg) {
  if (eps.empty()) throw ValidationError("empty eps schedule");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw ValidationError("eps schedule must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1]))
      throw ValidationError("eps schedule must be strictly decreasing");
  }
  OuterProfile profile;
  profile.eps.assign(eps.begin(), eps.end());
  auto base = variational_capacity(g, A, E, cfg);
  profile.base = base.value;
  for (double e : eps) {
    auto r = variational_capacity(g, relative_dilation(g, A, E, e), E, cfg);
    profile.capacities.push_back(r.value);
    profile.converged.push_back(r.converged());
  }
  profile.limit_estimate = profile.capacities.back();
  return profile;
}

CapacityResult tilde_capacity(const MetricMeasureGraph& g, const NodeSet& A,
                              const NodeSet& E, std::span<const NodeSet> family,
                              const SolverConfig& cfg) {
  A.check_within(g);
  E.check_within(g);
  if (!A.is_subset_of(E)) throw ValidationError("A not contained in E");
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& G = family[i];
    if (!A.is_subset_of(G) || !G.is_subset_of(E))
      throw ValidationError("family member " + std::to_string(i) +
                            " violates A subset G subset E");
    if (G.openness() != Openness::open && !is_relatively_open(g, G, E))
      throw ValidationError("family member " + std::to_string(i) +
                            " is not relatively open in E");
  }

  CapacityResult best;
  best.value = kInfiniteCapacity;
  best.diagnostics.converged = true;
  best.echo = make_echo(g, A, E, cfg.p);
  for (std::size_t i = 0; i < family.size(); ++i) {
    auto r = variational_capacity(g, family[i], E, cfg);
    if (!r.converged()) best.diagnostics.converged = false;
    if (r.value < best.value) {
      bool all_converged = best.diagnostics.converged;
      best.value = r.value;
      best.potential = std::move(r.potential);
      best.diagnostics = std::move(r.diagnostics);
      best.diagnostics.converged = best.diagnostics.converged && all_converged;
      best.attained_by = i;
    }
  }
  best.a_touches_boundary = !A.is_subset_of(interior(g, E));
  return best;
}

BoundaryCheck boundary_capacity_check(const MetricMeasureGraph& g, const NodeSet& F,
                                      const NodeSet& E, const SolverConfig& cfg) {
  F.check_within(g);
  if (!F.is_subset_of(E)) throw ValidationError("F not contained in E");
  if (!is_combinatorially_closed(g, F))
    throw ValidationError("F not combinatorially closed");

  BoundaryCheck out;
  out.boundary = inner_boundary(g, F);
  out.cap_f = variational_capacity(g, F, E, cfg);
  out.cap_boundary = variational_capacity(g, out.boundary, E, cfg);

  std::vector<double> v(out.cap_boundary.potential->values().begin(),
                        out.cap_boundary.potential->values().end());
  for (NodeIndex x : F.members()) v[x] = 1.0;
  out.pasted_energy =
      p_energy(g, min_upper_gradient(g, DiscreteFunction(std::move(v))), cfg.p);
  return out;
}

AmbientComparison ambient_comparison(const MetricMeasureGraph& g, const NodeSet& Y1,
                                     const NodeSet& Y2, const NodeSet& A,
                                     const NodeSet& E, const SolverConfig& cfg) {
  if (!A.is_subset_of(E) || !E.is_subset_of(Y1) || !Y1.is_subset_of(Y2))
    throw ValidationError("inclusion chain A subset E subset Y1 subset Y2 violated");
  auto small = restrict_ambient(g, Y1);
  auto large = restrict_ambient(g, Y2);
  return AmbientComparison{
      variational_capacity(small.graph, small.map_into(A), small.map_into(E), cfg),
      variational_capacity(large.graph, large.map_into(A), large.map_into(E), cfg)};
}

}  // namespace ncap
