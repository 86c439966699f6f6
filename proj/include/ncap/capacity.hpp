#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "ncap/newtonian.hpp"
#include "ncap/solver.hpp"
#include "ncap/space.hpp"

namespace ncap {

inline constexpr double kInfiniteCapacity = std::numeric_limits<double>::infinity();

struct CapacityEcho {
  std::size_t a_size = 0;
  std::size_t e_size = 0;
  double p = 2.0;
  std::uint64_t space_hash = 0;
};

struct CapacityResult {
  double value = 0.0;  // kInfiniteCapacity only for empty admissible families
  std::optional<DiscreteFunction> potential;
  SolveDiagnostics diagnostics;
  bool a_touches_boundary = false;  // A meets the combinatorial boundary of E
  CapacityEcho echo;
  std::optional<std::size_t> attained_by;  // tilde: index of the minimizing G

  bool is_infinite() const { return value == kInfiniteCapacity; }
  bool converged() const { return diagnostics.converged; }
};

/// cap_p(A, E): minimal p-energy of u with u = 1 on A and u = 0 off E.
/// Throws ValidationError unless A is contained in E.
CapacityResult variational_capacity(const MetricMeasureGraph& g, const NodeSet& A,
                                    const NodeSet& E, const SolverConfig& cfg);

/// C_p(A): minimal Newtonian norm (mass plus energy) of u with u = 1 on A.
CapacityResult sobolev_capacity(const MetricMeasureGraph& g, const NodeSet& A,
                                const SolverConfig& cfg);

struct OuterProfile {
  std::vector<double> eps;          // strictly decreasing
  std::vector<double> capacities;   // cap_p(dilate(A, eps) cap E, E)
  std::vector<bool> converged;
  double base = 0.0;                // cap_p(A, E)
  double limit_estimate = 0.0;      // last profile entry
};

/// Capacities of the relatively open dilations of A inside E along a strictly
/// decreasing positive schedule. Throws on an empty or nonmonotone schedule.
OuterProfile outer_capacity_profile(const MetricMeasureGraph& g, const NodeSet& A,
                                    const NodeSet& E, std::span<const double> eps,
                                    const SolverConfig& cfg);

/// dilate(A, eps) intersected with E, tagged open (relatively open in E).
NodeSet relative_dilation(const MetricMeasureGraph& g, const NodeSet& A,
                          const NodeSet& E, double eps);

/// Infimum of cap_p(G, E) over the supplied relatively open G with
/// A subset G subset E; +inf for an empty family.
CapacityResult tilde_capacity(const MetricMeasureGraph& g, const NodeSet& A,
                              const NodeSet& E, std::span<const NodeSet> family,
                              const SolverConfig& cfg);

struct BoundaryCheck {
  CapacityResult cap_f;
  CapacityResult cap_boundary;
  NodeSet boundary;             // nodes of F with a neighbor outside F
  double pasted_energy = 0.0;   // energy of v = 1 on F, boundary potential off F
};

/// Computes cap_p(F, E) and cap_p(dF, E) for a combinatorially closed F and
/// executes the pasting construction. Throws if F is not closed or not in E.
BoundaryCheck boundary_capacity_check(const MetricMeasureGraph& g, const NodeSet& F,
                                      const NodeSet& E, const SolverConfig& cfg);

struct AmbientComparison {
  CapacityResult smaller_ambient;  // computed in restrict(Y1)
  CapacityResult larger_ambient;   // computed in restrict(Y2)
};

/// cap_p(A, E) in the induced subgraphs on Y1 and Y2, A subset E subset Y1
/// subset Y2.
AmbientComparison ambient_comparison(const MetricMeasureGraph& g, const NodeSet& Y1,
                                     const NodeSet& Y2, const NodeSet& A,
                                     const NodeSet& E, const SolverConfig& cfg);

/// Surface area of the unit sphere in R^n.
double unit_sphere_area(int n);

/// Weighted condenser capacity of the shell r < |x| < R in R^n for a radial
/// weight: (int_r^R (area_{n-1} s^{n-1} w(s))^{-1/(p-1)} ds)^{1-p}, by
/// adaptive Gauss-Kronrod quadrature. +inf if the integral is not finite
/// and positive.
double radial_condenser_oracle(double r, double R, double p, int n,
                               const std::function<double(double)>& weight);

/// Series path with conductances w_i (unit lengths):
/// (sum_i w_i^{-1/(p-1)})^{1-p}.
double path_capacity_oracle(std::span<const double> weights, double p);

}  // namespace ncap
