#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ncap/newtonian.hpp"
#include "ncap/space.hpp"

namespace ncap {

struct SolverConfig {
  double p = 2.0;
  double tol_energy = 1e-10;  // relative energy change between iterates
  double tol_kkt = 1e-8;      // scaled sup-norm of the free gradient
  std::size_t max_iter = 10000;
  double eps_reg = 1e-12;     // smoothing of |t|^p for p < 2
  /// For p = 2, use conjugate gradients instead of the sparse factorization.
  bool force_iterative = false;

  void validate() const;
  /// p within 1e-6 of 1: the eps-regularized p = 1 mode.
  bool p_one_mode() const { return p < 1.0 + 1e-6; }
};

struct SolveDiagnostics {
  std::size_t iterations = 0;
  double final_energy = 0.0;
  double final_kkt = 0.0;
  std::vector<double> energy_history;
  bool converged = false;
};

using FixedValues = std::vector<std::pair<NodeIndex, double>>;

struct SolveResult {
  DiscreteFunction u;
  SolveDiagnostics diagnostics;
};

/// Minimize sum_e weight_e |du_e / length_e|^p over the values on `free`,
/// with `fixed` nodes held at their values and every other node held at 0.
/// Free nodes that cannot reach a held node through free nodes are set to 0.
/// p = 2 takes one sparse SPD solve; otherwise damped Newton with an Armijo
/// line search, started from the quadratic surrogate. Non-convergence is
/// reported in the diagnostics, not thrown.
///
/// Throws ValidationError for conflicting duplicate fixed entries or a
/// fixed node that is also free.
SolveResult minimize_p_energy(const MetricMeasureGraph& g, const FixedValues& fixed,
                              const NodeSet& free, const SolverConfig& cfg,
                              const DiscreteFunction* initial = nullptr);

/// Same machinery with the node mass term added: minimizes
/// sum_x mu(x)|u(x)|^p + sum_e weight_e |du_e / length_e|^p with `fixed`
/// held and every other node free.
SolveResult minimize_newtonian_norm(const MetricMeasureGraph& g,
                                    const FixedValues& fixed,
                                    const SolverConfig& cfg,
                                    const DiscreteFunction* initial = nullptr);

/// sum_x mu|u|^p / sum_e weight g_u^p; +inf for zero energy with nonzero
/// mass, 0 for u = 0.
double poincare_quotient(const MetricMeasureGraph& g, const DiscreteFunction& u,
                         double p);

struct PoincareResult {
  double value = 0.0;  // +inf when E contains a whole component
  DiscreteFunction certificate;
  bool exact = false;  // p = 2: exact; otherwise a certified lower bound
};

/// Best constant C_E in sum mu|u|^p <= C_E sum weight g_u^p over u vanishing
/// outside E. Exact for p = 2 (inverse of the smallest generalized
/// eigenvalue); for other p the largest quotient over a candidate family.
PoincareResult poincare_constant(const MetricMeasureGraph& g, const NodeSet& E,
                                 double p, const SolverConfig& cfg = {});

}  // namespace ncap
