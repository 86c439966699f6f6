#include "ncap/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace ncap {

void SolverConfig::validate() const {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw ValidationError("exponent p must be a finite real >= 1");
  if (!(tol_energy > 0.0)) throw ValidationError("tol_energy must be positive");
  if (!(tol_kkt > 0.0)) throw ValidationError("tol_kkt must be positive");
  if (max_iter < 1) throw ValidationError("max_iter must be at least 1");
  if (!(eps_reg > 0.0)) throw ValidationError("eps_reg must be positive");
}

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

// phi(t) = |t|^p for p >= 2, (t^2 + eps^2)^(p/2) - eps^p below.
struct Kernel {
  double p;
  double eps;
  bool smooth;

  Kernel(double p_, double eps_) : p(p_), eps(eps_), smooth(p_ < 2.0) {}

  double f(double t) const {
    if (smooth) return std::pow(t * t + eps * eps, 0.5 * p) - std::pow(eps, p);
    if (p == 2.0) return t * t;
    return std::pow(std::abs(t), p);
  }
  double d1(double t) const {
    if (smooth) return p * t * std::pow(t * t + eps * eps, 0.5 * p - 1.0);
    if (p == 2.0) return 2.0 * t;
    return p * std::pow(std::abs(t), p - 1.0) * (t < 0 ? -1.0 : 1.0);
  }
  double d2(double t) const {
    if (smooth) {
      double s = t * t + eps * eps;
      return p * std::pow(s, 0.5 * p - 2.0) * ((p - 1.0) * t * t + eps * eps);
    }
    if (p == 2.0) return 2.0;
    return p * (p - 1.0) * std::pow(std::abs(t), p - 2.0);
  }
  // phi'(t) / t: curvature of the quadratic majorizer of the smoothed kernel.
  double secant(double t) const {
    if (smooth) return p * std::pow(t * t + eps * eps, 0.5 * p - 1.0);
    return d2(t);
  }
};

class EnergyProblem {
 public:
  EnergyProblem(const MetricMeasureGraph& g, const FixedValues& fixed,
                const std::vector<char>& free_mask, bool with_mass,
                const SolverConfig& cfg)
      : g_(g), cfg_(cfg), kernel_(cfg.p, cfg.eps_reg) {
    const std::size_t n = g.num_nodes();
    u_.assign(n, 0.0);
    std::vector<char> is_fixed(n, 0);
    for (const auto& [v, value] : fixed) {
      if (v >= n) throw ValidationError("fixed node index outside the graph");
      if (!std::isfinite(value))
        throw ValidationError("fixed value must be finite");
      if (free_mask[v])
        throw ValidationError("node " + std::to_string(g.id(v)) +
                              " is both fixed and free");
      if (is_fixed[v] && u_[v] != value)
        throw ValidationError("infeasible constraint map: node " +
                              std::to_string(g.id(v)) +
                              " fixed to two different values");
      is_fixed[v] = 1;
      u_[v] = value;
    }

    // Free nodes reachable from a held node through free nodes are active.
    std::vector<char> reached(n, 0);
    std::queue<NodeIndex> queue;
    for (NodeIndex v = 0; v < n; ++v)
      if (!free_mask[v]) {
        reached[v] = 1;
        queue.push(v);
      }
    while (!queue.empty()) {
      NodeIndex v = queue.front();
      queue.pop();
      for (const auto& inc : g.neighbors(v)) {
        NodeIndex w = inc.neighbor;
        if (!reached[w] && free_mask[w]) {
          reached[w] = 1;
          queue.push(w);
        }
      }
    }
    pos_.assign(n, kInactive);
    for (NodeIndex v = 0; v < n; ++v)
      if (free_mask[v] && reached[v]) {
        pos_[v] = active_.size();
        active_.push_back(v);
      }

    conductance_.resize(g.num_edges());
    for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
      const auto& edge = g.edge(e);
      conductance_[e] = edge.weight / std::pow(edge.length, cfg.p);
    }
    mass_.assign(n, 0.0);
    if (with_mass)
      for (NodeIndex v = 0; v < n; ++v) mass_[v] = g.measure(v);
  }

  std::size_t num_active() const { return active_.size(); }
  std::vector<double>& values() { return u_; }
  const std::vector<double>& values() const { return u_; }

  void set_active_from(const DiscreteFunction& init) {
    init.check_on(g_);
    for (NodeIndex v : active_) u_[v] = init[v];
  }

  double energy(const std::vector<double>& u, const Kernel& k) const {
    double s = 0.0;
    for (EdgeIndex e = 0; e < g_.num_edges(); ++e) {
      const auto& edge = g_.edge(e);
      s += conductance_[e] * k.f(u[edge.a] - u[edge.b]);
    }
    for (NodeIndex v = 0; v < u.size(); ++v)
      if (mass_[v] > 0.0) s += mass_[v] * k.f(u[v]);
    return s;
  }

  double raw_energy(const std::vector<double>& u) const {
    double s = 0.0;
    for (EdgeIndex e = 0; e < g_.num_edges(); ++e) {
      const auto& edge = g_.edge(e);
      s += conductance_[e] * std::pow(std::abs(u[edge.a] - u[edge.b]), cfg_.p);
    }
    for (NodeIndex v = 0; v < u.size(); ++v)
      if (mass_[v] > 0.0) s += mass_[v] * std::pow(std::abs(u[v]), cfg_.p);
    return s;
  }

  /// Gradient, Hessian and the gradient scale used by the KKT residual.
  /// With `majorize`, the Hessian is replaced by the weights of a quadratic
  /// majorizer (smoothed kernels only), so the unit step never increases J.
  /// `secant` selects majorizer curvature per term: edges first, then the
  /// mass terms of the active nodes.
  void linearize(const Kernel& k, Vector& grad, SparseMatrix& hess, double& scale,
                 bool majorize = false,
                 const std::vector<char>* secant = nullptr) const {
    auto use_secant = [&](std::size_t term) {
      return majorize || (secant && (*secant)[term]);
    };
    auto curv = [&](double t, std::size_t term) {
      return use_secant(term) ? k.secant(t) : k.d2(t);
    };
    const std::size_t m = active_.size();
    grad.setZero(m);
    Vector magnitude = Vector::Zero(m);

    double max_curv = 0.0;
    for (EdgeIndex e = 0; e < g_.num_edges(); ++e) {
      const auto& edge = g_.edge(e);
      if (pos_[edge.a] == kInactive && pos_[edge.b] == kInactive) continue;
      max_curv = std::max(max_curv, curv(u_[edge.a] - u_[edge.b], e));
    }
    for (std::size_t i = 0; i < active_.size(); ++i) {
      NodeIndex v = active_[i];
      if (mass_[v] > 0.0)
        max_curv = std::max(max_curv, curv(u_[v], g_.num_edges() + i));
    }
    // |t|^p with p > 2 is flat at 0; keep the Newton matrix definite.
    const double floor = max_curv > 0.0 ? 1e-12 * max_curv : 1.0;

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(4 * g_.num_edges() + m);
    for (EdgeIndex e = 0; e < g_.num_edges(); ++e) {
      const auto& edge = g_.edge(e);
      std::size_t ia = pos_[edge.a], ib = pos_[edge.b];
      if (ia == kInactive && ib == kInactive) continue;
      double t = u_[edge.a] - u_[edge.b];
      double c = conductance_[e];
      double d1 = c * k.d1(t);
      double kappa = c * std::max(curv(t, e), floor);
      if (ia != kInactive) {
        grad[ia] += d1;
        magnitude[ia] += std::abs(d1);
        trip.emplace_back(ia, ia, kappa);
      }
      if (ib != kInactive) {
        grad[ib] -= d1;
        magnitude[ib] += std::abs(d1);
        trip.emplace_back(ib, ib, kappa);
      }
      if (ia != kInactive && ib != kInactive) {
        trip.emplace_back(ia, ib, -kappa);
        trip.emplace_back(ib, ia, -kappa);
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      NodeIndex v = active_[i];
      if (mass_[v] > 0.0) {
        double d1 = mass_[v] * k.d1(u_[v]);
        grad[i] += d1;
        magnitude[i] += std::abs(d1);
        trip.emplace_back(i, i, mass_[v] * std::max(curv(u_[v], g_.num_edges() + i), floor));
      }
    }
    hess.resize(m, m);
    hess.setFromTriplets(trip.begin(), trip.end());
    scale = m ? magnitude.maxCoeff() : 0.0;
  }

  static double kkt(const Vector& grad, double scale) {
    if (grad.size() == 0) return 0.0;
    double g = grad.cwiseAbs().maxCoeff();
    if (scale <= 0.0) return g == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return g / scale;
  }

  std::size_t num_terms() const { return g_.num_edges() + active_.size(); }

  /// Marks terms whose argument the step `d` moves by more than `ratio`
  /// times its current size (Newton overshoot on a near-zero difference).
  /// Returns the number of newly marked terms.
  std::size_t mark_overshoots(const Vector& d, double ratio,
                              std::vector<char>& secant) const {
    auto delta = [&](NodeIndex v) {
      return pos_[v] == kInactive ? 0.0 : d[pos_[v]];
    };
    std::size_t added = 0;
    for (EdgeIndex e = 0; e < g_.num_edges(); ++e) {
      if (secant[e]) continue;
      const auto& edge = g_.edge(e);
      if (pos_[edge.a] == kInactive && pos_[edge.b] == kInactive) continue;
      double t = u_[edge.a] - u_[edge.b];
      if (std::abs(delta(edge.a) - delta(edge.b)) > ratio * std::abs(t)) {
        secant[e] = 1;
        ++added;
      }
    }
    for (std::size_t i = 0; i < active_.size(); ++i) {
      std::size_t term = g_.num_edges() + i;
      NodeIndex v = active_[i];
      if (secant[term] || mass_[v] == 0.0) continue;
      if (std::abs(d[i]) > ratio * std::abs(u_[v])) {
        secant[term] = 1;
        ++added;
      }
    }
    return added;
  }

  void apply_step(const Vector& d, double t, std::vector<double>& out) const {
    out = u_;
    for (std::size_t i = 0; i < active_.size(); ++i) out[active_[i]] += t * d[i];
  }

 private:
  static constexpr std::size_t kInactive = static_cast<std::size_t>(-1);

  const MetricMeasureGraph& g_;
  const SolverConfig& cfg_;
  Kernel kernel_;
  std::vector<double> u_;
  std::vector<std::size_t> pos_;
  std::vector<NodeIndex> active_;
  std::vector<double> conductance_;
  std::vector<double> mass_;
};

bool factor_and_solve(const SparseMatrix& hess, const Vector& rhs, Vector& out) {
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(hess);
  if (ldlt.info() != Eigen::Success) return false;
  if ((ldlt.vectorD().array() <= 0.0).any()) return false;
  out = ldlt.solve(rhs);
  return ldlt.info() == Eigen::Success && out.allFinite();
}

// Newton direction, shifting the diagonal if the factorization breaks down.
Vector newton_direction(const SparseMatrix& hess, const Vector& grad) {
  Vector d;
  if (factor_and_solve(hess, -grad, d)) return d;
  double diag_max = 0.0;
  for (int k = 0; k < hess.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(hess, k); it; ++it)
      if (it.row() == it.col()) diag_max = std::max(diag_max, std::abs(it.value()));
  double shift = std::max(diag_max, 1.0) * 1e-10;
  for (int attempt = 0; attempt < 20; ++attempt, shift *= 10.0) {
    SparseMatrix shifted = hess;
    for (int i = 0; i < shifted.rows(); ++i) shifted.coeffRef(i, i) += shift;
    if (factor_and_solve(shifted, -grad, d)) return d;
  }
  return -grad;
}

SolveResult run(EnergyProblem& prob, const SolverConfig& cfg,
                const DiscreteFunction* initial) {
  const Kernel kernel(cfg.p, cfg.eps_reg);
  const Kernel quadratic(2.0, cfg.eps_reg);
  SolveDiagnostics diag;
  Vector grad;
  SparseMatrix hess;
  double scale = 0.0;

  if (prob.num_active() == 0) {
    double J = prob.raw_energy(prob.values());
    diag.energy_history = {J};
    diag.final_energy = J;
    diag.converged = true;
    return {DiscreteFunction(prob.values()), diag};
  }

  const bool quadratic_problem = !kernel.smooth && cfg.p == 2.0;

  if (initial) {
    prob.set_active_from(*initial);
  } else if (!quadratic_problem) {
    // Start from the minimizer of the quadratic surrogate.
    prob.linearize(quadratic, grad, hess, scale);
    Vector d = newton_direction(hess, grad);
    std::vector<double> next;
    prob.apply_step(d, 1.0, next);
    prob.values() = next;
  }

  if (quadratic_problem && cfg.force_iterative) {
    diag.energy_history.push_back(prob.energy(prob.values(), kernel));
    prob.linearize(kernel, grad, hess, scale);
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(1e-14);
    cg.setMaxIterations(static_cast<Eigen::Index>(
        std::max<std::size_t>(cfg.max_iter, 10 * prob.num_active())));
    cg.compute(hess);
    Vector d = cg.solve(-grad);
    std::vector<double> next;
    prob.apply_step(d, 1.0, next);
    prob.values() = next;
    prob.linearize(kernel, grad, hess, scale);
    diag.iterations = static_cast<std::size_t>(cg.iterations());
    diag.final_kkt = EnergyProblem::kkt(grad, scale);
    double J = prob.energy(prob.values(), kernel);
    diag.energy_history.push_back(J);
    diag.converged = diag.final_kkt <= cfg.tol_kkt;
    diag.final_energy = prob.raw_energy(prob.values());
    return {DiscreteFunction(prob.values()), diag};
  }

  double J = prob.energy(prob.values(), kernel);
  diag.energy_history.push_back(J);
  double rel_change = std::numeric_limits<double>::infinity();
  std::vector<double> trial;
  constexpr double kTiny = 1e-300;
  int blind_steps = 0;
  std::vector<char> secant(kernel.smooth ? prob.num_terms() : 0, 0);

  for (std::size_t it = 0;; ++it) {
    prob.linearize(kernel, grad, hess, scale);
    diag.final_kkt = EnergyProblem::kkt(grad, scale);
    const bool energy_ok = it > 0 ? rel_change <= cfg.tol_energy : true;
    if (diag.final_kkt <= cfg.tol_kkt && energy_ok) {
      diag.converged = true;
      break;
    }
    if (it >= cfg.max_iter) break;

    Vector d = newton_direction(hess, grad);
    if (kernel.smooth) {
      // |t|^p with p < 2 has unbounded curvature at 0 and Newton flips the
      // sign of near-zero differences; use majorizer curvature on those terms.
      std::fill(secant.begin(), secant.end(), 0);
      for (int pass = 0; pass < 4; ++pass) {
        if (prob.mark_overshoots(d, 0.5, secant) == 0) break;
        double unused = 0.0;
        prob.linearize(kernel, grad, hess, unused, false, &secant);
        d = newton_direction(hess, grad);
      }
    }
    double slope = grad.dot(d);
    if (!(slope < 0.0)) {
      d = -grad;
      slope = -grad.squaredNorm();
    }
    // Decrement at roundoff level: no representable progress remains.
    if (-slope <= 1e-15 * std::max(std::abs(J), kTiny) && blind_steps >= 8) {
      diag.converged = diag.final_kkt <= 100.0 * cfg.tol_kkt;
      break;
    }

    double t = 1.0;
    double J_new = J;
    bool accepted = false;
    auto armijo = [&](const Vector& dir, double dir_slope, int max_halvings) {
      t = 1.0;
      for (int ls = 0; ls <= max_halvings; ++ls, t *= 0.5) {
        prob.apply_step(dir, t, trial);
        J_new = prob.energy(trial, kernel);
        if (std::isfinite(J_new) && J_new <= J + 1e-4 * t * dir_slope) return true;
      }
      return false;
    };
    // Near the optimum the predicted decrease drops below the rounding error
    // of J; accept a bounded number of full Newton steps on the gradient alone.
    const bool roundoff_regime = -slope <= 1e-11 * std::max(std::abs(J), kTiny);
    if (roundoff_regime && blind_steps < 8) {
      prob.apply_step(d, 1.0, trial);
      J_new = prob.energy(trial, kernel);
      if (std::isfinite(J_new) && J_new <= J + 1e-13 * std::abs(J)) {
        ++blind_steps;
        accepted = true;
      }
    }
    if (!accepted && kernel.smooth) {
      // Newton overshoots on near-zero differences when p < 2; fall back to
      // the majorizer step whenever the full Newton step is rejected.
      accepted = armijo(d, slope, 0);
      if (!accepted) {
        SparseMatrix major;
        double unused = 0.0;
        prob.linearize(kernel, grad, major, unused, true);
        Vector dm = newton_direction(major, grad);
        double slope_m = grad.dot(dm);
        if (slope_m < 0.0) accepted = armijo(dm, slope_m, 60);
      }
    }
    if (!accepted) accepted = armijo(d, slope, 60);
    if (accepted && J_new > J) J_new = J;
    if (!accepted) {
      diag.converged = diag.final_kkt <= 100.0 * cfg.tol_kkt;
      break;
    }
    prob.values().swap(trial);
    rel_change = (J - J_new) / std::max(std::abs(J_new), kTiny);
    J = J_new;
    diag.energy_history.push_back(J);
    diag.iterations = it + 1;
  }

  diag.final_energy = prob.raw_energy(prob.values());
  return {DiscreteFunction(prob.values()), diag};
}

}  // namespace

SolveResult minimize_p_energy(const MetricMeasureGraph& g, const FixedValues& fixed,
                              const NodeSet& free, const SolverConfig& cfg,
                              const DiscreteFunction* initial) {
  cfg.validate();
  free.check_within(g);
  EnergyProblem prob(g, fixed, free.mask(g.num_nodes()), false, cfg);
  return run(prob, cfg, initial);
}

SolveResult minimize_newtonian_norm(const MetricMeasureGraph& g,
                                    const FixedValues& fixed,
                                    const SolverConfig& cfg,
                                    const DiscreteFunction* initial) {
  cfg.validate();
  std::vector<char> free_mask(g.num_nodes(), 1);
  for (const auto& [v, value] : fixed) {
    (void)value;
    if (v >= g.num_nodes()) throw ValidationError("fixed node index outside the graph");
    free_mask[v] = 0;
  }
  EnergyProblem prob(g, fixed, free_mask, true, cfg);
  return run(prob, cfg, initial);
}

double poincare_quotient(const MetricMeasureGraph& g, const DiscreteFunction& u,
                         double p) {
  u.check_on(g);
  double mass = 0.0;
  for (NodeIndex v = 0; v < g.num_nodes(); ++v)
    mass += g.measure(v) * std::pow(std::abs(u[v]), p);
  double energy = p_energy(g, min_upper_gradient(g, u), p);
  if (mass == 0.0) return 0.0;
  if (energy == 0.0) return std::numeric_limits<double>::infinity();
  return mass / energy;
}

namespace {

// Smallest eigenpair of K x = lambda M x over the nodes of E (zero outside).
std::pair<double, std::vector<double>> dirichlet_ground_state(
    const MetricMeasureGraph& g, const NodeSet& E) {
  const std::size_t m = E.size();
  std::vector<std::size_t> pos(g.num_nodes(), static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < m; ++i) pos[E.members()[i]] = i;
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& e : g.edges()) {
    double c = e.weight / (e.length * e.length);
    std::size_t ia = pos[e.a], ib = pos[e.b];
    bool a_in = ia != static_cast<std::size_t>(-1);
    bool b_in = ib != static_cast<std::size_t>(-1);
    if (a_in) trip.emplace_back(ia, ia, c);
    if (b_in) trip.emplace_back(ib, ib, c);
    if (a_in && b_in) {
      trip.emplace_back(ia, ib, -c);
      trip.emplace_back(ib, ia, -c);
    }
  }
  SparseMatrix K(m, m);
  K.setFromTriplets(trip.begin(), trip.end());
  Vector mass(m);
  for (std::size_t i = 0; i < m; ++i) mass[i] = g.measure(E.members()[i]);

  Vector x;
  double lambda = 0.0;
  if (m <= 1500) {
    // Symmetric reduction M^{-1/2} K M^{-1/2}.
    Vector inv_sqrt = mass.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd dense = inv_sqrt.asDiagonal() * Eigen::MatrixXd(K) *
                            inv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense);
    lambda = eig.eigenvalues()[0];
    x = inv_sqrt.asDiagonal() * eig.eigenvectors().col(0);
  } else {
    Eigen::SimplicialLDLT<SparseMatrix> ldlt(K);
    x = Vector::Ones(m);
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 20000; ++it) {
      Vector y = ldlt.solve(mass.asDiagonal() * x);
      double norm = std::sqrt(y.dot(mass.asDiagonal() * y));
      x = y / norm;
      lambda = x.dot(K * x);
      if (std::abs(prev - lambda) <= 1e-15 * lambda) break;
      prev = lambda;
    }
  }
  if (x.sum() < 0) x = -x;
  double peak = x.cwiseAbs().maxCoeff();
  std::vector<double> full(g.num_nodes(), 0.0);
  for (std::size_t i = 0; i < m; ++i) full[E.members()[i]] = x[i] / peak;
  return {lambda, full};
}

}  // namespace

PoincareResult poincare_constant(const MetricMeasureGraph& g, const NodeSet& E,
                                 double p, const SolverConfig& cfg) {
  if (E.empty()) throw ValidationError("Poincare constant of an empty set");
  E.check_within(g);
  if (!(p > 1.0)) throw ValidationError("Poincare constant needs p > 1");

  // A graph component inside E carries the constant function.
  auto in_E = E.mask(g.num_nodes());
  std::vector<int> comp(g.num_nodes(), -1);
  for (NodeIndex s = 0; s < g.num_nodes(); ++s) {
    if (comp[s] >= 0) continue;
    std::vector<NodeIndex> members{s};
    comp[s] = static_cast<int>(s);
    bool leaves_E = !in_E[s];
    for (std::size_t k = 0; k < members.size(); ++k)
      for (const auto& inc : g.neighbors(members[k]))
        if (comp[inc.neighbor] < 0) {
          comp[inc.neighbor] = static_cast<int>(s);
          leaves_E = leaves_E || !in_E[inc.neighbor];
          members.push_back(inc.neighbor);
        }
    if (!leaves_E)
      return PoincareResult{std::numeric_limits<double>::infinity(),
                            DiscreteFunction::indicator(g, NodeSet(members)),
                            true};
  }

  auto [lambda, ground] = dirichlet_ground_state(g, E);
  DiscreteFunction eigenfunction(std::move(ground));
  if (p == 2.0) return PoincareResult{1.0 / lambda, eigenfunction, true};

  // Lower bound: best quotient over the candidate family.
  PoincareResult best{poincare_quotient(g, eigenfunction, p), eigenfunction, false};
  auto consider = [&](const DiscreteFunction& u) {
    double q = poincare_quotient(g, u, p);
    if (q > best.value) best = PoincareResult{q, u, false};
  };
  for (NodeIndex v : E.members())
    consider(DiscreteFunction::indicator(g, NodeSet({v})));

  SolverConfig inner = cfg;
  inner.p = p;
  auto potential_of = [&](const NodeSet& A) {
    FixedValues fixed;
    for (NodeIndex v : A.members()) fixed.emplace_back(v, 1.0);
    return minimize_p_energy(g, fixed, set_difference(E, A), inner).u;
  };
  NodeSet core = interior(g, E);
  if (!core.empty() && core.size() < E.size()) consider(potential_of(core));
  std::size_t peak = 0;
  for (std::size_t i = 0; i < g.num_nodes(); ++i)
    if (eigenfunction[i] > eigenfunction[peak]) peak = i;
  consider(potential_of(NodeSet({peak})));
  return best;
}

}  // namespace ncap
