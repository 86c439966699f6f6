#include "ncap/properties.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "ncap/region.hpp"

namespace ncap {

namespace {

nlohmann::json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

}  // namespace

// -- PropertyReport -----------------------------------------------------------

void PropertyReport::add_le(std::string name, std::string tag, std::string instance,
                            double lhs, double rhs, double tol, bool converged) {
  CheckRecord c{std::move(name), std::move(tag), std::move(instance), lhs, rhs,
                rhs - lhs, tol, false, false, ""};
  if (lhs == rhs) c.margin = 0.0;  // also covers inf <= inf
  c.pass = converged && c.margin >= -tol;
  if (!converged) c.note = "solver did not converge";
  checks.push_back(std::move(c));
}

void PropertyReport::add_eq(std::string name, std::string tag, std::string instance,
                            double lhs, double rhs, double tol, bool converged) {
  CheckRecord c{std::move(name), std::move(tag), std::move(instance), lhs, rhs,
                lhs == rhs ? 0.0 : -std::abs(lhs - rhs), tol, false, false, ""};
  c.pass = converged && c.margin >= -tol;
  if (!converged) c.note = "solver did not converge";
  checks.push_back(std::move(c));
}

void PropertyReport::add_lt(std::string name, std::string tag, std::string instance,
                            double lhs, double rhs, bool converged) {
  CheckRecord c{std::move(name), std::move(tag), std::move(instance), lhs, rhs,
                rhs - lhs, 0.0, true, false, ""};
  c.pass = converged && c.margin > 0.0;
  if (!converged) c.note = "solver did not converge";
  checks.push_back(std::move(c));
}

void PropertyReport::add_failure(std::string name, std::string tag,
                                 std::string instance, std::string note) {
  CheckRecord c{std::move(name), std::move(tag), std::move(instance),
                std::numeric_limits<double>::quiet_NaN(),
                std::numeric_limits<double>::quiet_NaN(),
                std::numeric_limits<double>::quiet_NaN(), 0.0, false, false,
                std::move(note)};
  checks.push_back(std::move(c));
}

void PropertyReport::append(const PropertyReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  plots.insert(plots.end(), other.plots.begin(), other.plots.end());
}

std::size_t PropertyReport::passed() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const auto& c) { return c.pass; }));
}

double PropertyReport::worst_margin(const std::string& tag) const {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& c : checks)
    if (c.tag == tag)
      worst = std::min(worst, std::isnan(c.margin)
                                  ? -std::numeric_limits<double>::infinity()
                                  : c.margin);
  return worst;
}

nlohmann::json PropertyReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json j{{"name", c.name},         {"tag", c.tag},
                     {"instance", c.instance}, {"lhs", number(c.lhs)},
                     {"rhs", number(c.rhs)},   {"margin", number(c.margin)},
                     {"tolerance", c.tolerance}, {"pass", c.pass}};
    if (c.strict) j["strict"] = true;
    if (!c.note.empty()) j["note"] = c.note;
    arr.push_back(std::move(j));
  }
  return nlohmann::json{{"suite", suite},
                        {"config", config},
                        {"checks", std::move(arr)},
                        {"summary",
                         {{"total", checks.size()},
                          {"passed", passed()},
                          {"failed", failed()}}}};
}

std::string PropertyReport::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "name,tag,instance,lhs,rhs,margin,tolerance,pass\n";
  for (const auto& c : checks)
    out << c.name << ',' << c.tag << ",\"" << c.instance << "\"," << c.lhs << ','
        << c.rhs << ',' << c.margin << ',' << c.tolerance << ','
        << (c.pass ? "true" : "false") << '\n';
  return out.str();
}

nlohmann::json PropertyReport::plot_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : plots) {
    nlohmann::json ys = nlohmann::json::array();
    for (double y : s.y) ys.push_back(number(y));
    arr.push_back({{"name", s.name}, {"x_label", s.x_label}, {"x", s.x}, {"y", ys}});
  }
  return arr;
}

// -- Axiom suite ------------------------------------------------------------

namespace {

class RandomSets {
 public:
  RandomSets(const MetricMeasureGraph& g, const NodeSet& E, std::uint64_t seed,
             std::size_t instance)
      : g_(g), E_(E), h_(g.num_edges() ? g.min_edge_length() : 1.0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(instance)};
    rng_.seed(seq);
  }

  std::mt19937_64& rng() { return rng_; }

  NodeIndex node_of(const NodeSet& S) {
    std::uniform_int_distribution<std::size_t> pick(0, S.size() - 1);
    return S.members()[pick(rng_)];
  }

  /// Union of 1-4 random boxes or balls inside E, always nonempty.
  NodeSet blob() {
    std::uniform_int_distribution<int> count(1, 4);
    NodeSet out;
    int k = count(rng_);
    for (int i = 0; i < k; ++i) out = set_union(out, piece());
    return out;
  }

  /// Each node of S kept independently with probability q.
  NodeSet thin(const NodeSet& S, double q) {
    std::bernoulli_distribution keep(q);
    std::vector<NodeIndex> out;
    for (NodeIndex v : S.members())
      if (keep(rng_)) out.push_back(v);
    return NodeSet(std::move(out));
  }

 private:
  NodeSet piece() {
    NodeIndex c = node_of(E_);
    std::uniform_real_distribution<double> extent(0.0, 2.5 * h_);
    std::bernoulli_distribution is_ball(0.5);
    std::vector<NodeIndex> out;
    if (g_.has_positions()) {
      auto pc = g_.position(c);
      std::vector<double> half(pc.size());
      for (double& x : half) x = extent(rng_);
      double radius = std::max(extent(rng_), 0.5 * h_);
      bool ball = is_ball(rng_);
      for (NodeIndex v : E_.members()) {
        auto pv = g_.position(v);
        bool in = true;
        double d2 = 0.0;
        for (std::size_t i = 0; i < pc.size(); ++i) {
          double d = pv[i] - pc[i];
          d2 += d * d;
          if (std::abs(d) > half[i] + 1e-12 * h_) in = false;
        }
        if (ball) in = d2 <= radius * radius * (1 + 1e-12);
        if (in) out.push_back(v);
      }
    } else {
      double radius = extent(rng_);
      auto dist = graph_distance(g_, NodeSet({c}));
      for (NodeIndex v : E_.members())
        if (dist[v] <= radius) out.push_back(v);
    }
    out.push_back(c);
    return NodeSet(std::move(out));
  }

  const MetricMeasureGraph& g_;
  const NodeSet& E_;
  double h_;
  std::mt19937_64 rng_;
};

std::string describe(const NodeSet& S) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < S.size(); ++i) out << (i ? "," : "") << S.members()[i];
  out << '}';
  return out.str();
}

struct Cap {
  double value;
  bool converged;
};

class InstanceRunner {
 public:
  InstanceRunner(const MetricMeasureGraph& g, const NodeSet& E, const SolverConfig& cfg,
                 double tol, std::optional<double> poincare, std::uint64_t seed,
                 std::size_t index)
      : g_(g), E_(E), cfg_(cfg), tol_(tol), poincare_(poincare),
        sets_(g, E, seed, index), label_("instance " + std::to_string(index)) {}

  PropertyReport run() {
    NodeSet A1 = sets_.blob();
    NodeSet A2 = sets_.blob();
    const double h = g_.num_edges() ? g_.min_edge_length() : 1.0;

    // (ii) monotone in A
    NodeSet A1B = set_union(A1, sets_.blob());
    le("monotone-in-A", "thm-cp-ii", describe(A1) + " in " + describe(A1B),
       cap(A1), cap(A1B));

    // (iii) antitone in E
    {
      NodeSet E1 = set_union(A1, set_difference(E_, sets_.blob()));
      le("antitone-in-E", "thm-cp-iii", "A=" + describe(A1) + " E1=" + describe(E1),
         cap(A1), cap_in(A1, E1));
    }

    // (iv) strong subadditivity
    {
      Cap u = cap(set_union(A1, A2)), i = cap(set_intersection(A1, A2));
      Cap a = cap(A1), b = cap(A2);
      le("strong-subadditivity", "thm-cp-iv", describe(A1) + " / " + describe(A2),
         {u.value + i.value, u.converged && i.converged},
         {a.value + b.value, a.converged && b.converged});
    }

    // (v) finite subadditivity
    {
      std::uniform_int_distribution<int> count(2, 4);
      int k = count(sets_.rng());
      NodeSet uni;
      Cap sum{0.0, true};
      std::string desc;
      for (int j = 0; j < k; ++j) {
        NodeSet C = sets_.blob();
        uni = set_union(uni, C);
        Cap c = cap(C);
        sum.value += c.value;
        sum.converged = sum.converged && c.converged;
        desc += (j ? " + " : "") + describe(C);
      }
      le("finite-subadditivity", "thm-cp-v", desc, cap(uni), sum);
    }

    // (vi) increasing unions; the p = 1 mode is report-only and skipped
    if (!cfg_.p_one_mode()) {
      SetFamily fam{{sets_.blob()}, Monotonicity::increasing};
      for (int j = 0; j < 3; ++j) fam.sets.push_back(set_union(fam.sets.back(), sets_.blob()));
      fam.sets.push_back(fam.sets.back());  // stabilized
      fam.validate();
      nested_checks(fam, "increasing-union", "thm-cp-vi");
    }

    // (vii) boundary identity on a combinatorially closed F
    {
      std::optional<NodeSet> F;
      for (int attempt = 0; attempt < 8 && !F; ++attempt) {
        NodeSet hull = closed_hull(g_, sets_.blob());
        if (hull.is_subset_of(E_)) F = hull;
      }
      if (F) {
        auto bc = boundary_capacity_check(g_, *F, E_, cfg_);
        bool ok = bc.cap_f.converged() && bc.cap_boundary.converged();
        report_.add_eq("boundary-identity", "thm-cp-vii", label_ + " F=" + describe(*F),
                       bc.cap_f.value, bc.cap_boundary.value, tol_, ok);
        report_.add_le("boundary-pasting", "thm-cp-vii", label_ + " F=" + describe(*F),
                       bc.pasted_energy, bc.cap_boundary.value, tol_, ok);
      }
    }

    // Decreasing compacts
    {
      SetFamily fam{{set_union(set_union(sets_.blob(), sets_.blob()), sets_.blob())},
                    Monotonicity::decreasing};
      for (int j = 0; j < 3; ++j) {
        NodeSet next = set_difference(fam.sets.back(), sets_.thin(fam.sets.back(), 0.3));
        if (next.empty()) next = fam.sets.back();
        fam.sets.push_back(next);
      }
      fam.sets.push_back(fam.sets.back());
      fam.validate();
      nested_checks(fam, "decreasing-compacts", "thm-ki");
    }

    // Outer profile
    {
      std::vector<double> eps{2.5 * h, 1.5 * h, 0.5 * h};
      auto prof = outer_capacity_profile(g_, A1, E_, eps, cfg_);
      bool ok = std::all_of(prof.converged.begin(), prof.converged.end(),
                            [](bool b) { return b; });
      double worst_step = std::numeric_limits<double>::infinity();
      std::size_t worst_at = 1;
      for (std::size_t i = 1; i < prof.capacities.size(); ++i) {
        double step = prof.capacities[i - 1] - prof.capacities[i];
        if (step < worst_step) {
          worst_step = step;
          worst_at = i;
        }
      }
      report_.add_le("profile-nonincreasing", "outer-profile", label_ + " A=" + describe(A1),
                     prof.capacities[worst_at], prof.capacities[worst_at - 1], tol_, ok);
      double lowest = *std::min_element(prof.capacities.begin(), prof.capacities.end());
      report_.add_le("profile-above-cap", "outer-profile", label_ + " A=" + describe(A1),
                     prof.base, lowest, tol_, ok);
      report_.add_eq("profile-final-exact", "outer-profile", label_ + " A=" + describe(A1),
                     prof.limit_estimate, prof.base, tol_, ok);
    }

    // Zero sets: nonempty A has positive cap and C_p
    {
      Cap c = cap(A1);
      auto sob = sobolev_capacity(g_, A1, cfg_);
      report_.add_lt("zero-set-positive", "zero-sets", label_ + " A=" + describe(A1), 0.0,
                     std::min(c.value, sob.value), c.converged && sob.converged());
      if (poincare_)
        report_.add_le("sobolev-vs-variational", "zero-sets",
                       label_ + " A=" + describe(A1), sob.value,
                       (1.0 + *poincare_) * c.value, tol_, c.converged && sob.converged());
    }

    // Ambient monotonicity
    {
      NodeSet all = NodeSet::all(g_);
      NodeSet Y1 = set_union(E_, sets_.thin(set_difference(all, E_), 0.5));
      auto cmp = ambient_comparison(g_, Y1, all, A1, E_, cfg_);
      report_.add_le("ambient-monotone", "ambient-mono",
                     label_ + " A=" + describe(A1) + " |Y1|=" + std::to_string(Y1.size()),
                     cmp.smaller_ambient.value, cmp.larger_ambient.value, tol_,
                     cmp.smaller_ambient.converged() && cmp.larger_ambient.converged());
    }

    // tilde >= cap
    {
      std::vector<NodeSet> family{relative_dilation(g_, A1, E_, 2.5 * h),
                                  relative_dilation(g_, A1, E_, 1.5 * h)};
      auto tilde = tilde_capacity(g_, A1, E_, family, cfg_);
      Cap c = cap(A1);
      report_.add_le("tilde-ge-cap", "tilde-ge-cap", label_ + " A=" + describe(A1), c.value,
                     tilde.value, tol_, c.converged && tilde.converged());
    }
    return std::move(report_);
  }

 private:
  Cap cap(const NodeSet& A) {
    auto key = std::vector<NodeIndex>(A.members().begin(), A.members().end());
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    auto r = variational_capacity(g_, A, E_, cfg_);
    Cap c{r.value, r.converged()};
    memo_.emplace(std::move(key), c);
    return c;
  }

  Cap cap_in(const NodeSet& A, const NodeSet& E) {
    auto r = variational_capacity(g_, A, E, cfg_);
    return {r.value, r.converged()};
  }

  void le(const std::string& name, const std::string& tag, const std::string& desc,
          Cap lhs, Cap rhs) {
    report_.add_le(name, tag, label_ + " " + desc, lhs.value, rhs.value, tol_,
                   lhs.converged && rhs.converged);
  }

  // Monotone along the family, and the limit set attains the stabilized value.
  void nested_checks(const SetFamily& fam, const std::string& name, const std::string& tag) {
    std::vector<Cap> caps;
    bool ok = true;
    for (const auto& S : fam.sets) {
      caps.push_back(cap(S));
      ok = ok && caps.back().converged;
    }
    const bool increasing = fam.tag == Monotonicity::increasing;
    double worst = std::numeric_limits<double>::infinity();
    std::size_t at = 1;
    for (std::size_t j = 1; j < caps.size(); ++j) {
      double step = increasing ? caps[j].value - caps[j - 1].value
                               : caps[j - 1].value - caps[j].value;
      if (step < worst) {
        worst = step;
        at = j;
      }
    }
    double lo = increasing ? caps[at - 1].value : caps[at].value;
    double hi = increasing ? caps[at].value : caps[at - 1].value;
    report_.add_le(name + "-monotone", tag, label_ + " step " + std::to_string(at), lo, hi,
                   tol_, ok);

    NodeSet limit = fam.sets.front();
    for (const auto& S : fam.sets)
      limit = increasing ? set_union(limit, S) : set_intersection(limit, S);
    Cap lim = cap(limit);
    report_.add_eq(name + "-limit", tag, label_ + " limit=" + describe(limit), lim.value,
                   caps.back().value, tol_, ok && lim.converged);
  }

  const MetricMeasureGraph& g_;
  const NodeSet& E_;
  const SolverConfig& cfg_;
  double tol_;
  std::optional<double> poincare_;
  RandomSets sets_;
  std::string label_;
  std::map<std::vector<NodeIndex>, Cap> memo_;
  PropertyReport report_;
};

}  // namespace

PropertyReport check_capacity_axioms(const MetricMeasureGraph& g, const NodeSet& E,
                                     const SolverConfig& cfg,
                                     const AxiomSuiteOptions& opts) {
  cfg.validate();
  E.check_within(g);
  if (E.empty()) throw ValidationError("axiom suite needs a nonempty E");
  if (opts.n_instances < 1) throw ValidationError("axiom suite needs n_instances >= 1");

  PropertyReport report;
  report.suite = "capacity-axioms";
  report.config = {{"p", cfg.p},
                   {"tol_energy", cfg.tol_energy},
                   {"tol_kkt", cfg.tol_kkt},
                   {"max_iter", cfg.max_iter},
                   {"eps_reg", cfg.eps_reg},
                   {"n_instances", opts.n_instances},
                   {"seed", opts.seed},
                   {"tolerance", opts.tolerance},
                   {"space_hash", g.content_hash()},
                   {"E_size", E.size()},
                   {"report_only", cfg.p_one_mode()}};

  // Trivial family {empty set}.
  {
    NodeSet none;
    auto c = variational_capacity(g, none, E, cfg);
    report.add_eq("empty-set", "thm-cp-i", "A={}", c.value, 0.0, opts.tolerance,
                  c.converged());
    auto s = sobolev_capacity(g, none, cfg);
    report.add_eq("empty-set-sobolev", "zero-sets", "A={}", s.value, 0.0, opts.tolerance,
                  s.converged());
  }

  std::optional<double> poincare;
  if (cfg.p == 2.0) {
    auto pc = poincare_constant(g, E, 2.0, cfg);
    if (std::isfinite(pc.value)) poincare = pc.value;
  }

  std::vector<PropertyReport> parts(opts.n_instances);
  auto work = [&](std::size_t i) {
    try {
      parts[i] = InstanceRunner(g, E, cfg, opts.tolerance, poincare, opts.seed, i).run();
    } catch (const std::exception& e) {
      parts[i] = PropertyReport{};
      parts[i].add_failure("instance-error", "error", "instance " + std::to_string(i),
                           e.what());
    }
  };
  unsigned threads = opts.threads ? opts.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(opts.n_instances)));
  if (threads == 1) {
    for (std::size_t i = 0; i < opts.n_instances; ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < opts.n_instances; i += threads) work(i);
      });
    for (auto& th : pool) th.join();
  }
  for (const auto& part : parts) report.append(part);

  return report;
}

}  // namespace ncap
