#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ncap/capacity.hpp"
#include "ncap/solver.hpp"
#include "ncap/space.hpp"

namespace ncap {

struct CheckRecord {
  std::string name;
  std::string tag;       // theorem clause tag, e.g. "thm-cp-iv"
  std::string instance;  // instance descriptor
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tolerance = 0.0;
  bool strict = false;   // strict checks pass only for margin > 0
  bool pass = false;
  std::string note;
};

struct PlotSeries {
  std::string name;
  std::string x_label;  // "h" or "eps"
  std::vector<double> x;
  std::vector<double> y;
};

/// Ordered list of checks. A check passes iff margin >= -tolerance (margin
/// > 0 for strict checks) and every solve behind it converged.
struct PropertyReport {
  std::string suite;
  nlohmann::json config = nlohmann::json::object();
  std::vector<CheckRecord> checks;
  std::vector<PlotSeries> plots;

  /// lhs <= rhs
  void add_le(std::string name, std::string tag, std::string instance, double lhs,
              double rhs, double tol, bool converged = true);
  /// lhs == rhs
  void add_eq(std::string name, std::string tag, std::string instance, double lhs,
              double rhs, double tol, bool converged = true);
  /// lhs < rhs
  void add_lt(std::string name, std::string tag, std::string instance, double lhs,
              double rhs, bool converged = true);
  void add_failure(std::string name, std::string tag, std::string instance,
                   std::string note);
  void append(const PropertyReport& other);

  std::size_t passed() const;
  std::size_t failed() const { return checks.size() - passed(); }
  bool all_passed() const { return failed() == 0; }
  /// Worst margin among checks carrying `tag` (+inf if none).
  double worst_margin(const std::string& tag) const;

  nlohmann::json to_json() const;
  std::string to_csv() const;
  nlohmann::json plot_json() const;
};

struct AxiomSuiteOptions {
  std::size_t n_instances = 50;
  std::uint64_t seed = 7;
  double tolerance = 1e-7;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Seeded random set pairs and families inside E, checked against every
/// capacity axiom. Tags: thm-cp-i .. thm-cp-vii, thm-ki, outer-profile,
/// zero-sets, ambient-mono, tilde-ge-cap. Increasing unions (thm-cp-vi) are
/// skipped in the p = 1 mode.
PropertyReport check_capacity_axioms(const MetricMeasureGraph& g, const NodeSet& E,
                                     const SolverConfig& cfg,
                                     const AxiomSuiteOptions& opts);

// -- Fixtures ---------------------------------------------------------------

struct Fixture {
  MetricMeasureGraph graph;
  NodeSet A;
  NodeSet E;
  std::string description;
};

/// 9x9 lattice on the unit square (h = 1/8), E = inner 7x7 block, A empty.
Fixture grid9_fixture();

/// Unweighted 2-D condenser: A = {|x| <= r}, E = {|x| < R}, lattice on the
/// closed disk of radius R + 2h.
Fixture annulus_fixture(double h, double r = 1.0, double R = std::exp(1.0));

/// Radial reduction of the shell r < |x| < R in R^n with weight w(s) to a
/// path of spacing ~h: edge weight area_{n-1} s^{n-1} w(s) ds at midpoints.
/// A = {s = r}, E = every node except s = R.
Fixture radial_path_fixture(int n, const std::string& weight_spec, double r,
                            double R, double h);

// -- Refinement experiments -------------------------------------------------

enum class Trend { converge_to_value, monotone_growth, monotone_decay };
std::string to_string(Trend t);

struct ExperimentSpec {
  std::string name;
  std::vector<double> mesh;      // strictly decreasing h
  std::vector<double> p_values;
  Trend trend = Trend::monotone_decay;
  std::optional<double> target;  // converge-to-value only

  void validate() const;
};

std::vector<std::string> experiment_names();
/// Registered defaults; throws ValidationError for unknown names.
ExperimentSpec default_experiment(const std::string& name);

PropertyReport run_paper_example(const ExperimentSpec& spec, const SolverConfig& cfg);

struct ConvergenceFixture {
  std::string name = "annulus";  // "annulus" or "radial"
  int n = 2;
  std::string weight = "const:1";
  double r = 1.0;
  double R = std::exp(1.0);
};

/// Per-h relative errors against the fixture's oracle. Checks the finest
/// error against `tolerance` and, with two or more levels, that errors do
/// not increase over the last two refinements. Throws when the fixture has
/// no oracle for cfg.p.
PropertyReport convergence_study(const ConvergenceFixture& fixture,
                                 std::span<const double> h_schedule,
                                 const SolverConfig& cfg, double tolerance);

}  // namespace ncap
