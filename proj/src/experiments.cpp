#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ncap/grid.hpp"
#include "ncap/properties.hpp"
#include "ncap/region.hpp"

namespace ncap {

namespace {

std::string h_label(double h) {
  std::ostringstream out;
  out << "h=" << h;
  return out.str();
}

// Lattice node at the origin.
NodeSet origin(const MetricMeasureGraph& g, double h) {
  return Region::ball({0.0, 0.0}, 0.25 * h, false).evaluate(g);
}

Region box2(double x0, double y0, double x1, double y1, bool open) {
  return Region::box({x0, y0}, {x1, y1}, open);
}

std::vector<NodeSet> tilde_family(const MetricMeasureGraph& g, const NodeSet& A,
                                  const NodeSet& E) {
  std::vector<NodeSet> family;
  for (double rho : {0.5, 0.3, 0.2}) family.push_back(relative_dilation(g, A, E, rho));
  return family;
}

void add_trend_checks(PropertyReport& report, const std::string& name,
                      const std::string& tag, const std::vector<double>& h,
                      const std::vector<double>& values, const std::vector<bool>& ok,
                      Trend trend, std::optional<double> target) {
  for (std::size_t k = 1; k < values.size(); ++k) {
    std::string inst = h_label(h[k - 1]) + " -> " + h_label(h[k]);
    bool conv = ok[k - 1] && ok[k];
    switch (trend) {
      case Trend::monotone_decay:
        report.add_lt(name + "-strict-decay", tag, inst, values[k], values[k - 1], conv);
        break;
      case Trend::monotone_growth:
        report.add_lt(name + "-strict-growth", tag, inst, values[k - 1], values[k], conv);
        break;
      case Trend::converge_to_value:
        if (target) {
          double e0 = std::abs(values[k - 1] - *target);
          double e1 = std::abs(values[k] - *target);
          report.add_le(name + "-error-nonincreasing", tag, inst, e1, e0, 0.0, conv);
        } else if (k >= 2) {
          // No closed-form target: increments must contract.
          double d0 = std::abs(values[k - 1] - values[k - 2]);
          double d1 = std::abs(values[k] - values[k - 1]);
          report.add_lt(name + "-increments-contract", tag, inst, d1, d0, conv);
        }
        break;
    }
  }
}

struct Series {
  std::vector<double> values;
  std::vector<bool> converged;
  void push(const CapacityResult& r) {
    values.push_back(r.value);
    converged.push_back(r.converged());
  }
};

}  // namespace

// -- Fixtures -----------------------------------------------------------------

Fixture grid9_fixture() {
  auto g = build_grid(box2(0, 0, 1, 1, false), 0.125, ScalarField::constant(1.0), 2.0);
  NodeSet E = box2(0.125, 0.125, 0.875, 0.875, false).evaluate(g);
  return Fixture{std::move(g), NodeSet{}, std::move(E), "9x9 unit-square lattice, E = inner 7x7"};
}

Fixture annulus_fixture(double h, double r, double R) {
  if (!(0.0 < r && r < R)) throw ValidationError("annulus needs 0 < r < R");
  auto g = build_grid(Region::ball({0.0, 0.0}, R + 2.0 * h, false), h,
                      ScalarField::constant(1.0), 2.0);
  NodeSet A = Region::ball({0.0, 0.0}, r, false).evaluate(g);
  NodeSet E = Region::ball({0.0, 0.0}, R, true).evaluate(g);
  std::ostringstream d;
  d << "annulus condenser r=" << r << " R=" << R << " h=" << h;
  return Fixture{std::move(g), std::move(A), std::move(E), d.str()};
}

Fixture radial_path_fixture(int n, const std::string& weight_spec, double r, double R,
                            double h) {
  if (!(0.0 < r && r < R)) throw ValidationError("radial path needs 0 < r < R");
  if (!(h > 0.0)) throw ValidationError("radial path needs h > 0");
  auto weight = ScalarField::parse(weight_spec);
  const double area = unit_sphere_area(n);
  const std::size_t cells = static_cast<std::size_t>(std::ceil((R - r) / h - 1e-9));
  std::vector<double> s(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i)
    s[i] = r + (R - r) * static_cast<double>(i) / static_cast<double>(cells);
  s.back() = R;

  auto shell = [&](double x) {
    double pt[1] = {x};
    return area * std::pow(x, n - 1) * weight.eval(pt);
  };
  std::vector<NodeData> nodes;
  std::vector<EdgeData> edges;
  for (std::size_t i = 0; i <= cells; ++i) {
    double lo = i > 0 ? s[i] - s[i - 1] : 0.0;
    double hi = i < cells ? s[i + 1] - s[i] : 0.0;
    nodes.push_back(NodeData{static_cast<NodeId>(i), shell(s[i]) * 0.5 * (lo + hi), {}});
  }
  for (std::size_t i = 0; i < cells; ++i) {
    double len = s[i + 1] - s[i];
    edges.push_back(EdgeData{static_cast<NodeId>(i), static_cast<NodeId>(i + 1), len,
                             shell(0.5 * (s[i] + s[i + 1])) * len});
  }
  SpaceMeta meta;
  meta.dimension = 1;
  meta.mesh_size = (R - r) / static_cast<double>(cells);
  auto g = MetricMeasureGraph::build(std::move(nodes), std::move(edges), meta);
  std::vector<NodeIndex> inner{0};
  std::vector<NodeIndex> e_nodes;
  for (NodeIndex i = 0; i < cells; ++i) e_nodes.push_back(i);
  std::ostringstream d;
  d << "radial path n=" << n << " w=" << weight_spec << " r=" << r << " R=" << R
    << " cells=" << cells;
  return Fixture{std::move(g), NodeSet(inner), NodeSet(e_nodes), d.str()};
}

// -- Experiments --------------------------------------------------------------

std::string to_string(Trend t) {
  switch (t) {
    case Trend::converge_to_value:
      return "converge-to-value";
    case Trend::monotone_growth:
      return "monotone-growth";
    case Trend::monotone_decay:
      break;
  }
  return "monotone-decay";
}

void ExperimentSpec::validate() const {
  if (mesh.empty()) throw ValidationError("experiment needs a mesh schedule");
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    if (!(mesh[i] > 0.0)) throw ValidationError("mesh sizes must be positive");
    if (i > 0 && !(mesh[i] < mesh[i - 1]))
      throw ValidationError("mesh schedule must be strictly decreasing");
  }
  if (p_values.empty()) throw ValidationError("experiment needs at least one p");
}

std::vector<std::string> experiment_names() {
  return {"open-rectangle", "closed-square", "dense-set", "bow-tie"};
}

ExperimentSpec default_experiment(const std::string& name) {
  const std::vector<double> mesh{0.125, 0.0625, 0.03125};
  if (name == "open-rectangle")
    return {name, mesh, {1.5}, Trend::converge_to_value, std::nullopt};
  if (name == "closed-square") return {name, mesh, {1.5, 2.0}, Trend::monotone_decay, {}};
  if (name == "dense-set")
    return {name, mesh, {2.0}, Trend::converge_to_value,
            2.0 * std::numbers::pi / std::log(2.0)};
  if (name == "bow-tie") return {name, mesh, {1.5, 2.0}, Trend::monotone_decay, {}};
  throw ValidationError("unknown example: " + name);
}

PropertyReport run_paper_example(const ExperimentSpec& spec, const SolverConfig& cfg) {
  spec.validate();
  auto names = experiment_names();
  if (std::find(names.begin(), names.end(), spec.name) == names.end())
    throw ValidationError("unknown example: " + spec.name);

  PropertyReport report;
  report.suite = "example:" + spec.name;
  report.config = {{"mesh", spec.mesh},
                   {"p", spec.p_values},
                   {"trend", to_string(spec.trend)},
                   {"tol_energy", cfg.tol_energy},
                   {"tol_kkt", cfg.tol_kkt}};
  if (spec.target) report.config["target"] = *spec.target;
  if (spec.name == "dense-set")
    report.config["modeling"] =
        "the countable removed set D is modeled by the empty set at every h "
        "(capacity-zero sets are invisible on the lattice)";

  for (double p : spec.p_values) {
    SolverConfig c = cfg;
    c.p = p;
    const std::string ptag = "p=" + std::to_string(p).substr(0, 4);
    Series primary, secondary;
    std::vector<bool> touches;

    for (double h : spec.mesh) {
      if (spec.name == "closed-square" || spec.name == "open-rectangle") {
        auto g = build_grid(box2(-1.25, -0.25, 1.25, 1.25, false), h,
                            ScalarField::constant(1.0), p);
        if (spec.name == "closed-square") {
          NodeSet E = box2(-1, 0, 1, 1, false).evaluate(g);
          NodeSet A = origin(g, h);
          auto cap = variational_capacity(g, A, E, c);
          primary.push(cap);
          touches.push_back(cap.a_touches_boundary);
          auto family = tilde_family(g, A, E);
          secondary.push(tilde_capacity(g, A, E, family, c));
        } else {
          NodeSet E = box2(-1, 0, 1, 1, true).evaluate(g);
          Region wedge = Region::intersect({Region::halfspace({1.0, -1.0}, 0.0, true),
                                            Region::halfspace({-1.0, -1.0}, 0.0, true),
                                            Region::halfspace({0.0, 1.0}, 0.5, true)});
          NodeSet A = wedge.evaluate(g);
          auto cap = variational_capacity(g, A, E, c);
          primary.push(cap);
          touches.push_back(cap.a_touches_boundary);
        }
      } else if (spec.name == "dense-set") {
        Region disk = Region::ball({0.0, 0.0}, 1.0 + 2.0 * h, false);
        Region unit = Region::ball({0.0, 0.0}, 1.0, true);
        Region inner = Region::ball({0.0, 0.0}, 0.5, false);
        auto g = build_grid(disk, h, ScalarField::constant(1.0), p);
        // Removal set D_h is empty: E = B(0,1) minus nothing.
        NodeSet E = unit.evaluate(g);
        NodeSet A = inner.evaluate(g);
        auto on_E = variational_capacity(g, set_intersection(A, E), E, c);
        auto g_ball = build_grid(disk, h, ScalarField::constant(1.0), p);
        auto on_ball = variational_capacity(g_ball, inner.evaluate(g_ball),
                                            unit.evaluate(g_ball), c);
        report.add_eq("dense-set-identity", "example", ptag + " " + h_label(h),
                      on_E.value, on_ball.value, 1e-12,
                      on_E.converged() && on_ball.converged());
        primary.push(on_E);
      } else {  // bow-tie
        Region X = Region::unite({box2(0, 0, 2, 2, false), box2(-2, -2, 0, 0, false)});
        Region E1 = Region::subtract(box2(0, 0, 1, 1, false),
                                     Region::unite({Region::halfspace({-1.0, 0.0}, -1.0, false),
                                                    Region::halfspace({0.0, -1.0}, -1.0, false)}));
        Region lower = Region::intersect({X, Region::halfspace({1.0, -1.0}, 0.0, false),
                                          Region::halfspace({0.0, 1.0}, 0.0, false)});
        Region E2 = Region::unite({E1, lower});
        auto g = build_grid(X, h, ScalarField::constant(1.0), p);
        NodeSet A = origin(g, h);
        NodeSet e1 = E1.evaluate(g);
        NodeSet e2 = E2.evaluate(g);
        auto cap = variational_capacity(g, A, e1, c);
        primary.push(cap);
        touches.push_back(cap.a_touches_boundary);
        secondary.push(tilde_capacity(g, A, e2, tilde_family(g, A, e2), c));
      }
    }

    const std::string primary_name =
        spec.name == "bow-tie" ? "cap(A,E1)" : (spec.name == "dense-set" ? "cap(A cap E,E)"
                                                                         : "cap(A,E)");
    add_trend_checks(report, "cap", "example", spec.mesh, primary.values,
                     primary.converged, spec.trend, spec.target);
    report.plots.push_back({ptag + " " + primary_name, "h", spec.mesh, primary.values});
    if (!secondary.values.empty()) {
      const std::string tilde_name = spec.name == "bow-tie" ? "tilde(A,E2)" : "tilde(A,E)";
      add_trend_checks(report, "tilde", "example", spec.mesh, secondary.values,
                       secondary.converged, Trend::monotone_growth, std::nullopt);
      report.plots.push_back({ptag + " " + tilde_name, "h", spec.mesh, secondary.values});
    }
    for (std::size_t k = 0; k < touches.size(); ++k)
      report.add_eq("A-touches-boundary-flag", "example",
                    ptag + " " + h_label(spec.mesh[k]), touches[k] ? 1.0 : 0.0, 1.0, 0.0);
    for (auto& check : report.checks)
      if (check.instance.rfind("p=", 0) != 0) check.instance = ptag + " " + check.instance;
  }
  return report;
}

// -- Convergence studies --------------------------------------------------------

PropertyReport convergence_study(const ConvergenceFixture& fixture,
                                 std::span<const double> h_schedule,
                                 const SolverConfig& cfg, double tolerance) {
  if (h_schedule.empty()) throw ValidationError("empty h schedule");
  double target = 0.0;
  if (fixture.name == "annulus") {
    if (cfg.p != 2.0)
      throw ValidationError("missing oracle: the 2-D lattice energy is isotropic only for p = 2");
    target = radial_condenser_oracle(fixture.r, fixture.R, 2.0, 2,
                                     [](double) { return 1.0; });
  } else if (fixture.name == "radial") {
    auto w = ScalarField::parse(fixture.weight);
    target = radial_condenser_oracle(fixture.r, fixture.R, cfg.p, fixture.n,
                                     [&](double s) {
                                       double pt[1] = {s};
                                       return w.eval(pt);
                                     });
  } else {
    throw ValidationError("missing oracle for fixture " + fixture.name);
  }

  PropertyReport report;
  report.suite = "convergence:" + fixture.name;
  report.config = {{"fixture", fixture.name}, {"n", fixture.n},
                   {"weight", fixture.weight}, {"r", fixture.r},
                   {"R", fixture.R},           {"p", cfg.p},
                   {"target", target},         {"tolerance", tolerance},
                   {"h", std::vector<double>(h_schedule.begin(), h_schedule.end())}};

  std::vector<double> errors, values;
  std::vector<bool> ok;
  for (double h : h_schedule) {
    Fixture fx = fixture.name == "annulus"
                     ? annulus_fixture(h, fixture.r, fixture.R)
                     : radial_path_fixture(fixture.n, fixture.weight, fixture.r,
                                           fixture.R, h);
    auto cap = variational_capacity(fx.graph, fx.A, fx.E, cfg);
    values.push_back(cap.value);
    errors.push_back(std::abs(cap.value - target) / target);
    ok.push_back(cap.converged());
  }
  report.plots.push_back({"capacity", "h", {h_schedule.begin(), h_schedule.end()}, values});
  report.plots.push_back({"relative-error", "h", {h_schedule.begin(), h_schedule.end()}, errors});

  report.add_le("final-relative-error", "convergence", h_label(h_schedule.back()),
                errors.back(), tolerance, 0.0, ok.back());
  const std::size_t n = errors.size();
  for (std::size_t k = n >= 3 ? n - 2 : 1; k < n; ++k)
    report.add_le("error-nonincreasing", "convergence",
                  h_label(h_schedule[k - 1]) + " -> " + h_label(h_schedule[k]), errors[k],
                  errors[k - 1], 0.0, ok[k - 1] && ok[k]);
  return report;
}

}  // namespace ncap
