#include <cmath>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ncap/capacity.hpp"
#include "ncap/grid.hpp"
#include "ncap/io.hpp"
#include "ncap/properties.hpp"

using nlohmann::json;
using namespace ncap;

namespace {

enum Exit { kOk = 0, kValidation = 1, kNonConvergence = 2, kCheckFailed = 3 };

struct Options {
  std::string space;
  std::string a_spec;
  std::string e_spec;
  double p = 2.0;
  std::string out;
  std::uint64_t seed = 7;
  std::size_t n = 50;
  std::vector<double> eps_schedule;
  std::vector<double> h_schedule;
  double tol_energy = 1e-10;
  double tol_kkt = 1e-8;
  std::size_t max_iter = 10000;
  double eps_reg = 1e-12;
  std::string format = "json";
  std::string plots;

  // build-space
  std::string fixture;
  std::string domain;
  double h = 0.0;
  std::string weight = "const:1";

  // oracle / converge / example
  std::string kind = "radial";
  int dim = 2;
  double r = 1.0;
  double R = std::exp(1.0);
  std::vector<double> weights;
  std::string name;
  std::vector<double> p_list;
  double tolerance = 0.0;
};

SolverConfig solver_config(const Options& o) {
  SolverConfig c;
  c.p = o.p;
  c.tol_energy = o.tol_energy;
  c.tol_kkt = o.tol_kkt;
  c.max_iter = o.max_iter;
  c.eps_reg = o.eps_reg;
  c.validate();
  if (c.p_one_mode())
    std::cerr << "notice: p within 1e-6 of 1; running the eps-regularized p = 1 "
                 "mode (report only, no convergence guarantees)\n";
  return c;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty())
    std::cout << text << "\n";
  else
    write_text_file(o.out, text + "\n");
}

std::string render(const Options& o, const PropertyReport& report) {
  if (o.format == "csv") return report.to_csv();
  return report.to_json().dump(2);
}

int report_exit(const PropertyReport& report, bool report_only) {
  if (report_only || report.all_passed()) return kOk;
  return kCheckFailed;
}

int capacity_exit(const CapacityResult& r, const SolverConfig& c) {
  if (r.converged() || c.p_one_mode()) return kOk;
  return kNonConvergence;
}

MetricMeasureGraph load_space(const Options& o) {
  if (o.space.empty()) throw ValidationError("--space is required");
  return read_space(o.space);
}

NodeSet load_set(const MetricMeasureGraph& g, const std::string& spec,
                 const char* flag) {
  if (spec.empty()) throw ValidationError(std::string(flag) + " is required");
  return parse_region(spec).evaluate(g);
}

int cmd_build_space(const Options& o) {
  if (!o.fixture.empty()) {
    if (!o.domain.empty())
      throw ValidationError("--fixture and --domain are mutually exclusive");
    Fixture fx = [&] {
      if (o.fixture == "grid9") return grid9_fixture();
      if (o.fixture == "annulus") return annulus_fixture(o.h > 0 ? o.h : 1.0 / 16, o.r, o.R);
      if (o.fixture == "radial")
        return radial_path_fixture(o.dim, o.weight, o.r, o.R, o.h > 0 ? o.h : 1e-3);
      throw ValidationError("unknown fixture: " + o.fixture);
    }();
    json j = space_to_json(fx.graph);
    j["fixture"] = {{"description", fx.description},
                    {"A", std::vector<NodeIndex>(fx.A.members().begin(), fx.A.members().end())},
                    {"E", std::vector<NodeIndex>(fx.E.members().begin(), fx.E.members().end())}};
    emit(o, j.dump());
    return kOk;
  }
  if (o.domain.empty()) throw ValidationError("--domain or --fixture is required");
  auto g = build_grid(parse_region(o.domain), o.h, ScalarField::parse(o.weight), o.p);
  emit(o, space_to_json(g).dump());
  return kOk;
}

int cmd_cap(const Options& o) {
  auto cfg = solver_config(o);
  auto g = load_space(o);
  auto A = load_set(g, o.a_spec, "--A");
  auto E = load_set(g, o.e_spec, "--E");
  auto r = variational_capacity(g, A, E, cfg);
  emit(o, capacity_to_json(r).dump(2));
  return capacity_exit(r, cfg);
}

int cmd_sobcap(const Options& o) {
  auto cfg = solver_config(o);
  auto g = load_space(o);
  auto A = load_set(g, o.a_spec, "--A");
  auto r = sobolev_capacity(g, A, cfg);
  emit(o, capacity_to_json(r).dump(2));
  return capacity_exit(r, cfg);
}

int cmd_tilde(const Options& o) {
  auto cfg = solver_config(o);
  auto g = load_space(o);
  auto A = load_set(g, o.a_spec, "--A");
  auto E = load_set(g, o.e_spec, "--E");
  if (o.eps_schedule.empty()) throw ValidationError("--eps-schedule is required");
  std::vector<NodeSet> family;
  for (double eps : o.eps_schedule) family.push_back(relative_dilation(g, A, E, eps));
  auto r = tilde_capacity(g, A, E, family, cfg);
  json j = capacity_to_json(r);
  j["family_eps"] = o.eps_schedule;
  emit(o, j.dump(2));
  return capacity_exit(r, cfg);
}

int cmd_outer_profile(const Options& o) {
  auto cfg = solver_config(o);
  auto g = load_space(o);
  auto A = load_set(g, o.a_spec, "--A");
  auto E = load_set(g, o.e_spec, "--E");
  auto prof = outer_capacity_profile(g, A, E, o.eps_schedule, cfg);
  json caps = json::array();
  for (double c : prof.capacities) {
    if (std::isfinite(c))
      caps.push_back(c);
    else
      caps.push_back("inf");
  }
  bool all_converged = true;
  for (bool c : prof.converged) all_converged = all_converged && c;
  json j{{"eps", prof.eps},
         {"capacities", caps},
         {"converged", std::vector<bool>(prof.converged.begin(), prof.converged.end())},
         {"base", prof.base},
         {"limit_estimate", prof.limit_estimate}};
  if (!o.plots.empty()) {
    PropertyReport plot;
    plot.plots.push_back({"outer-profile", "eps", prof.eps, prof.capacities});
    write_text_file(o.plots, plot.plot_json().dump(2) + "\n");
  }
  emit(o, j.dump(2));
  return all_converged || cfg.p_one_mode() ? kOk : kNonConvergence;
}

std::string significant12(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : "nan";
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

int cmd_oracle(const Options& o) {
  if (!(o.p > 1.0)) throw ValidationError("oracles need p > 1");
  double value = 0.0;
  json j{{"kind", o.kind}, {"p", o.p}};
  if (o.kind == "radial") {
    auto w = ScalarField::parse(o.weight);
    value = radial_condenser_oracle(o.r, o.R, o.p, o.dim, [&](double s) {
      double pt[1] = {s};
      return w.eval(pt);
    });
    j.update({{"n", o.dim}, {"r", o.r}, {"R", o.R}, {"weight", o.weight}});
  } else if (o.kind == "path") {
    if (o.weights.empty()) throw ValidationError("--weights is required for the path oracle");
    value = path_capacity_oracle(o.weights, o.p);
    j["weights"] = o.weights;
  } else {
    throw ValidationError("unknown oracle kind: " + o.kind);
  }
  j["value"] = significant12(value);
  emit(o, j.dump(2));
  return kOk;
}

int cmd_verify(const Options& o) {
  auto cfg = solver_config(o);
  auto g = load_space(o);
  auto E = load_set(g, o.e_spec, "--E");
  AxiomSuiteOptions opts;
  opts.n_instances = o.n;
  opts.seed = o.seed;
  if (o.tolerance > 0.0) opts.tolerance = o.tolerance;
  auto report = check_capacity_axioms(g, E, cfg, opts);
  if (!o.plots.empty()) write_text_file(o.plots, report.plot_json().dump(2) + "\n");
  emit(o, render(o, report));
  return report_exit(report, cfg.p_one_mode());
}

int cmd_example(const Options& o) {
  if (o.name.empty()) throw ValidationError("--name is required");
  auto spec = default_experiment(o.name);
  if (!o.h_schedule.empty()) spec.mesh = o.h_schedule;
  if (!o.p_list.empty()) spec.p_values = o.p_list;
  spec.validate();
  SolverConfig cfg;
  cfg.tol_energy = o.tol_energy;
  cfg.tol_kkt = o.tol_kkt;
  cfg.max_iter = o.max_iter;
  cfg.eps_reg = o.eps_reg;
  cfg.validate();
  auto report = run_paper_example(spec, cfg);
  if (!o.plots.empty()) write_text_file(o.plots, report.plot_json().dump(2) + "\n");
  emit(o, render(o, report));
  return report_exit(report, false);
}

int cmd_converge(const Options& o) {
  auto cfg = solver_config(o);
  ConvergenceFixture f;
  f.name = o.fixture.empty() ? "annulus" : o.fixture;
  f.n = o.dim;
  f.weight = o.weight;
  f.r = o.r;
  f.R = o.R;
  std::vector<double> hs = o.h_schedule;
  if (hs.empty()) {
    if (f.name == "annulus")
      hs = {1.0 / 16, 1.0 / 32, 1.0 / 64};
    else
      hs = {1.0 / 1000, 1.0 / 2000, 1.0 / 4000};
  }
  for (std::size_t i = 1; i < hs.size(); ++i)
    if (!(hs[i] < hs[i - 1])) throw ValidationError("h schedule must be strictly decreasing");
  double tol = o.tolerance > 0.0 ? o.tolerance : (f.name == "annulus" ? 0.02 : 1e-6);
  auto report = convergence_study(f, hs, cfg, tol);
  if (!o.plots.empty()) write_text_file(o.plots, report.plot_json().dump(2) + "\n");
  emit(o, render(o, report));
  return report_exit(report, cfg.p_one_mode());
}

void add_solver_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--p", o.p, "exponent p >= 1");
  cmd->add_option("--tol-energy", o.tol_energy, "relative energy-change tolerance");
  cmd->add_option("--tol-kkt", o.tol_kkt, "scaled KKT residual tolerance");
  cmd->add_option("--max-iter", o.max_iter, "Newton iteration cap");
  cmd->add_option("--eps-reg", o.eps_reg, "smoothing of |t|^p near 0 for p < 2");
}

void add_output_flags(CLI::App* cmd, Options& o, bool with_format) {
  cmd->add_option("--out", o.out, "write the result here instead of stdout");
  if (with_format) {
    cmd->add_option("--format", o.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--plots", o.plots, "write plot data (x = h or eps) to this file");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete p-capacities on metric measure graphs"};
  app.require_subcommand(1, 1);
  Options o;

  auto* build = app.add_subcommand("build-space", "rasterize a region or emit a fixture");
  build->add_option("--domain", o.domain, "region JSON (inline or file)");
  build->add_option("--mesh", o.h, "lattice spacing h");
  build->add_option("--weight", o.weight, "weight field: const:<c> or power:<a>");
  build->add_option("--fixture", o.fixture, "grid9 | annulus | radial")
      ->check(CLI::IsMember({"grid9", "annulus", "radial"}));
  build->add_option("--dim", o.dim, "radial fixture dimension");
  build->add_option("--r", o.r, "inner radius");
  build->add_option("--R", o.R, "outer radius");
  build->add_option("--p", o.p, "exponent used for the edge weights");
  add_output_flags(build, o, false);

  auto* cap = app.add_subcommand("cap", "variational capacity cap_p(A, E)");
  auto* sob = app.add_subcommand("sobcap", "Sobolev capacity C_p(A)");
  auto* tilde = app.add_subcommand("tilde", "infimum over relatively open dilations of A");
  auto* outer = app.add_subcommand("outer-profile", "capacities of shrinking dilations");
  for (auto* cmd : {cap, sob, tilde, outer}) {
    cmd->add_option("--space", o.space, "space JSON file")->required();
    cmd->add_option("--A", o.a_spec, "set A (inline JSON or file)")->required();
    if (cmd != sob) cmd->add_option("--E", o.e_spec, "set E (inline JSON or file)")->required();
    add_solver_flags(cmd, o);
    add_output_flags(cmd, o, cmd == outer);
  }
  tilde->add_option("--eps-schedule", o.eps_schedule, "dilation radii of the family")
      ->required();
  outer->add_option("--eps-schedule", o.eps_schedule, "strictly decreasing radii")
      ->required();

  auto* oracle = app.add_subcommand("oracle", "closed-form and quadrature capacities");
  oracle->add_option("--kind", o.kind, "radial | path")
      ->check(CLI::IsMember({"radial", "path"}));
  oracle->add_option("--p", o.p, "exponent p > 1");
  oracle->add_option("--dim", o.dim, "ambient dimension (radial)");
  oracle->add_option("--r", o.r, "inner radius (radial)");
  oracle->add_option("--R", o.R, "outer radius (radial)");
  oracle->add_option("--weight", o.weight, "radial weight: const:<c> or power:<a>");
  oracle->add_option("--weights", o.weights, "series conductances (path)");
  add_output_flags(oracle, o, false);

  auto* verify = app.add_subcommand("verify", "seeded capacity axiom suite");
  verify->add_option("--space", o.space, "space JSON file")->required();
  verify->add_option("--E", o.e_spec, "set E (inline JSON or file)")->required();
  verify->add_option("--seed", o.seed, "random seed");
  verify->add_option("--n", o.n, "number of random instances")->check(CLI::PositiveNumber);
  verify->add_option("--tolerance", o.tolerance, "check tolerance (default 1e-7)");
  add_solver_flags(verify, o);
  add_output_flags(verify, o, true);

  auto* example = app.add_subcommand("example", "mesh-refinement trend experiment");
  example->add_option("--name", o.name, "registered example")->required();
  example->add_option("--h-schedule", o.h_schedule, "strictly decreasing mesh sizes");
  example->add_option("--p", o.p_list, "exponents (default per example)");
  example->add_option("--tol-energy", o.tol_energy, "relative energy-change tolerance");
  example->add_option("--tol-kkt", o.tol_kkt, "scaled KKT residual tolerance");
  example->add_option("--max-iter", o.max_iter, "Newton iteration cap");
  example->add_option("--eps-reg", o.eps_reg, "smoothing of |t|^p near 0 for p < 2");
  add_output_flags(example, o, true);

  auto* converge = app.add_subcommand("converge", "refinement study against an oracle");
  converge->add_option("--fixture", o.fixture, "annulus | radial")
      ->check(CLI::IsMember({"annulus", "radial"}));
  converge->add_option("--dim", o.dim, "radial fixture dimension");
  converge->add_option("--weight", o.weight, "radial weight: const:<c> or power:<a>");
  converge->add_option("--r", o.r, "inner radius");
  converge->add_option("--R", o.R, "outer radius");
  converge->add_option("--h-schedule", o.h_schedule, "strictly decreasing mesh sizes");
  converge->add_option("--tolerance", o.tolerance, "final relative error bound");
  add_solver_flags(converge, o);
  add_output_flags(converge, o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  try {
    if (*build) return cmd_build_space(o);
    if (*cap) return cmd_cap(o);
    if (*sob) return cmd_sobcap(o);
    if (*tilde) return cmd_tilde(o);
    if (*outer) return cmd_outer_profile(o);
    if (*oracle) return cmd_oracle(o);
    if (*verify) return cmd_verify(o);
    if (*example) return cmd_example(o);
    if (*converge) return cmd_converge(o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kValidation;
}
