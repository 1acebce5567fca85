// immunesim: simulate, converge, check-stability, peaks, compare.
//
// Exit codes: 0 success, 1 bad input / failed check, 2 numerical blow-up.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "immunesim/analysis.hpp"
#include "immunesim/errors.hpp"
#include "immunesim/integrator.hpp"
#include "immunesim/plot.hpp"
#include "immunesim/scenario_io.hpp"

namespace fs = std::filesystem;
using namespace immunesim;

namespace {

constexpr int kOk = 0;
constexpr int kBadInput = 1;
constexpr int kBlowUp = 2;

Point3 parse_probe(const std::string& text) {
  Point3 x{};
  std::size_t start = 0;
  for (int a = 0; a < 3; ++a) {
    const std::size_t comma = text.find(',', start);
    if ((a < 2) == (comma == std::string::npos)) {
      throw ValidationError("probe '" + text + "' must be three comma-separated coordinates");
    }
    const auto v = parse_double(text.substr(start, comma == std::string::npos ? comma : comma - start));
    if (!v) throw ValidationError("probe '" + text + "' has a non-numeric coordinate");
    x[a] = *v;
    start = comma + 1;
  }
  return x;
}

void print_peaks(const TimeSeries& ts) {
  std::printf("%-14s %10s %14s\n", "component", "t_peak_hr", "peak");
  for (const auto& name : ts.names) {
    const PeakSummary pk = detect_peak(ts, name);
    std::fprintf(stdout, "%-14s %10.4g %14.6e  %s\n", name.c_str(), pk.t_peak_hr, pk.value,
                 pk.plateau ? "plateau" : "");
  }
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string params;
  std::string scenario;
  std::string out = "trajectory.csv";
  std::string sigma;
  std::optional<std::size_t> record_every;
  std::string diffusion;
  std::string hill;
  std::vector<std::string> probes;
  std::string plot_dir;
  std::optional<std::size_t> threads;
};

int cmd_simulate(const SimulateArgs& a) {
  Config c;
  if (!a.params.empty()) c.parameters = parameters_from(ConfigDocument::load(a.params));
  if (!a.scenario.empty()) {
    const ConfigDocument doc = ConfigDocument::load(a.scenario);
    c.scenario = scenario_from(doc);
    c.solver = solver_from(doc);
  }
  if (!a.sigma.empty()) c.solver.sigma_days = parse_duration_days(a.sigma);
  if (a.record_every) c.solver.record_every = *a.record_every;
  if (!a.diffusion.empty()) c.solver.diffusion = a.diffusion == "on";
  if (!a.hill.empty()) c.solver.hill_mode = a.hill == "literal" ? HillMode::Literal : HillMode::Table;
  if (a.threads) c.solver.threads = *a.threads;
  if (!a.probes.empty()) {
    c.scenario.probes.clear();
    for (const auto& p : a.probes) c.scenario.probes.push_back(parse_probe(p));
  }
  c.parameters.hill_mode = c.solver.hill_mode;
  c.scenario.validate();
  if (c.scenario.probes.empty()) throw ValidationError("at least one probe is required");

  const Grid grid = c.scenario.grid.resolve(c.solver.diffusion);
  if (c.solver.diffusion && !grid.supports_diffusion()) {
    throw ValidationError("diffusion needs at least two samples along every axis");
  }
  if (c.solver.diffusion) {
    const double limit = diffusion_step_limit(grid, c.parameters);
    if (c.solver.sigma_days > limit) {
      std::fprintf(stderr, "warning: sigma %.3g day exceeds the explicit diffusion limit %.3g day on this grid\n",
                   c.solver.sigma_days, limit);
    }
  }
  const ModelSystem sys(c.parameters, c.scenario.boundary_value(),
                        SolverOptions{c.solver.diffusion, c.solver.threads});
  const StepConfig cfg = StepConfig::from_sigma(c.scenario.horizon_days, c.solver.sigma_days);
  const std::size_t every = c.solver.record_every.value_or(steps_per_hour(c.solver.sigma_days));

  const Trajectory traj = integrate(c.scenario.initial_state(grid), cfg, sys, every);
  write_timeseries_csv(traj, c.scenario.probes, a.out);
  std::printf("wrote %s (%zu steps, %zu recorded times, %zu probe(s), grid %zux%zux%zu)\n", a.out.c_str(),
              cfg.n_steps, traj.states.size(), c.scenario.probes.size(), grid.counts()[0], grid.counts()[1],
              grid.counts()[2]);

  for (std::size_t p = 0; p < c.scenario.probes.size(); ++p) {
    const TimeSeries ts = probe_series(traj, c.scenario.probes[p]);
    std::printf("\npeaks at probe %zu:\n", p);
    print_peaks(ts);
    if (!a.plot_dir.empty()) {
      const std::string prefix = c.scenario.probes.size() > 1 ? "probe" + std::to_string(p) + "_" : "";
      write_svg_plots(ts, a.plot_dir, prefix);
    }
  }
  if (const std::size_t neg = traj.negative_steps(); neg > 0) {
    std::fprintf(stderr, "warning: %zu step(s) produced negative concentrations (minimum %.6e)\n", neg,
                 traj.min_value());
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct ConvergeArgs {
  double sigma = 0.05;
  double model_sigma_hr = 0.05;
  double model_horizon_hr = 24.0;
  std::string params;
  std::string scenario;
  std::vector<std::string> problems{"exp-growth", "forced-decay"};
  bool skip_model = false;
};

int cmd_converge(const ConvergeArgs& a) {
  std::vector<std::pair<ConvergenceProblem, double>> problems;
  for (const auto& name : a.problems) problems.emplace_back(named_problem(name), a.sigma);
  if (!a.skip_model) {
    Parameters params;
    Scenario sc;
    if (!a.params.empty()) params = parameters_from(ConfigDocument::load(a.params));
    if (!a.scenario.empty()) sc = scenario_from(ConfigDocument::load(a.scenario));
    const Grid grid = sc.grid.resolve(false);
    const ModelSystem sys(params, sc.boundary_value());
    problems.emplace_back(model_problem(sc.initial_state(grid), sys, a.model_horizon_hr / kHoursPerDay),
                          a.model_sigma_hr / kHoursPerDay);
  }

  bool all_ok = true;
  std::printf("%-14s %12s %14s %14s %8s\n", "problem", "sigma", "e(sigma)", "e(sigma/2)", "order");
  for (const auto& [problem, sigma0] : problems) {
    for (double s : {sigma0, 0.5 * sigma0}) {
      try {
        const OrderEstimate est = observed_order(problem, s);
        const bool ok = est.order >= 1.8 && est.order <= 2.2;
        all_ok = all_ok && ok;
        std::printf("%-14s %12.6g %14.6e %14.6e %8.4f%s\n", problem.name.c_str(), s, est.error_coarse,
                    est.error_fine, est.order, ok ? "" : "  out of [1.8, 2.2]");
      } catch (const ResolutionFloorError& e) {
        std::printf("%-14s %12.6g  resolution floor: %s\n", problem.name.c_str(), s, e.what());
        all_ok = false;
      }
    }
  }
  std::printf("%s\n", all_ok ? "second order confirmed" : "second order NOT confirmed");
  return all_ok ? kOk : kBadInput;
}

// ---------------------------------------------------------------------------

int cmd_check_stability(double perturb) {
  SchemeCoefficients coeffs;
  coeffs.corrector.old_level += perturb;
  const StabilityReport r = root_condition_check(coeffs);
  std::printf("characteristic polynomial: %.17g z^2 %+.17g z %+.17g\n", r.polynomial[0], r.polynomial[1],
              r.polynomial[2]);
  for (const auto& root : r.roots) {
    std::printf("root %.17g%+.17gi  |root| = %.17g  multiplicity %d\n", root.value.real() + 0.0, root.value.imag() + 0.0,
                std::abs(root.value), root.multiplicity);
  }
  std::printf("verdict: %s\n", r.verdict.c_str());
  return r.zero_stable ? kOk : kBadInput;
}

// ---------------------------------------------------------------------------

int cmd_peaks(const std::string& csv, std::size_t probe_id) {
  const TimeSeries ts = read_timeseries_csv(csv, probe_id);
  if (ts.size() == 0) throw ValidationError("no rows for probe " + std::to_string(probe_id) + " in " + csv);
  print_peaks(ts);
  return kOk;
}

int cmd_compare(const std::string& sim_path, const std::string& exp_path, std::size_t probe_id) {
  const TimeSeries sim = read_timeseries_csv(sim_path, probe_id);
  const TimeSeries exp = read_timeseries_csv(exp_path, probe_id);
  if (sim.size() != exp.size()) {
    throw ValidationError("simulated and experimental series have different lengths (" +
                          std::to_string(sim.size()) + " vs " + std::to_string(exp.size()) + ")");
  }
  for (std::size_t i = 0; i < sim.size(); ++i) {
    if (std::abs(sim.times_hr[i] - exp.times_hr[i]) > 1e-9 * std::max(1.0, std::abs(exp.times_hr[i]))) {
      throw ValidationError("time stamps differ at row " + std::to_string(i + 1));
    }
  }
  std::printf("%-14s %14s %14s %10s %4s\n", "component", "a", "b", "r2", "n");
  for (const auto& name : exp.names) {
    if (!sim.has(name)) throw ValidationError("simulated data has no column '" + name + "'");
    const RegressionFit fit = linear_regression(sim.column(name), exp.column(name));
    std::printf("%-14s %14.6e %14.6e %10.6f %4zu\n", name.c_str(), fit.a, fit.b, fit.r2, fit.n);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Immune response simulator: cellular and cytokine dynamics with a second-order predictor-corrector"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  std::function<int()> run;

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Integrate a scenario and write a probe CSV");
  s->add_option("--params", sim.params, "Parameter file ([parameters] section)")->check(CLI::ExistingFile);
  s->add_option("--scenario", sim.scenario, "Scenario file ([scenario], [grid], [solver])")->check(CLI::ExistingFile);
  s->add_option("--out", sim.out, "Output CSV path")->capture_default_str();
  s->add_option("--sigma", sim.sigma, "Step size, e.g. 0.001day or 0.024hr (default 0.001day)");
  s->add_option("--record-every", sim.record_every, "Record every N steps (default: about hourly)")
      ->check(CLI::PositiveNumber);
  s->add_option("--diffusion", sim.diffusion, "Diffusion terms")->check(CLI::IsMember({"on", "off"}));
  s->add_option("--hill", sim.hill, "Hill exponents")->check(CLI::IsMember({"table", "literal"}));
  s->add_option("--probe", sim.probes, "Probe point \"x,y,z\" in mm (repeatable)")->allow_extra_args(false);
  s->add_option("--plot-dir", sim.plot_dir, "Write one SVG per component here");
  s->add_option("--threads", sim.threads, "Worker threads for the right-hand side")->check(CLI::PositiveNumber);
  s->callback([&] { run = [&] { return cmd_simulate(sim); }; });

  ConvergeArgs conv;
  auto* c = app.add_subcommand("converge", "Observed order of accuracy on test problems and the model");
  c->add_option("--sigma", conv.sigma, "Coarsest step for the analytic problems")->capture_default_str()
      ->check(CLI::PositiveNumber);
  c->add_option("--model-sigma-hr", conv.model_sigma_hr, "Coarsest step for the model, hours")
      ->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--model-horizon-hr", conv.model_horizon_hr, "Model integration horizon, hours")
      ->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--params", conv.params, "Parameter file")->check(CLI::ExistingFile);
  c->add_option("--scenario", conv.scenario, "Scenario file")->check(CLI::ExistingFile);
  c->add_option("--problems", conv.problems, "Analytic problems")
      ->capture_default_str()
      ->check(CLI::IsMember({"exp-growth", "forced-decay", "constant"}));
  c->add_flag("--skip-model", conv.skip_model, "Only the analytic problems");
  c->callback([&] { run = [&] { return cmd_converge(conv); }; });

  double perturb = 0.0;
  auto* st = app.add_subcommand("check-stability", "Root condition of the scheme's characteristic polynomial");
  st->add_option("--perturb", perturb, "Debug: add this to the corrector's old-level coefficient");
  st->callback([&] { run = [&] { return cmd_check_stability(perturb); }; });

  std::string peaks_csv;
  std::size_t peaks_probe = 0;
  auto* pk = app.add_subcommand("peaks", "Peak summary per component of a CSV");
  pk->add_option("--csv", peaks_csv, "Time series CSV")->required()->check(CLI::ExistingFile);
  pk->add_option("--probe-id", peaks_probe, "Probe rows to use")->capture_default_str();
  pk->callback([&] { run = [&] { return cmd_peaks(peaks_csv, peaks_probe); }; });

  std::string cmp_sim, cmp_exp;
  std::size_t cmp_probe = 0;
  auto* cm = app.add_subcommand("compare", "Fit z = a y + b per component (y simulated, z experimental)");
  cm->add_option("--sim", cmp_sim, "Simulated CSV")->required()->check(CLI::ExistingFile);
  cm->add_option("--exp", cmp_exp, "Experimental CSV (time_hr,<component>...)")->required()->check(CLI::ExistingFile);
  cm->add_option("--probe-id", cmp_probe, "Probe rows of the simulated CSV")->capture_default_str();
  cm->callback([&] { run = [&] { return cmd_compare(cmp_sim, cmp_exp, cmp_probe); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  try {
    return run();
  } catch (const BlowUpError& e) {
    std::fprintf(stderr, "error: numerical blow-up: %s\n", e.what());
    return kBlowUp;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kBadInput;
  }
}
