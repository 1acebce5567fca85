#include "immunesim/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "immunesim/errors.hpp"

namespace immunesim {

// ---------------------------------------------------------------------------
// Vector-space operations

std::vector<double> axpy(const std::vector<double>& y, double a, const std::vector<double>& f) {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + a * f[i];
  return out;
}

std::vector<double> combine(const std::vector<double>& y, double a, const std::vector<double>& f,
                            double b, const std::vector<double>& g) {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + a * f[i] + b * g[i];
  return out;
}

namespace {

void field_axpy(Field& out, const Field& y, double a, const Field& f) {
  for (std::size_t i = 0; i < y.size(); ++i) out.values[i] = y.values[i] + a * f.values[i];
}

void field_combine(Field& out, const Field& y, double a, const Field& f, double b, const Field& g) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    out.values[i] = y.values[i] + a * f.values[i] + b * g.values[i];
  }
}

}  // namespace

SimulationState axpy(const SimulationState& y, double a, const SimulationState& f) {
  SimulationState out = y;
  out.t = y.t + a * f.t;
  field_axpy(out.y1, y.y1, a, f.y1);
  field_axpy(out.y2, y.y2, a, f.y2);
  field_axpy(out.y3, y.y3, a, f.y3);
  out.y4 = y.y4 + a * f.y4;
  out.y5 = y.y5 + a * f.y5;
  out.y6 = y.y6 + a * f.y6;
  out.y7 = y.y7 + a * f.y7;
  return out;
}

SimulationState combine(const SimulationState& y, double a, const SimulationState& f, double b,
                        const SimulationState& g) {
  SimulationState out = y;
  out.t = y.t + a * f.t + b * g.t;
  field_combine(out.y1, y.y1, a, f.y1, b, g.y1);
  field_combine(out.y2, y.y2, a, f.y2, b, g.y2);
  field_combine(out.y3, y.y3, a, f.y3, b, g.y3);
  out.y4 = y.y4 + a * f.y4 + b * g.y4;
  out.y5 = y.y5 + a * f.y5 + b * g.y5;
  out.y6 = y.y6 + a * f.y6 + b * g.y6;
  out.y7 = y.y7 + a * f.y7 + b * g.y7;
  return out;
}

// ---------------------------------------------------------------------------
// StepConfig

StepConfig StepConfig::from_steps(double t_final, std::size_t n_steps) {
  StepConfig cfg;
  cfg.t_final = t_final;
  cfg.n_steps = n_steps;
  cfg.sigma = n_steps > 0 ? t_final / static_cast<double>(n_steps) : t_final;
  cfg.validate();
  return cfg;
}

StepConfig StepConfig::from_sigma(double t_final, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ValidationError("step size must be positive and finite");
  }
  if (!(t_final > 0.0) || !std::isfinite(t_final)) {
    throw ValidationError("horizon must be positive and finite");
  }
  const double ratio = t_final / sigma;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio)) {
    throw ValidationError("horizon " + std::to_string(t_final) +
                          " day is not a whole number of steps of size " + std::to_string(sigma));
  }
  StepConfig cfg;
  cfg.t_final = t_final;
  cfg.sigma = sigma;
  cfg.n_steps = static_cast<std::size_t>(n);
  cfg.validate();
  return cfg;
}

void StepConfig::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ValidationError("step size must be positive and finite");
  }
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
    throw ValidationError("horizon must be non-negative and finite");
  }
  const double span = sigma * static_cast<double>(n_steps);
  if (n_steps > 0 && std::abs(span - t_final) > 1e-9 * std::max(1.0, t_final)) {
    throw ValidationError("sigma * n_steps does not match the horizon");
  }
}

// ---------------------------------------------------------------------------
// ModelSystem

ModelSystem::ModelSystem(Parameters params, double y1_boundary, SolverOptions options)
    : params_(params), y1_boundary_(y1_boundary), options_(options) {
  params_.validate();
  if (!(y1_boundary_ >= 0.0) || !std::isfinite(y1_boundary_)) {
    throw ValidationError("y1 boundary value must be a non-negative finite concentration");
  }
  if (options_.threads == 0) options_.threads = 1;
}

SimulationState ModelSystem::operator()(const SimulationState& y) const {
  const Grid& grid = y.grid();
  if (options_.diffusion && !grid.supports_diffusion()) {
    throw DomainError("diffusion needs at least 2 samples on every axis");
  }

  // phase 1: reductions and point-independent terms
  const double avg_y3 = average_field(y.y3);
  if (!(avg_y3 >= 0.0)) {
    throw DomainError("average activated-macrophage concentration became negative");
  }
  const auto cyto = cytokine_rhs(y.y4, y.y5, y.y6, y.y7, avg_y3, params_);
  const double rate = activation_rate(y.y4, y.y7, params_);

  SimulationState d;
  d.t = 1.0;
  d.y1 = Field(grid, 0.0);
  d.y2 = Field(grid, 0.0);
  d.y3 = Field(grid, 0.0);
  d.y4 = cyto[0];
  d.y5 = cyto[1];
  d.y6 = cyto[2];
  d.y7 = cyto[3];

  // phase 2: independent per-sample map
  auto map_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const auto cells = cellular_rates(y.y1[idx], y.y2[idx], y.y3[idx], rate, params_);
      d.y1[idx] = grid.is_boundary(idx) ? 0.0 : cells[0];
      d.y2[idx] = cells[1];
      d.y3[idx] = cells[2];
    }
  };
  const std::size_t n = grid.size();
  const std::size_t workers = std::min(options_.threads, std::max<std::size_t>(1, n / 512));
  if (workers <= 1) {
    map_range(0, n);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin < end) pool.emplace_back(map_range, begin, end);
    }
  }

  if (options_.diffusion) {
    const Field l1 = laplacian(y.y1);
    const Field l2 = laplacian(y.y2);
    const Field l3 = laplacian(y.y3);
    for (std::size_t idx = 0; idx < n; ++idx) {
      if (!grid.is_boundary(idx)) d.y1[idx] += params_.D1 * l1[idx];
      d.y2[idx] += params_.D2 * l2[idx];
      d.y3[idx] += params_.D3 * l3[idx];
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Model steps

namespace {

void require_finite(const SimulationState& s, const char* stage) {
  if (!s.is_valid()) {
    throw BlowUpError(std::string("non-finite concentration after ") + stage);
  }
}

void require_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ValidationError("step size must be positive and finite");
  }
}

}  // namespace

SimulationState predictor_half_step(const SimulationState& y, double sigma, const ModelSystem& sys) {
  require_sigma(sigma);
  SimulationState out = predictor_stage(y, sigma, sys);
  apply_boundary_in_place(out, sys.y1_boundary());
  require_finite(out, "predictor half step");
  return out;
}

SimulationState corrector_full_step(const SimulationState& yh, double sigma,
                                    const ModelSystem& sys) {
  require_sigma(sigma);
  SimulationState out = corrector_stage(yh, sigma, sys);
  apply_boundary_in_place(out, sys.y1_boundary());
  require_finite(out, "corrector step");
  return out;
}

SimulationState step(const SimulationState& y, double sigma, const ModelSystem& sys) {
  return corrector_full_step(predictor_half_step(y, sigma, sys), sigma, sys);
}

double Trajectory::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : states) m = std::min(m, s.min_value());
  for (const auto& d : diagnostics) m = std::min(m, d.min_value);
  return m;
}

std::size_t Trajectory::negative_steps() const {
  return static_cast<std::size_t>(std::count_if(
      diagnostics.begin(), diagnostics.end(), [](const StepDiagnostics& d) { return d.min_value < 0.0; }));
}

double diffusion_step_limit(const Grid& grid, const Parameters& params) {
  if (!grid.supports_diffusion()) return std::numeric_limits<double>::infinity();
  double spectrum = 0.0;
  for (int a = 0; a < 3; ++a) spectrum += 4.0 / (grid.spacing()[a] * grid.spacing()[a]);
  const double d = std::max({params.D1, params.D2, params.D3});
  return d > 0.0 ? 4.0 / (d * spectrum) : std::numeric_limits<double>::infinity();
}

std::size_t steps_per_hour(double sigma) {
  const double n = std::round((1.0 / kHoursPerDay) / sigma);
  return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

namespace {

template <class Advance>
Trajectory run_loop(const SimulationState& initial, const StepConfig& cfg, const ModelSystem& sys,
                    std::size_t record_every, Advance&& advance) {
  cfg.validate();
  if (record_every == 0) throw ValidationError("record_every must be positive");
  if (!initial.is_valid()) throw ValidationError("initial state is not valid");

  Trajectory tr;
  SimulationState y = apply_boundary(initial, sys.y1_boundary());
  const double t0 = initial.t;
  tr.times.push_back(t0);
  tr.states.push_back(y);
  tr.diagnostics.reserve(cfg.n_steps);

  for (std::size_t k = 0; k < cfg.n_steps; ++k) {
    try {
      y = advance(y);
    } catch (const BlowUpError& e) {
      throw BlowUpError(e.what(), k);
    } catch (const DomainError& e) {
      throw BlowUpError(std::string("concentration left the model's domain: ") + e.what(), k);
    }
    y.t = t0 + static_cast<double>(k + 1) * cfg.sigma;
    tr.diagnostics.push_back({k, y.min_value()});
    if ((k + 1) % record_every == 0 || k + 1 == cfg.n_steps) {
      tr.times.push_back(y.t);
      tr.states.push_back(y);
    }
  }
  return tr;
}

}  // namespace

Trajectory integrate(const SimulationState& initial, const StepConfig& cfg, const ModelSystem& sys,
                     std::size_t record_every) {
  return run_loop(initial, cfg, sys, record_every,
                  [&](const SimulationState& y) { return step(y, cfg.sigma, sys); });
}

Trajectory reference_integrate(const SimulationState& initial, const StepConfig& cfg,
                               const ModelSystem& sys, std::size_t record_every) {
  constexpr int kSubsteps = 10;
  const double h = cfg.sigma / kSubsteps;
  return run_loop(initial, cfg, sys, record_every, [&](const SimulationState& y) {
    SimulationState z = y;
    for (int s = 0; s < kSubsteps; ++s) {
      z = rk4_step(z, h, sys);
      apply_boundary_in_place(z, sys.y1_boundary());
    }
    require_finite(z, "reference step");
    return z;
  });
}

// ---------------------------------------------------------------------------
// Convergence problems

namespace {

// State layout for scalar test problems: {t, y}.
using TimedScalar = std::vector<double>;

template <class Rhs>
double scalar_final_error(const Rhs& f, double y0, double t_final, double sigma, double exact) {
  const StepConfig cfg = StepConfig::from_sigma(t_final, sigma);
  TimedScalar y{0.0, y0};
  for (std::size_t k = 0; k < cfg.n_steps; ++k) y = pc_step(y, sigma, f);
  if (!std::isfinite(y[1])) throw BlowUpError("non-finite value in test problem");
  return std::abs(y[1] - exact);
}

}  // namespace

ConvergenceProblem exp_growth_problem() {
  ConvergenceProblem p;
  p.name = "exp-growth";
  p.scale = std::exp(1.0);
  p.final_error = [](double sigma) {
    auto f = [](const TimedScalar& s) { return TimedScalar{1.0, s[1]}; };
    return scalar_final_error(f, 1.0, 1.0, sigma, std::exp(1.0));
  };
  return p;
}

ConvergenceProblem forced_decay_problem() {
  ConvergenceProblem p;
  p.name = "forced-decay";
  p.scale = 1.0;
  p.final_error = [](double sigma) {
    auto f = [](const TimedScalar& s) { return TimedScalar{1.0, -2.0 * s[1] + std::cos(s[0])}; };
    const double t = 1.0;
    const double exact = 0.6 * std::exp(-2.0 * t) + (2.0 * std::cos(t) + std::sin(t)) / 5.0;
    return scalar_final_error(f, 1.0, t, sigma, exact);
  };
  return p;
}

ConvergenceProblem constant_rate_problem() {
  ConvergenceProblem p;
  p.name = "constant";
  p.scale = 4.0;
  p.final_error = [](double sigma) {
    auto f = [](const TimedScalar&) { return TimedScalar{1.0, 3.0}; };
    return scalar_final_error(f, 1.0, 1.0, sigma, 4.0);
  };
  return p;
}

namespace {

double state_max_diff(const SimulationState& a, const SimulationState& b) {
  double m = std::max({std::abs(a.y4 - b.y4), std::abs(a.y5 - b.y5), std::abs(a.y6 - b.y6),
                       std::abs(a.y7 - b.y7)});
  const std::pair<const Field*, const Field*> pairs[] = {
      {&a.y1, &b.y1}, {&a.y2, &b.y2}, {&a.y3, &b.y3}};
  for (const auto& [fa, fb] : pairs) {
    for (std::size_t i = 0; i < fa->size(); ++i) {
      m = std::max(m, std::abs((*fa)[i] - (*fb)[i]));
    }
  }
  return m;
}

double state_max_abs(const SimulationState& a) {
  double m = std::max({std::abs(a.y4), std::abs(a.y5), std::abs(a.y6), std::abs(a.y7)});
  for (const Field* f : {&a.y1, &a.y2, &a.y3}) {
    for (double v : f->values) m = std::max(m, std::abs(v));
  }
  return m;
}

}  // namespace

ConvergenceProblem model_problem(const SimulationState& initial, const ModelSystem& sys,
                                 double t_final) {
  ConvergenceProblem p;
  p.name = "immune-model";
  p.scale = std::max(1.0, state_max_abs(initial));
  p.final_error = [initial, sys, t_final](double sigma) {
    const StepConfig cfg = StepConfig::from_sigma(t_final, sigma);
    const Trajectory scheme = integrate(initial, cfg, sys, cfg.n_steps);
    const Trajectory oracle = reference_integrate(initial, cfg, sys, cfg.n_steps);
    return state_max_diff(scheme.states.back(), oracle.states.back());
  };
  return p;
}

ConvergenceProblem named_problem(const std::string& name) {
  if (name == "exp-growth") return exp_growth_problem();
  if (name == "forced-decay") return forced_decay_problem();
  if (name == "constant") return constant_rate_problem();
  throw ValidationError("unknown test problem '" + name + "'");
}

OrderEstimate observed_order(const ConvergenceProblem& problem, double sigma) {
  OrderEstimate est;
  est.sigma = sigma;
  est.error_coarse = problem.final_error(sigma);
  est.error_fine = problem.final_error(0.5 * sigma);
  const double floor = 100.0 * std::numeric_limits<double>::epsilon() * problem.scale;
  if (!(est.error_coarse > floor) || !(est.error_fine > floor)) {
    throw ResolutionFloorError("errors of problem '" + problem.name +
                               "' are at the round-off floor; no order can be estimated");
  }
  est.order = std::log2(est.error_coarse / est.error_fine);
  return est;
}

// ---------------------------------------------------------------------------
// Zero stability

std::array<double, 3> SchemeCoefficients::characteristic_polynomial() const {
  // predictor: p.new * Y^{k+1/2} + p.old * Y^k
  // corrector: c.new * Y^{k+1}   + c.old * Y^{k+1/2}
  // summed, in zeta = lambda^{1/2}: c.new zeta^2 + (c.old + p.new) zeta + p.old
  return {corrector.new_level, corrector.old_level + predictor.new_level, predictor.old_level};
}

StabilityReport root_condition_check(const SchemeCoefficients& coefficients) {
  return root_condition_check(coefficients.characteristic_polynomial());
}

StabilityReport root_condition_check(const std::array<double, 3>& poly) {
  constexpr double kTol = 1e-12;
  StabilityReport report;
  report.polynomial = poly;
  const double a = poly[0];
  const double b = poly[1];
  const double c = poly[2];
  if (a == 0.0) {
    if (b == 0.0) {
      report.verdict = "degenerate characteristic polynomial";
      return report;
    }
    report.roots.push_back({std::complex<double>(-c / b, 0.0), 1});
  } else {
    const std::complex<double> disc = std::complex<double>(b * b - 4.0 * a * c, 0.0);
    const std::complex<double> s = std::sqrt(disc);
    if (std::abs(disc) <= kTol * std::max(1.0, b * b)) {
      report.roots.push_back({std::complex<double>(-b / (2.0 * a), 0.0), 2});
    } else {
      // numerically stable pairing
      const std::complex<double> q = -0.5 * (b >= 0.0 ? b + s : b - s);
      std::complex<double> r1 = q / a;
      std::complex<double> r2 = std::abs(q) > 0.0 ? c / q : std::complex<double>(0.0, 0.0);
      if (std::real(r1) < std::real(r2)) std::swap(r1, r2);
      report.roots.push_back({r1, 1});
      report.roots.push_back({r2, 1});
    }
  }

  report.zero_stable = true;
  for (const auto& r : report.roots) {
    const double mag = std::abs(r.value);
    if (mag > 1.0 + kTol) {
      report.zero_stable = false;
      report.verdict = "unstable: root outside the closed unit disc (|root| = " +
                       std::to_string(mag) + ")";
      return report;
    }
    if (std::abs(mag - 1.0) <= kTol && r.multiplicity > 1) {
      report.zero_stable = false;
      report.verdict = "unstable: repeated root on the unit circle";
      return report;
    }
  }
  report.verdict = "zero-stable: all roots in the closed unit disc, roots on the circle simple";
  return report;
}

}  // namespace immunesim
