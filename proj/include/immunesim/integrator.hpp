#pragma once

// Two-stage explicit predictor-corrector time stepping.
//
// One step of size sigma advances Y^k to Y^{k+1} through a half level:
//
//   Y^{k+1/2} = Y^k       + (sigma/4) [c1 F(Y^k)       + c2 F(Y^k + p sigma F(Y^k))]
//   Y^{k+1}   = Y^{k+1/2} + (sigma/4) [   F(Y^{k+1/2}) +    F(Y^{k+1/2} + (sigma/2) F(Y^{k+1/2}))]
//
// with c1 = 3/2, c2 = 1/2, p = 1. Second order requires c1 + c2 = 2 and
// c2 p = 1/2. After each half step the y1 boundary samples are re-pinned.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "immunesim/grid.hpp"
#include "immunesim/model.hpp"

namespace immunesim {

namespace scheme {
inline constexpr double kC1 = 1.5;
inline constexpr double kC2 = 0.5;
inline constexpr double kP = 1.0;
/// Predictor quadrature weight sigma/4 applied to [c1 F + c2 F(...)].
inline constexpr double kHalfStepWeight = 0.25;
/// Inner corrector stage length, as a fraction of sigma.
inline constexpr double kCorrectorStage = 0.5;
}  // namespace scheme

// ---------------------------------------------------------------------------
// Vector-space operations used by the generic stepping templates.

inline double axpy(double y, double a, double f) { return y + a * f; }
inline double combine(double y, double a, double f, double b, double g) { return y + a * f + b * g; }

std::vector<double> axpy(const std::vector<double>& y, double a, const std::vector<double>& f);
std::vector<double> combine(const std::vector<double>& y, double a, const std::vector<double>& f,
                            double b, const std::vector<double>& g);

/// y + a f on every field and scalar, including t.
SimulationState axpy(const SimulationState& y, double a, const SimulationState& f);
SimulationState combine(const SimulationState& y, double a, const SimulationState& f, double b,
                        const SimulationState& g);

// ---------------------------------------------------------------------------
// Generic stages. `Rhs` maps a State to its time derivative (same type).

template <class State, class Rhs>
State predictor_stage(const State& y, double sigma, const Rhs& f) {
  const State f0 = f(y);
  const State f1 = f(axpy(y, scheme::kP * sigma, f0));
  return combine(y, scheme::kHalfStepWeight * sigma * scheme::kC1, f0,
                 scheme::kHalfStepWeight * sigma * scheme::kC2, f1);
}

template <class State, class Rhs>
State corrector_stage(const State& yh, double sigma, const Rhs& f) {
  const State f0 = f(yh);
  const State f1 = f(axpy(yh, scheme::kCorrectorStage * sigma, f0));
  return combine(yh, scheme::kHalfStepWeight * sigma, f0, scheme::kHalfStepWeight * sigma, f1);
}

template <class State, class Rhs>
State pc_step(const State& y, double sigma, const Rhs& f) {
  return corrector_stage(predictor_stage(y, sigma, f), sigma, f);
}

/// Classical four-stage Runge-Kutta step.
template <class State, class Rhs>
State rk4_step(const State& y, double h, const Rhs& f) {
  const State k1 = f(y);
  const State k2 = f(axpy(y, 0.5 * h, k1));
  const State k3 = f(axpy(y, 0.5 * h, k2));
  const State k4 = f(axpy(y, h, k3));
  return combine(combine(y, h / 6.0, k1, h / 3.0, k2), h / 3.0, k3, h / 6.0, k4);
}

// ---------------------------------------------------------------------------

/// sigma = t_final / n_steps.
struct StepConfig {
  double sigma = 1e-3;
  std::size_t n_steps = 1000;
  double t_final = 1.0;

  static StepConfig from_steps(double t_final, std::size_t n_steps);
  /// Throws ValidationError unless t_final is a whole multiple of sigma.
  static StepConfig from_sigma(double t_final, double sigma);
  void validate() const;
};

struct SolverOptions {
  bool diffusion = false;
  /// Worker threads for the per-sample phase of each RHS evaluation.
  std::size_t threads = 1;
};

/// The coupled system F over a whole SimulationState. Evaluation is two-phase:
/// the y3 domain average is reduced first, then samples are mapped
/// independently. dy1/dt is zero on boundary samples (y1 is held at its
/// boundary value there). The derivative's `t` component is 1.
class ModelSystem {
 public:
  ModelSystem(Parameters params, double y1_boundary, SolverOptions options = {});

  SimulationState operator()(const SimulationState& y) const;

  const Parameters& params() const { return params_; }
  double y1_boundary() const { return y1_boundary_; }
  const SolverOptions& options() const { return options_; }

 private:
  Parameters params_;
  double y1_boundary_;
  SolverOptions options_;
};

/// Y + (sigma/8)[3F(Y) + F(Y + sigma F(Y))], then y1 re-pinned.
/// Throws BlowUpError on any non-finite output.
SimulationState predictor_half_step(const SimulationState& y, double sigma, const ModelSystem& sys);

/// Yh + (sigma/4)[F(Yh) + F(Yh + (sigma/2) F(Yh))], then y1 re-pinned.
SimulationState corrector_full_step(const SimulationState& yh, double sigma, const ModelSystem& sys);

/// corrector_full_step(predictor_half_step(y)).
SimulationState step(const SimulationState& y, double sigma, const ModelSystem& sys);

struct StepDiagnostics {
  std::size_t step = 0;    // index k of the step producing Y^{k+1}
  double min_value = 0.0;  // smallest concentration in Y^{k+1}
};

struct Trajectory {
  std::vector<double> times;  // days
  std::vector<SimulationState> states;
  std::vector<StepDiagnostics> diagnostics;  // one entry per step taken

  double min_value() const;
  std::size_t negative_steps() const;
};

/// Runs cfg.n_steps steps. Records the initial state, every `record_every`-th
/// state and the final state. Times are k * sigma exactly.
/// Throws BlowUpError carrying the offending step index.
Trajectory integrate(const SimulationState& initial, const StepConfig& cfg, const ModelSystem& sys,
                     std::size_t record_every = 1);

/// Independent reference: classical RK4 with ten substeps per sigma,
/// recorded at the same time stamps as `integrate`.
Trajectory reference_integrate(const SimulationState& initial, const StepConfig& cfg,
                               const ModelSystem& sys, std::size_t record_every = 1);

/// Largest sigma for which the scheme stays stable on the pure diffusion
/// part: the stability polynomial (1 + z/2 + z^2/8)^2 is bounded by 1 on
/// z in [-4, 0], and the stencil's spectrum reaches -D sum_a 4/h_a^2.
/// Infinite when the grid cannot carry diffusion.
double diffusion_step_limit(const Grid& grid, const Parameters& params);

/// Number of steps of size sigma (days) that make up one hour, at least 1.
std::size_t steps_per_hour(double sigma);

// ---------------------------------------------------------------------------
// Convergence order.

/// A problem with a computable high-accuracy solution. `final_error(sigma)`
/// integrates with the predictor-corrector scheme and returns the final-time
/// max-norm error against the reference.
struct ConvergenceProblem {
  std::string name;
  std::function<double(double sigma)> final_error;
  /// Magnitude used to scale the round-off floor.
  double scale = 1.0;
};

/// y' = y, y(0) = 1 on [0, 1]; exact e^t.
ConvergenceProblem exp_growth_problem();
/// y' = -2y + cos t, y(0) = 1 on [0, 1]; exact (3/5)e^{-2t} + (2 cos t + sin t)/5.
ConvergenceProblem forced_decay_problem();
/// y' = 3, y(0) = 1 on [0, 1]; the scheme is exact.
ConvergenceProblem constant_rate_problem();
/// Full model against the RK4 reference at sigma/10.
ConvergenceProblem model_problem(const SimulationState& initial, const ModelSystem& sys,
                                 double t_final);
/// "exp-growth", "forced-decay" or "constant". Throws ValidationError otherwise.
ConvergenceProblem named_problem(const std::string& name);

struct OrderEstimate {
  double sigma = 0.0;
  double error_coarse = 0.0;  // e(sigma)
  double error_fine = 0.0;    // e(sigma/2)
  double order = 0.0;         // log2(e(sigma) / e(sigma/2))
};

/// Throws ResolutionFloorError when either error is below 100 machine
/// epsilons (relative to problem.scale).
OrderEstimate observed_order(const ConvergenceProblem& problem, double sigma);

// ---------------------------------------------------------------------------
// Zero stability.

/// a_new * Y^{new level} + a_old * Y^{old level} = sigma * (stage sum).
struct HalfStepCoefficients {
  double new_level = 1.0;
  double old_level = -1.0;
};

struct SchemeCoefficients {
  HalfStepCoefficients predictor;
  HalfStepCoefficients corrector;

  /// First characteristic polynomial in zeta = lambda^{1/2}, highest degree
  /// first, from summing the two half-step relations.
  std::array<double, 3> characteristic_polynomial() const;
};

struct CharacteristicRoot {
  std::complex<double> value;
  int multiplicity = 1;
};

struct StabilityReport {
  std::array<double, 3> polynomial{};
  std::vector<CharacteristicRoot> roots;
  bool zero_stable = false;
  std::string verdict;
};

/// Root condition: every root in the closed unit disc, roots on the unit
/// circle simple.
StabilityReport root_condition_check(const SchemeCoefficients& coefficients = {});
StabilityReport root_condition_check(const std::array<double, 3>& polynomial);

}  // namespace immunesim
