#pragma once

// Cellular-cytokine reaction model: bacteria (y1), resting and activated
// macrophages (y2, y3) and the cytokines TNFa, IL6, IL8, IL10 (y4..y7).
//
// Internal time unit is the day. Concentrations of cells are cells/mm^3,
// cytokines are relative concentrations.

#include <array>

namespace immunesim {

inline constexpr int kNumComponents = 7;
inline constexpr double kHoursPerDay = 24.0;

/// The seven concentrations at one spatial location.
struct StatePoint {
  double y1 = 0.0;  // S. aureus
  double y2 = 0.0;  // resting macrophages
  double y3 = 0.0;  // activated macrophages
  double y4 = 0.0;  // TNFa
  double y5 = 0.0;  // IL6
  double y6 = 0.0;  // IL8
  double y7 = 0.0;  // IL10

  std::array<double, kNumComponents> as_array() const { return {y1, y2, y3, y4, y5, y6, y7}; }
  static StatePoint from_array(const std::array<double, kNumComponents>& a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5], a[6]};
  }
};

using Rates = std::array<double, kNumComponents>;

/// `Literal` forces every Hill exponent to 1 (the regulation factor as
/// printed); `Table` uses the tabulated exponents.
enum class HillMode { Table, Literal };

/// Model constants. Defaults are the tabulated values converted to day-based
/// units; rates tabulated per hour (k2..k6) are stored multiplied by 24.
struct Parameters {
  // bacteria
  double beta1 = 2.0;
  double k1 = 5e-2;
  double mu1 = 0.1;
  double lambda2 = 5.98e-3;
  double lambda3 = 5.98e-2;
  // macrophages
  double mu2 = 3.3e-2;
  double mu3 = 7e-2;
  double gamma3 = 8.2e-2;
  double y2m = 0.1;
  // cytokine decay toward resting level (tabulated per hour)
  double k2 = 0.2 * kHoursPerDay;
  double k3 = 4.64 * kHoursPerDay;
  double k4 = 0.464 * kHoursPerDay;
  double k5 = 1.1 * kHoursPerDay;
  // cytokine-influenced macrophage activation (tabulated per hour)
  double k6 = 8.65 * kHoursPerDay;
  // up-regulation by activated macrophages / other cytokines
  double k7 = 1.5;
  double k8 = 1e-2;
  double k9 = 8.1e-1;
  double k10 = 5.6e-2;
  double k11 = 5.6e-1;
  double k12 = 1.9e-1;
  double k13 = 1.91e-2;
  // resting levels
  double q4 = 0.14;
  double q5 = 0.6;
  double q6 = 0.2;
  double q7 = 0.15;
  // half-max values, eta_ab: regulation of cytokine a by cytokine b
  double eta45 = 560.0;
  double eta47 = 17.4;
  double eta57 = 34.8;
  double eta55 = 560.0;
  double eta54 = 185.0;
  double eta64 = 185.0;
  double eta67 = 17.4;
  double eta75 = 560.0;
  // Hill exponents
  double n47 = 3.0;
  double n45 = 2.0;
  double n55 = 1.0;
  double n75 = 3.68;
  double n54 = 2.0;
  double n57 = 4.0;
  double n64 = 3.0;
  double n67 = 1.5;
  // macrophage activation factor H^u(y4) H^d(y7)
  double etaM4 = 185.0;
  double etaM7 = 17.4;
  double nM4 = 1.0;
  double nM7 = 1.0;
  // diffusion coefficients, used only when diffusion is enabled
  double D1 = 3.7e-15;
  double D2 = 4.32e-2;
  double D3 = 3e-1;
  // tabulated but not part of any implemented equation
  double lambda12 = 1.66e-3;
  double lambda13 = 7.14e-2;
  double alpha1 = 4.0;
  double alpha2 = 1e-3;

  HillMode hill_mode = HillMode::Table;

  /// Throws ValidationError naming the first offending field.
  void validate() const;

  /// Exponent actually used in a regulation factor under the current mode.
  double exponent(double n) const { return hill_mode == HillMode::Literal ? 1.0 : n; }

  friend bool operator==(const Parameters&, const Parameters&) = default;
};

/// y^n / (eta^n + y^n). Throws DomainError for eta <= 0, y < 0 or n < 1.
double hill_up(double y, double eta, double n);

/// eta^n / (eta^n + y^n). Throws DomainError for eta <= 0, y < 0 or n < 1.
double hill_down(double y, double eta, double n);

/// Macrophage activation rate [gamma3 + k6 H^u(y4) H^d(y7)] (per unit y1*y2).
double activation_rate(double y4, double y7, const Parameters& params);

/// Right-hand side F at one location. The cytokine rates use `avg_y3`, the
/// domain average of activated macrophages, instead of the local y3.
///
/// Does not validate `params`; callers validate once up front. A negative
/// cytokine concentration reaching a Hill factor raises DomainError.
Rates rhs(const StatePoint& point, double avg_y3, const Parameters& params);

/// Cytokine part (F4..F7) only; identical at every location.
std::array<double, 4> cytokine_rhs(double y4, double y5, double y6, double y7, double avg_y3,
                                   const Parameters& params);

/// Cellular part (F1..F3) only.
std::array<double, 3> cellular_rhs(double y1, double y2, double y3, double y4, double y7,
                                   const Parameters& params);

/// F1..F3 given a precomputed activation_rate(y4, y7, params).
std::array<double, 3> cellular_rates(double y1, double y2, double y3, double activation,
                                     const Parameters& params);

}  // namespace immunesim
