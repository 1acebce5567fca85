#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "immunesim/grid.hpp"
#include "immunesim/integrator.hpp"

namespace immunesim {

/// Column names of the seven components, in y1..y7 order.
inline constexpr std::array<std::string_view, kNumComponents> kComponentNames = {
    "s_aureus", "rest_macroph", "act_macroph", "tnf_alpha", "il6", "il8", "il10"};

/// Index of a component column name; throws ValidationError when unknown.
std::size_t component_index(std::string_view name);

/// Named columns sampled at common times (hours).
struct TimeSeries {
  std::vector<double> times_hr;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  std::size_t size() const { return times_hr.size(); }
  bool has(std::string_view name) const;
  /// Throws ValidationError when the column is absent.
  const std::vector<double>& column(std::string_view name) const;
};

/// The seven components at probe `x` for every recorded state.
TimeSeries probe_series(const Trajectory& traj, const Point3& x);

/// z = a y + b by ordinary least squares. r2 is the coefficient of determination.
struct RegressionFit {
  double a = 0.0;
  double b = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

/// Simulated `y` is the regressor, experimental `z` the response.
/// Throws DegenerateInputError for n < 2, unequal lengths or constant y.
RegressionFit linear_regression(const std::vector<double>& y, const std::vector<double>& z);

struct PeakSummary {
  std::string component;
  double t_peak_hr = 0.0;  // earliest time attaining the maximum
  double value = 0.0;
  bool plateau = false;    // the final sample equals the maximum
};

/// Global maximum over the recorded samples of one column.
PeakSummary detect_peak(const TimeSeries& series, std::string_view component);

/// Largest |a - b| over components, samples and recorded times.
/// Throws ValidationError when the time stamps or grids differ.
double error_norm(const Trajectory& a, const Trajectory& b);

}  // namespace immunesim
