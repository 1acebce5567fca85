#include "immunesim/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "immunesim/errors.hpp"

namespace immunesim {

std::size_t component_index(std::string_view name) {
  for (std::size_t i = 0; i < kComponentNames.size(); ++i) {
    if (kComponentNames[i] == name) return i;
  }
  throw ValidationError("unknown component '" + std::string(name) + "'");
}

bool TimeSeries::has(std::string_view name) const {
  return std::find(names.begin(), names.end(), name) != names.end();
}

const std::vector<double>& TimeSeries::column(std::string_view name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) {
    throw ValidationError("time series has no column '" + std::string(name) + "'");
  }
  return columns[static_cast<std::size_t>(it - names.begin())];
}

TimeSeries probe_series(const Trajectory& traj, const Point3& x) {
  TimeSeries ts;
  ts.names.assign(kComponentNames.begin(), kComponentNames.end());
  ts.columns.assign(kNumComponents, {});
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    ts.times_hr.push_back(traj.times[s] * kHoursPerDay);
    const auto values = probe(traj.states[s], x).as_array();
    for (int c = 0; c < kNumComponents; ++c) ts.columns[c].push_back(values[c]);
  }
  return ts;
}

RegressionFit linear_regression(const std::vector<double>& y, const std::vector<double>& z) {
  if (y.size() != z.size()) {
    throw DegenerateInputError("regression series have different lengths (" +
                               std::to_string(y.size()) + " vs " + std::to_string(z.size()) + ")");
  }
  const std::size_t n = y.size();
  if (n < 2) throw DegenerateInputError("regression needs at least two samples");

  double mean_y = 0.0;
  double mean_z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_y += y[i];
    mean_z += z[i];
  }
  mean_y /= static_cast<double>(n);
  mean_z /= static_cast<double>(n);

  double syy = 0.0;
  double syz = 0.0;
  double szz = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dy = y[i] - mean_y;
    const double dz = z[i] - mean_z;
    syy += dy * dy;
    syz += dy * dz;
    szz += dz * dz;
  }
  if (!(syy > 0.0)) throw DegenerateInputError("regressor is constant");

  RegressionFit fit;
  fit.n = n;
  fit.a = syz / syy;
  fit.b = mean_z - fit.a * mean_y;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = z[i] - (fit.a * y[i] + fit.b);
    ss_res += r * r;
  }
  fit.r2 = szz > 0.0 ? std::clamp(1.0 - ss_res / szz, 0.0, 1.0) : 1.0;
  return fit;
}

PeakSummary detect_peak(const TimeSeries& series, std::string_view component) {
  const auto& values = series.column(component);
  if (values.empty()) throw ValidationError("cannot detect a peak in an empty series");

  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  PeakSummary peak;
  peak.component = std::string(component);
  peak.t_peak_hr = series.times_hr[best];
  peak.value = values[best];
  peak.plateau = values.back() == values[best];
  return peak;
}

double error_norm(const Trajectory& a, const Trajectory& b) {
  if (a.times != b.times || a.states.size() != b.states.size()) {
    throw ValidationError("trajectories are recorded at different times");
  }
  double m = 0.0;
  for (std::size_t s = 0; s < a.states.size(); ++s) {
    const auto& sa = a.states[s];
    const auto& sb = b.states[s];
    if (!(sa.grid() == sb.grid())) throw ValidationError("trajectories use different grids");
    m = std::max({m, std::abs(sa.y4 - sb.y4), std::abs(sa.y5 - sb.y5), std::abs(sa.y6 - sb.y6),
                  std::abs(sa.y7 - sb.y7)});
    const std::pair<const Field*, const Field*> fields[] = {
        {&sa.y1, &sb.y1}, {&sa.y2, &sb.y2}, {&sa.y3, &sb.y3}};
    for (const auto& [fa, fb] : fields) {
      for (std::size_t i = 0; i < fa->size(); ++i) {
        m = std::max(m, std::abs((*fa)[i] - (*fb)[i]));
      }
    }
  }
  return m;
}

}  // namespace immunesim
