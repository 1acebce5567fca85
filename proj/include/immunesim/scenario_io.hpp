#pragma once

// Configuration files and result persistence.
//
// Configuration is a TOML-style text file with the sections [parameters],
// [grid], [scenario] and [solver]:
//
//   [parameters]
//   k6 = 8.65 hr^-1      # rate keys accept a time-unit annotation
//   eta45 = 560
//
//   [grid]
//   extent = [0.01, 0.01, 0.01]   # mm
//   counts = [5, 5, 5]
//
//   [scenario]
//   y1 = 0.2
//   horizon_hr = 24
//   probes = [[0.002, 0.001, 0.002]]
//
//   [solver]
//   sigma = 0.001 day
//   diffusion = off
//   hill_exponents = table
//
// Unannotated rates are per day. `hr^-1` (or `/hr`) multiplies by 24.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "immunesim/analysis.hpp"
#include "immunesim/grid.hpp"
#include "immunesim/integrator.hpp"
#include "immunesim/model.hpp"

namespace immunesim {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);
/// Whole-string decimal parse; std::nullopt on trailing garbage.
std::optional<double> parse_double(std::string_view text);
/// "0.5day", "1e-3 day", "2hr", "0.001" (days). Throws ValidationError.
double parse_duration_days(std::string_view text);

struct ConfigValue {
  std::string raw;
  std::size_t line = 0;
};

/// Parsed key/value text, grouped by section. Rejects unknown sections,
/// keys outside a section and duplicate keys.
struct ConfigDocument {
  std::map<std::string, std::map<std::string, ConfigValue>> sections;

  static ConfigDocument parse(std::string_view text);
  static ConfigDocument load(const std::filesystem::path& path);

  const std::map<std::string, ConfigValue>* section(const std::string& name) const;
};

// ---------------------------------------------------------------------------

/// Initial profile of one cell field: constant plus an optional Gaussian bump
/// amplitude * exp(-|x - center|^2 / (2 width^2)).
struct FieldSpec {
  double constant = 0.0;
  double bump_amplitude = 0.0;
  Point3 bump_center{0.0, 0.0, 0.0};
  double bump_width = 0.0;

  Field realize(const Grid& grid) const;
  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

struct GridSpec {
  Point3 extent{1e-2, 1e-2, 1e-2};
  /// Unset: 5 per axis for reaction-only runs, 11 with diffusion.
  std::optional<std::array<std::size_t, 3>> counts;

  Grid resolve(bool diffusion) const;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct Scenario {
  FieldSpec y1{0.2};
  FieldSpec y2{1e-2};
  FieldSpec y3{5e-3};
  double y4 = 0.0;
  double y5 = 0.0;
  double y6 = 0.0;
  double y7 = 0.0;
  /// Unset: the constant part of y1.
  std::optional<double> y1_boundary;
  double horizon_days = 1.0;
  std::vector<Point3> probes{{2e-3, 1e-3, 2e-3}};
  GridSpec grid;

  double boundary_value() const { return y1_boundary.value_or(y1.constant); }
  /// Throws ValidationError (horizon <= 0, negative initial value, probe outside the domain).
  void validate() const;
  SimulationState initial_state(const Grid& grid) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct SolverSettings {
  double sigma_days = 1e-3;
  /// Unset: steps_per_hour(sigma).
  std::optional<std::size_t> record_every;
  bool diffusion = false;
  HillMode hill_mode = HillMode::Table;
  std::size_t threads = 1;

  friend bool operator==(const SolverSettings&, const SolverSettings&) = default;
};

struct Config {
  Parameters parameters;
  Scenario scenario;
  SolverSettings solver;
};

/// Reads [parameters]; missing keys keep their defaults. Other sections are ignored.
Parameters load_parameters(const std::filesystem::path& path);
Parameters parameters_from(const ConfigDocument& doc);

/// Reads [scenario] and [grid].
Scenario load_scenario(const std::filesystem::path& path);
Scenario scenario_from(const ConfigDocument& doc);

SolverSettings solver_from(const ConfigDocument& doc);

/// All sections of one document, validated.
Config config_from(const ConfigDocument& doc);
Config load_config(const std::filesystem::path& path);

/// Full text of a configuration that loads back to `config`.
std::string format_config(const Config& config);

/// Names of all [parameters] keys, in file order.
std::vector<std::string_view> parameter_keys();

// ---------------------------------------------------------------------------
// Time series CSV

inline constexpr std::string_view kCsvHeader =
    "time_hr,probe_id,s_aureus,rest_macroph,act_macroph,tnf_alpha,il6,il8,il10";

/// One row per (recorded state, probe), times in hours.
std::string format_timeseries_csv(const Trajectory& traj, const std::vector<Point3>& probes);
void write_timeseries_csv(const Trajectory& traj, const std::vector<Point3>& probes,
                          const std::filesystem::path& path);

/// Reads either the output schema above (rows filtered by `probe_id`) or an
/// experimental file with columns `time_hr,<component>...`.
/// Throws ValidationError on schema problems.
TimeSeries parse_timeseries_csv(std::string_view text, std::size_t probe_id = 0);
TimeSeries read_timeseries_csv(const std::filesystem::path& path, std::size_t probe_id = 0);

}  // namespace immunesim
