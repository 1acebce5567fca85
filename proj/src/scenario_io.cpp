#include "immunesim/scenario_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "immunesim/errors.hpp"

namespace immunesim {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\''))) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Multiplier that converts a duration into days.
std::optional<double> duration_factor(std::string_view unit) {
  if (unit.empty() || unit == "day" || unit == "days" || unit == "d") return 1.0;
  if (unit == "hr" || unit == "hrs" || unit == "h" || unit == "hour" || unit == "hours") {
    return 1.0 / kHoursPerDay;
  }
  return std::nullopt;
}

constexpr std::array<std::string_view, 4> kSections = {"parameters", "grid", "scenario", "solver"};

}  // namespace

// ---------------------------------------------------------------------------
// Numbers

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty()) {
    return std::nullopt;
  }
  return value;
}

double parse_duration_days(std::string_view text) {
  text = trim(text);
  const std::size_t split = text.find_first_not_of("+-0123456789.eE");
  std::string_view number = text.substr(0, split);
  std::string_view unit = split == std::string_view::npos ? std::string_view{} : trim(text.substr(split));
  // "1e" followed by a unit letter is not an exponent
  while (!number.empty() && (number.back() == 'e' || number.back() == 'E')) {
    number.remove_suffix(1);
    unit = text.substr(number.size());
  }
  const auto value = parse_double(number);
  const auto factor = duration_factor(unit);
  if (!value || !factor || !std::isfinite(*value)) {
    throw ValidationError("cannot read duration '" + std::string(text) + "' (use e.g. 0.001day or 0.5hr)");
  }
  return *value * *factor;
}

// ---------------------------------------------------------------------------
// ConfigDocument

ConfigDocument ConfigDocument::parse(std::string_view text) {
  ConfigDocument doc;
  std::string current;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) {
      if (eol == text.size()) break;
      continue;
    }

    if (line.front() == '[' && (line.size() < 2 || line[1] != '[')) {
      if (line.back() != ']') throw ParseError("unterminated section header", line_no);
      const std::string name(trim(line.substr(1, line.size() - 2)));
      if (std::find(kSections.begin(), kSections.end(), name) == kSections.end()) {
        throw ParseError("unknown section [" + name + "]", line_no);
      }
      if (doc.sections.count(name) != 0) {
        throw ParseError("section [" + name + "] declared twice", line_no);
      }
      doc.sections[name];
      current = name;
    } else {
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
      const std::string key(trim(line.substr(0, eq)));
      const std::string value(trim(line.substr(eq + 1)));
      if (key.empty()) throw ParseError("missing key", line_no);
      if (!std::all_of(key.begin(), key.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; })) {
        throw ParseError("invalid key '" + key + "'", line_no);
      }
      if (value.empty()) throw ParseError("missing value for '" + key + "'", line_no);
      if (current.empty()) throw ParseError("key '" + key + "' outside of any section", line_no);
      auto& sec = doc.sections[current];
      if (sec.count(key) != 0) throw ParseError("duplicate key '" + key + "'", line_no);
      sec[key] = ConfigValue{value, line_no};
    }
    if (eol == text.size()) break;
  }
  return doc;
}

ConfigDocument ConfigDocument::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

const std::map<std::string, ConfigValue>* ConfigDocument::section(const std::string& name) const {
  const auto it = sections.find(name);
  return it == sections.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// Value parsing

namespace {

struct Quantity {
  double value;
  std::string unit;
};

Quantity parse_quantity(const ConfigValue& v, const std::string& key) {
  const std::string_view raw = trim(v.raw);
  const std::size_t split = raw.find_first_of(" \t");
  const std::string_view number = raw.substr(0, split);
  const auto parsed = parse_double(number);
  if (!parsed) throw ParseError("'" + key + "' expects a number, got '" + v.raw + "'", v.line);
  if (!std::isfinite(*parsed)) throw ParseError("'" + key + "' must be finite", v.line);
  Quantity q{*parsed, {}};
  if (split != std::string_view::npos) q.unit = std::string(trim(raw.substr(split)));
  return q;
}

double parse_plain_number(const ConfigValue& v, const std::string& key) {
  const Quantity q = parse_quantity(v, key);
  if (!q.unit.empty()) throw ParseError("'" + key + "' takes no unit annotation", v.line);
  return q.value;
}

// Multiplier that converts a per-time quantity into per-day.
std::optional<double> per_day_factor(std::string_view unit) {
  if (unit.empty()) return 1.0;
  for (std::string_view s : {"day^-1", "/day", "day-1", "d^-1", "/d"}) {
    if (ends_with(unit, s)) return 1.0;
  }
  for (std::string_view s : {"hr^-1", "/hr", "hr-1", "h^-1", "/h"}) {
    if (ends_with(unit, s)) return kHoursPerDay;
  }
  return std::nullopt;
}

std::vector<double> parse_number_list(const ConfigValue& v, const std::string& key) {
  std::string_view raw = trim(v.raw);
  if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']') {
    throw ParseError("'" + key + "' expects a list like [a, b, c]", v.line);
  }
  raw = trim(raw.substr(1, raw.size() - 2));
  std::vector<double> out;
  if (raw.empty()) return out;
  std::size_t start = 0;
  while (start <= raw.size()) {
    const std::size_t comma = std::min(raw.find(',', start), raw.size());
    const auto item = parse_double(raw.substr(start, comma - start));
    if (!item || !std::isfinite(*item)) {
      throw ParseError("'" + key + "' has a non-numeric list entry", v.line);
    }
    out.push_back(*item);
    if (comma == raw.size()) break;
    start = comma + 1;
  }
  return out;
}

Point3 parse_point(const ConfigValue& v, const std::string& key) {
  const auto xs = parse_number_list(v, key);
  if (xs.size() != 3) throw ParseError("'" + key + "' expects three coordinates", v.line);
  return {xs[0], xs[1], xs[2]};
}

std::vector<Point3> parse_point_list(const ConfigValue& v, const std::string& key) {
  std::string_view raw = trim(v.raw);
  if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']') {
    throw ParseError("'" + key + "' expects a list of points like [[x, y, z], ...]", v.line);
  }
  raw = trim(raw.substr(1, raw.size() - 2));
  std::vector<Point3> out;
  std::size_t pos = 0;
  while (pos < raw.size()) {
    const std::size_t open = raw.find('[', pos);
    if (open == std::string_view::npos) {
      if (!trim(raw.substr(pos)).empty()) throw ParseError("malformed point list", v.line);
      break;
    }
    const std::string_view between = trim(raw.substr(pos, open - pos));
    if (!between.empty() && between != ",") throw ParseError("malformed point list", v.line);
    const std::size_t close = raw.find(']', open);
    if (close == std::string_view::npos) throw ParseError("unterminated point", v.line);
    out.push_back(parse_point(ConfigValue{std::string(raw.substr(open, close - open + 1)), v.line}, key));
    pos = close + 1;
  }
  return out;
}

std::size_t parse_count(const ConfigValue& v, const std::string& key, double value) {
  if (!(value >= 1.0) || value != std::floor(value) || value > 1e9) {
    throw ParseError("'" + key + "' expects a positive integer", v.line);
  }
  return static_cast<std::size_t>(value);
}

bool parse_switch(const ConfigValue& v, const std::string& key) {
  const std::string_view s = unquote(trim(v.raw));
  if (s == "on" || s == "true") return true;
  if (s == "off" || s == "false") return false;
  throw ParseError("'" + key + "' expects on|off", v.line);
}

void reject_unknown(const ConfigValue& v, const std::string& section, const std::string& key) {
  throw ParseError("unknown key '" + key + "' in [" + section + "]", v.line);
}

// ---------------------------------------------------------------------------
// Parameter key table

struct ParamEntry {
  std::string_view key;
  double Parameters::*field;
  bool per_time;  // accepts a time-unit annotation
};

constexpr ParamEntry kParamTable[] = {
    {"beta1", &Parameters::beta1, true},     {"k1", &Parameters::k1, false},
    {"mu1", &Parameters::mu1, true},         {"lambda2", &Parameters::lambda2, true},
    {"lambda3", &Parameters::lambda3, true}, {"mu2", &Parameters::mu2, true},
    {"mu3", &Parameters::mu3, true},         {"gamma3", &Parameters::gamma3, true},
    {"y2m", &Parameters::y2m, false},        {"k2", &Parameters::k2, true},
    {"k3", &Parameters::k3, true},           {"k4", &Parameters::k4, true},
    {"k5", &Parameters::k5, true},           {"k6", &Parameters::k6, true},
    {"k7", &Parameters::k7, true},           {"k8", &Parameters::k8, true},
    {"k9", &Parameters::k9, true},           {"k10", &Parameters::k10, true},
    {"k11", &Parameters::k11, true},         {"k12", &Parameters::k12, true},
    {"k13", &Parameters::k13, true},         {"q4", &Parameters::q4, false},
    {"q5", &Parameters::q5, false},          {"q6", &Parameters::q6, false},
    {"q7", &Parameters::q7, false},          {"eta45", &Parameters::eta45, false},
    {"eta47", &Parameters::eta47, false},    {"eta57", &Parameters::eta57, false},
    {"eta55", &Parameters::eta55, false},    {"eta54", &Parameters::eta54, false},
    {"eta64", &Parameters::eta64, false},    {"eta67", &Parameters::eta67, false},
    {"eta75", &Parameters::eta75, false},    {"n47", &Parameters::n47, false},
    {"n45", &Parameters::n45, false},        {"n55", &Parameters::n55, false},
    {"n75", &Parameters::n75, false},        {"n54", &Parameters::n54, false},
    {"n57", &Parameters::n57, false},        {"n64", &Parameters::n64, false},
    {"n67", &Parameters::n67, false},        {"etaM4", &Parameters::etaM4, false},
    {"etaM7", &Parameters::etaM7, false},    {"nM4", &Parameters::nM4, false},
    {"nM7", &Parameters::nM7, false},        {"D1", &Parameters::D1, true},
    {"D2", &Parameters::D2, true},           {"D3", &Parameters::D3, true},
    {"lambda12", &Parameters::lambda12, true}, {"lambda13", &Parameters::lambda13, true},
    {"alpha1", &Parameters::alpha1, true},   {"alpha2", &Parameters::alpha2, true},
};

}  // namespace

std::vector<std::string_view> parameter_keys() {
  std::vector<std::string_view> keys;
  for (const auto& e : kParamTable) keys.push_back(e.key);
  return keys;
}

Parameters parameters_from(const ConfigDocument& doc) {
  Parameters p;
  if (const auto* sec = doc.section("parameters")) {
    for (const auto& [key, v] : *sec) {
      const auto it = std::find_if(std::begin(kParamTable), std::end(kParamTable),
                                   [&](const ParamEntry& e) { return e.key == key; });
      if (it == std::end(kParamTable)) reject_unknown(v, "parameters", key);
      const Quantity q = parse_quantity(v, key);
      double factor = 1.0;
      if (!q.unit.empty()) {
        if (!it->per_time) {
          throw ParseError("'" + key + "' is not a rate and takes no unit annotation", v.line);
        }
        const auto f = per_day_factor(q.unit);
        if (!f) throw ParseError("unrecognised unit '" + q.unit + "' for '" + key + "'", v.line);
        factor = *f;
      }
      p.*(it->field) = q.value * factor;
    }
  }
  p.validate();
  return p;
}

Parameters load_parameters(const std::filesystem::path& path) {
  return parameters_from(ConfigDocument::load(path));
}

// ---------------------------------------------------------------------------
// Scenario

Field FieldSpec::realize(const Grid& grid) const {
  Field f(grid, constant);
  if (bump_amplitude != 0.0) {
    const double two_w2 = 2.0 * bump_width * bump_width;
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
      const Point3 x = grid.coordinate(idx);
      double r2 = 0.0;
      for (int a = 0; a < 3; ++a) r2 += (x[a] - bump_center[a]) * (x[a] - bump_center[a]);
      f[idx] += bump_amplitude * std::exp(-r2 / two_w2);
    }
  }
  return f;
}

Grid GridSpec::resolve(bool diffusion) const {
  const std::size_t fallback = diffusion ? 11 : 5;
  return Grid(extent, counts.value_or(std::array<std::size_t, 3>{fallback, fallback, fallback}));
}

void Scenario::validate() const {
  if (!(horizon_days > 0.0) || !std::isfinite(horizon_days)) {
    throw ValidationError("scenario horizon must be positive");
  }
  const std::pair<const char*, const FieldSpec*> fields[] = {{"y1", &y1}, {"y2", &y2}, {"y3", &y3}};
  for (const auto& [name, spec] : fields) {
    if (!(spec->constant >= 0.0)) {
      throw ValidationError(std::string("initial ") + name + " must be non-negative");
    }
    if (!(spec->bump_amplitude >= 0.0)) {
      throw ValidationError(std::string("bump amplitude of ") + name + " must be non-negative");
    }
    if (spec->bump_amplitude > 0.0 && !(spec->bump_width > 0.0)) {
      throw ValidationError(std::string("bump width of ") + name + " must be positive");
    }
  }
  for (double c : {y4, y5, y6, y7}) {
    if (!(c >= 0.0)) throw ValidationError("initial cytokine concentrations must be non-negative");
  }
  if (!(boundary_value() >= 0.0)) throw ValidationError("y1 boundary value must be non-negative");
  const Grid g = grid.resolve(false);
  for (const auto& x : probes) {
    if (!g.contains(x)) {
      throw ValidationError("probe (" + format_double(x[0]) + ", " + format_double(x[1]) + ", " +
                            format_double(x[2]) + ") lies outside the domain");
    }
  }
}

SimulationState Scenario::initial_state(const Grid& g) const {
  SimulationState s;
  s.y1 = y1.realize(g);
  s.y2 = y2.realize(g);
  s.y3 = y3.realize(g);
  s.y4 = y4;
  s.y5 = y5;
  s.y6 = y6;
  s.y7 = y7;
  return s;
}

Scenario scenario_from(const ConfigDocument& doc) {
  Scenario sc;
  if (const auto* sec = doc.section("grid")) {
    for (const auto& [key, v] : *sec) {
      if (key == "extent") {
        sc.grid.extent = parse_point(v, key);
      } else if (key == "counts") {
        const Point3 c = parse_point(v, key);
        sc.grid.counts = std::array<std::size_t, 3>{parse_count(v, key, c[0]), parse_count(v, key, c[1]),
                                                    parse_count(v, key, c[2])};
      } else {
        reject_unknown(v, "grid", key);
      }
    }
  }
  if (const auto* sec = doc.section("scenario")) {
    FieldSpec* fields[] = {&sc.y1, &sc.y2, &sc.y3};
    for (const auto& [key, v] : *sec) {
      bool handled = false;
      for (int i = 0; i < 3 && !handled; ++i) {
        const std::string base = "y" + std::to_string(i + 1);
        if (key == base) {
          fields[i]->constant = parse_plain_number(v, key);
        } else if (key == base + "_bump_amplitude") {
          fields[i]->bump_amplitude = parse_plain_number(v, key);
        } else if (key == base + "_bump_center") {
          fields[i]->bump_center = parse_point(v, key);
        } else if (key == base + "_bump_width") {
          fields[i]->bump_width = parse_plain_number(v, key);
        } else {
          continue;
        }
        handled = true;
      }
      if (handled) continue;
      if (key == "y4") {
        sc.y4 = parse_plain_number(v, key);
      } else if (key == "y5") {
        sc.y5 = parse_plain_number(v, key);
      } else if (key == "y6") {
        sc.y6 = parse_plain_number(v, key);
      } else if (key == "y7") {
        sc.y7 = parse_plain_number(v, key);
      } else if (key == "y1_boundary") {
        sc.y1_boundary = parse_plain_number(v, key);
      } else if (key == "horizon_hr") {
        sc.horizon_days = parse_plain_number(v, key) / kHoursPerDay;
      } else if (key == "probes") {
        sc.probes = parse_point_list(v, key);
      } else {
        reject_unknown(v, "scenario", key);
      }
    }
  }
  sc.validate();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return scenario_from(ConfigDocument::load(path));
}

SolverSettings solver_from(const ConfigDocument& doc) {
  SolverSettings s;
  if (const auto* sec = doc.section("solver")) {
    for (const auto& [key, v] : *sec) {
      if (key == "sigma") {
        const Quantity q = parse_quantity(v, key);
        const auto f = duration_factor(q.unit);
        if (!f) throw ParseError("unrecognised time unit '" + q.unit + "'", v.line);
        if (!(q.value > 0.0)) throw ParseError("'sigma' must be positive", v.line);
        s.sigma_days = q.value * *f;
      } else if (key == "record_every") {
        s.record_every = parse_count(v, key, parse_plain_number(v, key));
      } else if (key == "diffusion") {
        s.diffusion = parse_switch(v, key);
      } else if (key == "hill_exponents") {
        const std::string_view m = unquote(trim(v.raw));
        if (m == "table") {
          s.hill_mode = HillMode::Table;
        } else if (m == "literal") {
          s.hill_mode = HillMode::Literal;
        } else {
          throw ParseError("'hill_exponents' expects table|literal", v.line);
        }
      } else if (key == "threads") {
        s.threads = parse_count(v, key, parse_plain_number(v, key));
      } else {
        reject_unknown(v, "solver", key);
      }
    }
  }
  return s;
}

Config config_from(const ConfigDocument& doc) {
  Config c;
  c.parameters = parameters_from(doc);
  c.scenario = scenario_from(doc);
  c.solver = solver_from(doc);
  c.parameters.hill_mode = c.solver.hill_mode;
  return c;
}

Config load_config(const std::filesystem::path& path) {
  return config_from(ConfigDocument::load(path));
}

std::string format_config(const Config& c) {
  std::ostringstream out;
  const auto point = [](const Point3& x) {
    return "[" + format_double(x[0]) + ", " + format_double(x[1]) + ", " + format_double(x[2]) + "]";
  };

  out << "[parameters]\n# rates per day\n";
  for (const auto& e : kParamTable) {
    out << e.key << " = " << format_double(c.parameters.*(e.field)) << "\n";
  }

  out << "\n[grid]\nextent = " << point(c.scenario.grid.extent) << "\n";
  if (c.scenario.grid.counts) {
    const auto& n = *c.scenario.grid.counts;
    out << "counts = [" << n[0] << ", " << n[1] << ", " << n[2] << "]\n";
  }

  out << "\n[scenario]\n";
  const std::pair<const char*, const FieldSpec*> fields[] = {
      {"y1", &c.scenario.y1}, {"y2", &c.scenario.y2}, {"y3", &c.scenario.y3}};
  for (const auto& [name, spec] : fields) {
    out << name << " = " << format_double(spec->constant) << "\n";
    if (spec->bump_amplitude != 0.0) {
      out << name << "_bump_amplitude = " << format_double(spec->bump_amplitude) << "\n";
      out << name << "_bump_center = " << point(spec->bump_center) << "\n";
      out << name << "_bump_width = " << format_double(spec->bump_width) << "\n";
    }
  }
  out << "y4 = " << format_double(c.scenario.y4) << "\n";
  out << "y5 = " << format_double(c.scenario.y5) << "\n";
  out << "y6 = " << format_double(c.scenario.y6) << "\n";
  out << "y7 = " << format_double(c.scenario.y7) << "\n";
  if (c.scenario.y1_boundary) out << "y1_boundary = " << format_double(*c.scenario.y1_boundary) << "\n";
  out << "horizon_hr = " << format_double(c.scenario.horizon_days * kHoursPerDay) << "\n";
  out << "probes = [";
  for (std::size_t i = 0; i < c.scenario.probes.size(); ++i) {
    out << (i ? ", " : "") << point(c.scenario.probes[i]);
  }
  out << "]\n";

  out << "\n[solver]\nsigma = " << format_double(c.solver.sigma_days) << " day\n";
  if (c.solver.record_every) out << "record_every = " << *c.solver.record_every << "\n";
  out << "diffusion = " << (c.solver.diffusion ? "on" : "off") << "\n";
  out << "hill_exponents = " << (c.solver.hill_mode == HillMode::Literal ? "literal" : "table") << "\n";
  out << "threads = " << c.solver.threads << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// CSV

std::string format_timeseries_csv(const Trajectory& traj, const std::vector<Point3>& probes) {
  std::string out(kCsvHeader);
  out += '\n';
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    const std::string time = format_double(traj.times[s] * kHoursPerDay);
    for (std::size_t p = 0; p < probes.size(); ++p) {
      out += time;
      out += ',';
      out += std::to_string(p);
      for (double v : probe(traj.states[s], probes[p]).as_array()) {
        out += ',';
        out += format_double(v);
      }
      out += '\n';
    }
  }
  return out;
}

void write_timeseries_csv(const Trajectory& traj, const std::vector<Point3>& probes,
                          const std::filesystem::path& path) {
  const std::string text = format_timeseries_csv(traj, probes);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

TimeSeries parse_timeseries_csv(std::string_view text, std::size_t probe_id) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(text.substr(pos, eol - pos));
    if (!line.empty()) lines.push_back(line);
    pos = eol + 1;
  }
  if (lines.empty()) throw ValidationError("CSV file is empty");

  const auto header = split_csv(lines[0]);
  if (header.empty() || header[0] != "time_hr") {
    throw ValidationError("CSV header must start with time_hr");
  }
  std::size_t first_value = 1;
  const bool has_probe = header.size() > 1 && header[1] == "probe_id";
  if (has_probe) first_value = 2;

  TimeSeries ts;
  for (std::size_t c = first_value; c < header.size(); ++c) {
    component_index(header[c]);
    if (ts.has(header[c])) throw ValidationError("duplicate CSV column '" + std::string(header[c]) + "'");
    ts.names.emplace_back(header[c]);
  }
  if (ts.names.empty()) throw ValidationError("CSV has no component columns");
  ts.columns.assign(ts.names.size(), {});

  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split_csv(lines[r]);
    if (cells.size() != header.size()) {
      throw ValidationError("CSV row " + std::to_string(r + 1) + " has " + std::to_string(cells.size()) +
                            " fields, header has " + std::to_string(header.size()));
    }
    std::vector<double> row;
    for (const auto cell : cells) {
      const auto v = parse_double(cell);
      if (!v) throw ValidationError("CSV row " + std::to_string(r + 1) + " has a non-numeric field");
      row.push_back(*v);
    }
    if (has_probe && row[1] != static_cast<double>(probe_id)) continue;
    ts.times_hr.push_back(row[0]);
    for (std::size_t c = first_value; c < row.size(); ++c) ts.columns[c - first_value].push_back(row[c]);
  }
  for (std::size_t i = 1; i < ts.times_hr.size(); ++i) {
    if (!(ts.times_hr[i] > ts.times_hr[i - 1])) {
      throw ValidationError("CSV times must be strictly increasing");
    }
  }
  return ts;
}

TimeSeries read_timeseries_csv(const std::filesystem::path& path, std::size_t probe_id) {
  return parse_timeseries_csv(read_file(path), probe_id);
}

}  // namespace immunesim
