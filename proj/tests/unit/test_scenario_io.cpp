#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "gen.hpp"
#include "immunesim/errors.hpp"
#include "immunesim/scenario_io.hpp"

using namespace immunesim;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("immunesim-io-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name, std::ios::binary) << text;
    return path / name;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Config parse(const std::string& text) { return config_from(ConfigDocument::parse(text)); }

const fs::path kConfigs = IMMUNESIM_CONFIG_DIR;

}  // namespace

TEST_CASE("number formatting round-trips exactly") {
  gen::Source src(0x10aa01);
  for (int i = 0; i < 2000; ++i) {
    const double v = (src.coin() ? -1 : 1) * src.log_uniform(1e-300, 1e300);
    REQUIRE(parse_double(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(24.0) == "24");
  CHECK_FALSE(parse_double("1.0x").has_value());
  CHECK_FALSE(parse_double("").has_value());
  CHECK(parse_double("+2.5") == 2.5);
}

TEST_CASE("durations") {
  CHECK(parse_duration_days("0.5day") == 0.5);
  CHECK(parse_duration_days("1e-3 day") == 1e-3);
  CHECK(parse_duration_days("0.001") == 0.001);
  CHECK(parse_duration_days("6hr") == 0.25);
  CHECK_THROWS_AS(parse_duration_days("3 fortnights"), ValidationError);
  CHECK_THROWS_AS(parse_duration_days("day"), ValidationError);
}

TEST_CASE("empty parameter file gives the tabulated defaults") {
  TempDir tmp;
  const Parameters p = load_parameters(tmp.write("empty.toml", ""));
  CHECK(p == Parameters{});
  CHECK(p.beta1 == 2.0);
  CHECK(p.k1 == 5e-2);
  CHECK(p.eta45 == 560.0);
}

TEST_CASE("hour-based rates are converted") {
  TempDir tmp;
  const Parameters p = load_parameters(tmp.write("k6.toml", "[parameters]\nk6 = 8.65 hr^-1\n"));
  CHECK(p.k6 == doctest::Approx(207.6).epsilon(1e-15));
  CHECK(parameters_from(ConfigDocument::parse("[parameters]\nk6 = 207.6\n")).k6 == 207.6);
  CHECK(parameters_from(ConfigDocument::parse("[parameters]\nk6 = 207.6 day^-1\n")).k6 == 207.6);
  CHECK(parameters_from(ConfigDocument::parse("[parameters]\nmu1 = 1 /hr\n")).mu1 == 24.0);
}

TEST_CASE("shipped parameter file equals the defaults") {
  CHECK(load_parameters(kConfigs / "parameters.toml") == Parameters{});
}

TEST_CASE("invalid parameters") {
  TempDir tmp;
  CHECK_THROWS_AS(load_parameters(tmp.write("neg.toml", "[parameters]\nbeta1 = -1\n")), ValidationError);
  CHECK_THROWS_AS(parameters_from(ConfigDocument::parse("[parameters]\nbeta9 = 1\n")), ParseError);
  CHECK_THROWS_AS(parameters_from(ConfigDocument::parse("[parameters]\nk1 = 1 hr^-1\n")), ParseError);
  CHECK_THROWS_AS(parameters_from(ConfigDocument::parse("[parameters]\nk6 = 1 furlong\n")), ParseError);
  CHECK_THROWS_AS(parameters_from(ConfigDocument::parse("[parameters]\nk6 = fast\n")), ParseError);
  CHECK_THROWS_AS(load_parameters(tmp.path / "missing.toml"), ValidationError);
}

TEST_CASE("syntax errors carry the line") {
  const auto line_of = [](const std::string& text) -> std::size_t {
    try {
      ConfigDocument::parse(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("[parameters]\nk1 = 1\nk1 = 2\n") == 3);
  CHECK(line_of("k1 = 1\n") == 1);
  CHECK(line_of("[parameters]\n\n[other]\n") == 3);
  CHECK(line_of("[parameters\n") == 1);
  CHECK(line_of("[parameters]\n# c\nnonsense\n") == 3);
  CHECK(line_of("[parameters]\nk1 =\n") == 2);
  CHECK(line_of("[grid]\n[grid]\n") == 2);
  CHECK(line_of("# only a comment\n\n") == 0);
}

TEST_CASE("scenario defaults and examples") {
  TempDir tmp;
  const Scenario s = load_scenario(tmp.write("empty.toml", ""));
  CHECK(s == Scenario{});
  CHECK(s.y1.constant == 0.2);
  CHECK(s.y2.constant == 1e-2);
  CHECK(s.y3.constant == 5e-3);
  CHECK(s.horizon_days == 1.0);
  CHECK(s.boundary_value() == 0.2);

  CHECK_THROWS_AS(load_scenario(tmp.write("t0.toml", "[scenario]\nhorizon_hr = 0\n")), ValidationError);
  CHECK_THROWS_AS(load_scenario(tmp.write("neg.toml", "[scenario]\ny2 = -0.1\n")), ValidationError);
  CHECK_THROWS_AS(load_scenario(tmp.write("out.toml", "[scenario]\nprobes = [[0.5, 0, 0]]\n")), ValidationError);

  const Scenario high = load_scenario(kConfigs / "high_inoculum.toml");
  CHECK(high.y1.constant == 4.68e-1);
  CHECK(high.y2.constant == 2.33e-2);
  CHECK(high.y3.constant == 1.17e-2);
  CHECK(high.probes.size() == 1);
  CHECK(load_scenario(kConfigs / "low_inoculum.toml") == Scenario{.grid = {.counts = std::array<std::size_t, 3>{5, 5, 5}}});
}

TEST_CASE("scenario grid and bumps") {
  const Config c = parse(
      "[grid]\nextent = [0.02, 0.01, 0.01]\ncounts = [3, 2, 1]\n"
      "[scenario]\ny2 = 0.01\ny2_bump_amplitude = 0.02\ny2_bump_center = [0.01, 0.0, 0.005]\n"
      "y2_bump_width = 0.002\ny1_boundary = 0.1\nprobes = [[0.001, 0.002, 0.003], [0.02, 0.01, 0.01]]\n"
      "[solver]\nsigma = 0.6 hr\nrecord_every = 5\ndiffusion = on\nhill_exponents = literal\nthreads = 2\n");
  const Grid g = c.scenario.grid.resolve(true);
  CHECK(g.counts() == std::array<std::size_t, 3>{3, 2, 1});
  const Field f = c.scenario.y2.realize(g);
  CHECK(f[g.index(1, 0, 0)] == doctest::Approx(0.03).epsilon(1e-14));
  CHECK(f[g.index(0, 1, 0)] < 0.011);
  CHECK(c.scenario.boundary_value() == 0.1);
  CHECK(c.scenario.probes.size() == 2);
  CHECK(c.solver.sigma_days == doctest::Approx(0.025).epsilon(1e-15));
  CHECK(c.solver.record_every == 5u);
  CHECK(c.solver.diffusion);
  CHECK(c.solver.threads == 2);
  CHECK(c.parameters.hill_mode == HillMode::Literal);

  CHECK(Scenario{}.grid.resolve(false).counts() == std::array<std::size_t, 3>{5, 5, 5});
  CHECK(Scenario{}.grid.resolve(true).counts() == std::array<std::size_t, 3>{11, 11, 11});
  CHECK_THROWS_AS(parse("[grid]\ncounts = [0, 2, 2]\n"), ParseError);
  CHECK_THROWS_AS(parse("[grid]\ncounts = [2.5, 2, 2]\n"), ParseError);
  CHECK_THROWS_AS(parse("[solver]\ndiffusion = maybe\n"), ParseError);
  CHECK_THROWS_AS(parse("[scenario]\nprobes = [[1, 2]]\n"), ParseError);
  CHECK_THROWS_AS(parse("[scenario]\ny9 = 1\n"), ParseError);
}

TEST_CASE("configuration round trip is a fixed point") {
  const Config defaults;
  const std::string once = format_config(defaults);
  const Config back = parse(once);
  CHECK(back.parameters == defaults.parameters);
  CHECK(back.scenario == defaults.scenario);
  CHECK(back.solver == defaults.solver);
  CHECK(format_config(back) == once);

  gen::Source src(0x10aa02);
  for (int i = 0; i < 50; ++i) {
    Config c;
    c.parameters.k6 = src.log_uniform(1, 500);
    c.parameters.n75 = src.uniform(1, 5);
    c.parameters.eta57 = src.log_uniform(1, 1000);
    c.parameters.hill_mode = src.coin() ? HillMode::Literal : HillMode::Table;
    c.solver.hill_mode = c.parameters.hill_mode;
    c.scenario.y1.constant = src.uniform(0, 1);
    c.scenario.y3.bump_amplitude = src.uniform(0.001, 0.01);
    c.scenario.y3.bump_center = {src.uniform(0, 1e-2), src.uniform(0, 1e-2), src.uniform(0, 1e-2)};
    c.scenario.y3.bump_width = src.uniform(1e-3, 5e-3);
    c.scenario.y1_boundary = src.uniform(0, 1);
    c.scenario.horizon_days = 0.5;
    c.scenario.grid.counts = std::array<std::size_t, 3>{3, 4, 5};
    c.solver.sigma_days = src.log_uniform(1e-5, 1e-2);
    c.solver.record_every = static_cast<std::size_t>(src.integer(1, 100));
    const std::string text = format_config(c);
    const Config r = parse(text);
    REQUIRE(r.parameters == c.parameters);
    REQUIRE(r.scenario == c.scenario);
    REQUIRE(r.solver == c.solver);
    REQUIRE(format_config(r) == text);
  }
}

TEST_CASE("CSV output shapes") {
  const Grid g({1e-2, 1e-2, 1e-2}, {3, 3, 3});
  const std::vector<Point3> probes{{2e-3, 1e-3, 2e-3}};
  Trajectory empty;
  CHECK(format_timeseries_csv(empty, probes) == std::string(kCsvHeader) + "\n");

  Trajectory one;
  one.times = {0.0};
  one.states = {uniform_state(g, {0.2, 0.01, 0.005, 0, 0, 0, 0})};
  const std::string text = format_timeseries_csv(one, probes);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(text.substr(text.find('\n') + 1) == "0,0,0.2,0.01,0.005,0,0,0,0\n");

  TempDir tmp;
  write_timeseries_csv(one, probes, tmp.path / "a.csv");
  write_timeseries_csv(one, probes, tmp.path / "b.csv");
  CHECK(slurp(tmp.path / "a.csv") == slurp(tmp.path / "b.csv"));
}

TEST_CASE("CSV values round-trip bit for bit") {
  gen::Source src(0x10aa03);
  const Grid g({1e-2, 1e-2, 1e-2}, {2, 2, 2});
  const std::vector<Point3> probes{{0, 0, 0}, {1e-2, 1e-2, 1e-2}};
  Trajectory tr;
  for (int k = 0; k < 20; ++k) {
    tr.times.push_back(k * 1e-3);
    SimulationState s = uniform_state(g, src.point(), k * 1e-3);
    tr.states.push_back(s);
  }
  const std::string text = format_timeseries_csv(tr, probes);
  for (std::size_t p = 0; p < probes.size(); ++p) {
    const TimeSeries ts = parse_timeseries_csv(text, p);
    REQUIRE(ts.size() == tr.states.size());
    for (std::size_t k = 0; k < ts.size(); ++k) {
      CHECK(ts.times_hr[k] == tr.times[k] * 24.0);
      const auto expect = probe(tr.states[k], probes[p]).as_array();
      for (std::size_t c = 0; c < 7; ++c) REQUIRE(ts.columns[c][k] == expect[c]);
    }
  }
}

TEST_CASE("CSV schema errors") {
  CHECK_THROWS_AS(parse_timeseries_csv(""), ValidationError);
  CHECK_THROWS_AS(parse_timeseries_csv("t,il6\n0,1\n"), ValidationError);
  CHECK_THROWS_AS(parse_timeseries_csv("time_hr,il99\n0,1\n"), ValidationError);
  CHECK_THROWS_AS(parse_timeseries_csv("time_hr,il6\n0,1,2\n"), ValidationError);
  CHECK_THROWS_AS(parse_timeseries_csv("time_hr,il6\n0,x\n"), ValidationError);
  CHECK_THROWS_AS(parse_timeseries_csv("time_hr,il6\n1,1\n0,1\n"), ValidationError);
  const TimeSeries ts = parse_timeseries_csv("time_hr,il6,il8\r\n0,1,2\r\n1,3,4\r\n");
  CHECK(ts.size() == 2);
  CHECK(ts.column("il8") == std::vector<double>{2, 4});
}
