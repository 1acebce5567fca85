#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "gen.hpp"
#include "immunesim/errors.hpp"
#include "immunesim/model.hpp"

using namespace immunesim;

namespace {

StatePoint resting(const Parameters& p) { return {0, 0, 0, p.q4, p.q5, p.q6, p.q7}; }

}  // namespace

TEST_CASE("hill_up examples") {
  CHECK(hill_up(0.0, 560.0, 1.0) == 0.0);
  CHECK(hill_up(185.0, 185.0, 2.0) == 0.5);
  CHECK(hill_up(52.2, 17.4, 1.0) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("hill_down examples") {
  CHECK(hill_down(0.0, 17.4, 3.0) == 1.0);
  CHECK(hill_down(560.0, 560.0, 1.0) == 0.5);
  CHECK(hill_down(34.8, 17.4, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("hill factors saturate instead of producing NaN") {
  const double huge = std::numeric_limits<double>::max();
  CHECK(hill_up(huge, 1e-2, 4.0) == 1.0);
  CHECK(hill_down(huge, 1e-2, 4.0) == 0.0);
  CHECK(hill_up(std::numeric_limits<double>::infinity(), 1.0, 1.0) == 1.0);
}

TEST_CASE("hill arguments outside the domain are rejected") {
  CHECK_THROWS_AS(hill_up(-1e-9, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(hill_down(1.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(hill_up(1.0, -2.0, 1.0), DomainError);
  CHECK_THROWS_AS(hill_up(1.0, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(hill_down(std::nan(""), 1.0, 1.0), DomainError);
}

TEST_CASE("property: hill identities") {
  gen::Source g(0x5eed01);
  for (int i = 0; i < 10000; ++i) {
    const double y = g.concentration();
    const double eta = g.half_max();
    const double n = g.exponent();
    const double up = hill_up(y, eta, n);
    const double down = hill_down(y, eta, n);
    REQUIRE(std::abs(up + down - 1.0) <= 1e-14);
    REQUIRE(up >= 0.0);
    REQUIRE(up <= 1.0);
    REQUIRE(hill_up(eta, eta, n) == 0.5);
    REQUIRE(hill_down(eta, eta, n) == 0.5);

    const double y2 = y * g.uniform(1.0, 3.0) + g.uniform(0.0, 1.0);
    REQUIRE(hill_up(y2, eta, n) >= up);
    REQUIRE(hill_down(y2, eta, n) <= down);
  }
}

TEST_CASE("rhs: resting state is a fixed point") {
  const Parameters p;
  const Rates r = rhs(resting(p), 0.0, p);
  for (double v : r) CHECK(v == 0.0);

  Parameters lit;
  lit.hill_mode = HillMode::Literal;
  for (double v : rhs(resting(lit), 0.0, lit)) CHECK(v == 0.0);
}

TEST_CASE("rhs: bacteria at carrying capacity only die") {
  const Parameters p;
  StatePoint s = resting(p);
  s.y1 = p.k1;
  const Rates r = rhs(s, 0.0, p);
  CHECK(r[0] == doctest::Approx(-p.mu1 * p.k1).epsilon(1e-15));
  CHECK(r[0] == doctest::Approx(-5.0e-3).epsilon(1e-12));
}

TEST_CASE("rhs: IL10 driven by activated macrophages alone") {
  Parameters p;
  p.k5 = 1.1;  // per-day reading of the IL10 relaxation rate
  StatePoint s{};
  s.y3 = 1.0;
  const Rates r = rhs(s, 1.0, p);
  CHECK(r[6] == doctest::Approx(0.19 + 1.1 * 0.15).epsilon(1e-14));
  CHECK(r[6] == doctest::Approx(0.355).epsilon(1e-12));

  const Parameters d;  // default: tabulated per hour
  CHECK(rhs(s, 1.0, d)[6] == doctest::Approx(0.19 + 26.4 * 0.15).epsilon(1e-14));
}

TEST_CASE("rhs: cytokines see the average, not the pointwise y3") {
  const Parameters p;
  StatePoint a = resting(p);
  StatePoint b = resting(p);
  a.y3 = 0.0;
  b.y3 = 0.3;
  const Rates ra = rhs(a, 0.1, p);
  const Rates rb = rhs(b, 0.1, p);
  for (int c = 3; c < 7; ++c) CHECK(ra[c] == rb[c]);
  CHECK_THROWS_AS(rhs(a, -1e-3, p), DomainError);
}

TEST_CASE("property: mass transfer between macrophage pools") {
  gen::Source g(0x5eed02);
  const Parameters p;
  for (int i = 0; i < 1000; ++i) {
    const StatePoint s = g.point();
    const Rates r = rhs(s, g.uniform(0.0, 0.05), p);
    const double expect = p.mu2 * s.y2 * (1.0 - s.y2 / p.y2m) - p.mu3 * s.y3;
    REQUIRE(std::abs(r[1] + r[2] - expect) <= 1e-12);
  }
}

TEST_CASE("property: rhs is bitwise deterministic") {
  gen::Source g(0x5eed03);
  const Parameters p;
  for (int i = 0; i < 200; ++i) {
    const StatePoint s = g.point();
    const double avg = g.uniform(0.0, 0.05);
    REQUIRE(rhs(s, avg, p) == rhs(s, avg, p));
  }
}

TEST_CASE("split evaluation agrees with the pointwise rhs") {
  gen::Source g(0x5eed04);
  const Parameters p;
  for (int i = 0; i < 200; ++i) {
    const StatePoint s = g.point();
    const double avg = g.uniform(0.0, 0.05);
    const Rates r = rhs(s, avg, p);
    const auto cell = cellular_rhs(s.y1, s.y2, s.y3, s.y4, s.y7, p);
    const auto cyto = cytokine_rhs(s.y4, s.y5, s.y6, s.y7, avg, p);
    for (int c = 0; c < 3; ++c) REQUIRE(cell[c] == r[c]);
    for (int c = 0; c < 4; ++c) REQUIRE(cyto[c] == r[c + 3]);
  }
}

TEST_CASE("literal mode uses unit exponents") {
  Parameters lit;
  lit.hill_mode = HillMode::Literal;
  CHECK(lit.exponent(3.68) == 1.0);
  CHECK(Parameters{}.exponent(3.68) == 3.68);

  StatePoint s{0.1, 0.01, 0.005, 100.0, 0.6, 0.2, 10.0};
  CHECK(rhs(s, 0.005, lit) != rhs(s, 0.005, Parameters{}));
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(Parameters{}.validate());
  Parameters p;
  p.beta1 = -1.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = {};
  p.eta45 = 0.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = {};
  p.n57 = 0.5;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = {};
  p.k6 = std::nan("");
  CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("hourly rates are stored per day") {
  const Parameters p;
  CHECK(p.k6 == doctest::Approx(207.6).epsilon(1e-15));
  CHECK(p.k2 == doctest::Approx(4.8).epsilon(1e-15));
}
