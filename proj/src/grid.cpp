#include "immunesim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "immunesim/errors.hpp"

namespace immunesim {

Grid::Grid(Point3 extent, std::array<std::size_t, 3> counts) : extent_(extent), counts_(counts) {
  for (int a = 0; a < 3; ++a) {
    if (!(extent_[a] > 0.0) || !std::isfinite(extent_[a])) {
      throw ValidationError("grid extent must be positive on axis " + std::to_string(a));
    }
    if (counts_[a] < 1) {
      throw ValidationError("grid needs at least one sample on axis " + std::to_string(a));
    }
    spacing_[a] = counts_[a] >= 2 ? extent_[a] / static_cast<double>(counts_[a] - 1) : 0.0;
  }
}

std::array<std::size_t, 3> Grid::unravel(std::size_t idx) const {
  const std::size_t i = idx % counts_[0];
  const std::size_t rest = idx / counts_[0];
  return {i, rest % counts_[1], rest / counts_[1]};
}

Point3 Grid::coordinate(std::size_t idx) const {
  const auto ijk = unravel(idx);
  Point3 x{};
  for (int a = 0; a < 3; ++a) {
    x[a] = counts_[a] >= 2 ? static_cast<double>(ijk[a]) * spacing_[a] : 0.5 * extent_[a];
  }
  return x;
}

bool Grid::is_boundary(std::size_t idx) const {
  const auto ijk = unravel(idx);
  for (int a = 0; a < 3; ++a) {
    if (ijk[a] == 0 || ijk[a] + 1 == counts_[a]) return true;
  }
  return false;
}

std::size_t Grid::boundary_count() const {
  std::size_t interior = 1;
  for (auto n : counts_) interior *= n > 2 ? n - 2 : 0;
  return size() - interior;
}

bool Grid::contains(const Point3& x) const {
  for (int a = 0; a < 3; ++a) {
    const double slack = 1e-12 * extent_[a];
    if (!(x[a] >= -slack && x[a] <= extent_[a] + slack)) return false;
  }
  return true;
}

bool Grid::supports_diffusion() const {
  return std::all_of(counts_.begin(), counts_.end(), [](std::size_t n) { return n >= 2; });
}

Field::Field(Grid g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw ValidationError("field has " + std::to_string(values.size()) + " samples, grid has " +
                          std::to_string(grid.size()));
  }
}

bool SimulationState::is_valid() const {
  if (!(y2.grid == y1.grid) || !(y3.grid == y1.grid)) return false;
  for (const Field* f : {&y1, &y2, &y3}) {
    if (f->values.size() != f->grid.size()) return false;
    for (double v : f->values) {
      if (!std::isfinite(v)) return false;
    }
  }
  return std::isfinite(t) && std::isfinite(y4) && std::isfinite(y5) && std::isfinite(y6) &&
         std::isfinite(y7);
}

double SimulationState::min_value() const {
  double m = std::min({y4, y5, y6, y7});
  for (const Field* f : {&y1, &y2, &y3}) {
    for (double v : f->values) m = std::min(m, v);
  }
  return m;
}

SimulationState uniform_state(const Grid& grid, const StatePoint& v, double t) {
  SimulationState s;
  s.t = t;
  s.y1 = Field(grid, v.y1);
  s.y2 = Field(grid, v.y2);
  s.y3 = Field(grid, v.y3);
  s.y4 = v.y4;
  s.y5 = v.y5;
  s.y6 = v.y6;
  s.y7 = v.y7;
  return s;
}

double average_field(const Field& f) {
  if (f.values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : f.values) sum += v;
  return sum / static_cast<double>(f.values.size());
}

void apply_boundary_in_place(SimulationState& state, double y1_boundary) {
  const Grid& g = state.y1.grid;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (g.is_boundary(idx)) state.y1[idx] = y1_boundary;
  }
}

SimulationState apply_boundary(SimulationState state, double y1_boundary) {
  apply_boundary_in_place(state, y1_boundary);
  return state;
}

Field laplacian(const Field& f) {
  const Grid& g = f.grid;
  if (!g.supports_diffusion()) {
    throw DomainError("laplacian needs at least 2 samples on every axis");
  }
  const auto& n = g.counts();
  const auto& h = g.spacing();
  Field out(g, 0.0);
  std::array<std::size_t, 3> stride{1, n[0], n[0] * n[1]};
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const auto ijk = g.unravel(idx);
    const double centre = f[idx];
    double acc = 0.0;
    for (int a = 0; a < 3; ++a) {
      // mirror ghosts: the missing neighbour takes the value of the opposite one
      const std::size_t i = ijk[a];
      const double lo = i > 0 ? f[idx - stride[a]] : f[idx + stride[a]];
      const double hi = i + 1 < n[a] ? f[idx + stride[a]] : f[idx - stride[a]];
      acc += (lo - 2.0 * centre + hi) / (h[a] * h[a]);
    }
    out[idx] = acc;
  }
  return out;
}

double interpolate(const Field& f, const Point3& x) {
  const Grid& g = f.grid;
  if (!g.contains(x)) {
    throw ValidationError("probe point lies outside the domain");
  }
  std::array<std::size_t, 3> base{};
  std::array<double, 3> frac{};
  for (int a = 0; a < 3; ++a) {
    const std::size_t n = g.counts()[a];
    if (n < 2) {
      base[a] = 0;
      frac[a] = 0.0;
      continue;
    }
    const double s = std::clamp(x[a] / g.spacing()[a], 0.0, static_cast<double>(n - 1));
    std::size_t cell = static_cast<std::size_t>(std::floor(s));
    if (cell >= n - 1) cell = n - 2;
    base[a] = cell;
    frac[a] = s - static_cast<double>(cell);
  }
  // nested lerps: exact on constant data
  const auto lerp = [](double lo, double hi, double t) { return t == 0.0 ? lo : lo + t * (hi - lo); };
  const auto at = [&](int di, int dj, int dk) {
    const auto up = [&](int a, int d) { return g.counts()[a] < 2 ? base[a] : base[a] + d; };
    return f[g.index(up(0, di), up(1, dj), up(2, dk))];
  };
  const auto edge = [&](int dj, int dk) { return lerp(at(0, dj, dk), at(1, dj, dk), frac[0]); };
  const auto face = [&](int dk) { return lerp(edge(0, dk), edge(1, dk), frac[1]); };
  const double value = lerp(face(0), face(1), frac[2]);
  return value;
}

StatePoint probe(const SimulationState& state, const Point3& x) {
  return {interpolate(state.y1, x), interpolate(state.y2, x), interpolate(state.y3, x),
          state.y4, state.y5, state.y6, state.y7};
}

}  // namespace immunesim
