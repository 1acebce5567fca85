#pragma once

// Rectilinear sampling of the tissue block, domain averages, the y1 boundary
// condition and the optional no-flux diffusion stencil.

#include <array>
#include <cstddef>
#include <vector>

#include "immunesim/model.hpp"

namespace immunesim {

using Point3 = std::array<double, 3>;

/// Uniform lattice over [0, extent_0] x [0, extent_1] x [0, extent_2] (mm).
/// Samples lie on the faces, so spacing = extent / (counts - 1). An axis
/// with a single sample is collapsed.
class Grid {
 public:
  Grid() : Grid({1e-2, 1e-2, 1e-2}, {1, 1, 1}) {}
  Grid(Point3 extent, std::array<std::size_t, 3> counts);

  const Point3& extent() const { return extent_; }
  const std::array<std::size_t, 3>& counts() const { return counts_; }
  /// Zero on collapsed axes.
  const Point3& spacing() const { return spacing_; }
  std::size_t size() const { return counts_[0] * counts_[1] * counts_[2]; }
  double volume() const { return extent_[0] * extent_[1] * extent_[2]; }

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return i + counts_[0] * (j + counts_[1] * k);
  }
  std::array<std::size_t, 3> unravel(std::size_t idx) const;
  Point3 coordinate(std::size_t idx) const;

  /// True for samples on any face. Every sample of a collapsed axis is on a face.
  bool is_boundary(std::size_t idx) const;
  std::size_t boundary_count() const;

  bool contains(const Point3& x) const;
  /// True when every axis has at least two samples (required by the stencil).
  bool supports_diffusion() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  Point3 extent_;
  std::array<std::size_t, 3> counts_;
  Point3 spacing_;
};

/// One scalar per lattice sample, x1 fastest.
struct Field {
  Grid grid;
  std::vector<double> values;

  Field() = default;
  Field(Grid g, double constant) : grid(g), values(g.size(), constant) {}
  Field(Grid g, std::vector<double> v);

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  friend bool operator==(const Field&, const Field&) = default;
};

/// Full model state at one time level: cell fields plus uniform cytokines.
struct SimulationState {
  double t = 0.0;  // days
  Field y1;
  Field y2;
  Field y3;
  double y4 = 0.0;
  double y5 = 0.0;
  double y6 = 0.0;
  double y7 = 0.0;

  const Grid& grid() const { return y1.grid; }
  StatePoint at(std::size_t idx) const {
    return {y1[idx], y2[idx], y3[idx], y4, y5, y6, y7};
  }
  /// All three fields share one grid and every value is finite.
  bool is_valid() const;
  /// Smallest of all stored concentrations.
  double min_value() const;

  friend bool operator==(const SimulationState&, const SimulationState&) = default;
};

/// Spatially constant state, cytokines set from the arguments.
SimulationState uniform_state(const Grid& grid, const StatePoint& values, double t = 0.0);

/// (1/|Omega|) * integral of f, as the arithmetic mean of the samples.
double average_field(const Field& f);

/// Sets every boundary sample of y1 to `y1_boundary`; other fields untouched.
SimulationState apply_boundary(SimulationState state, double y1_boundary);
void apply_boundary_in_place(SimulationState& state, double y1_boundary);

/// 7-point centred second difference with mirror (no-flux) ghosts,
/// f[-1] = f[1] and f[n] = f[n-2], on every face. Throws DomainError when an
/// axis has fewer than 2 samples.
Field laplacian(const Field& f);

/// Trilinear interpolation at `x`; collapsed axes are constant.
/// Throws ValidationError when x lies outside the domain.
double interpolate(const Field& f, const Point3& x);

/// Interpolated seven-component state at `x`.
StatePoint probe(const SimulationState& state, const Point3& x);

}  // namespace immunesim
