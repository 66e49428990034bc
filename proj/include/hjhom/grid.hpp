#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hjhom/errors.hpp"
#include "hjhom/vec3.hpp"

namespace hjhom {

// Uniform grid for the finite-difference solvers.  Non-periodic grids cover
// [-L, L]^d with n+1 nodes per axis (spacing 2L/n) plus a one-cell ghost
// layer filled by constant extrapolation; periodic grids cover the unit
// torus [0,1)^d with n nodes per axis (spacing 1/n) and wraparound ghosts.
struct Grid {
  int dim = 1;
  double half_width = 1.0;  // L (ignored for periodic grids)
  int n = 16;
  bool periodic = false;

  double spacing() const {
    return periodic ? 1.0 / n : 2.0 * half_width / n;
  }
  int nodes_per_axis() const { return periodic ? n : n + 1; }
  double coord(int j) const {
    return periodic ? j * spacing() : -half_width + j * spacing();
  }
  Vec3 point(const std::array<int, 3>& idx) const {
    Vec3 x{0.0, 0.0, 0.0};
    for (int k = 0; k < dim; ++k) x[k] = coord(idx[k]);
    return x;
  }
  std::size_t interior_count() const {
    std::size_t c = 1;
    for (int k = 0; k < dim; ++k) c *= static_cast<std::size_t>(nodes_per_axis());
    return c;
  }

  static Grid box(int dim, double half_width, int n) {
    if (dim < 1 || dim > 3 || n < 2 || !(half_width > 0.0))
      throw PreconditionError("Grid::box: bad parameters");
    return Grid{dim, half_width, n, false};
  }
  static Grid unit_torus(int dim, int n) {
    if (dim < 1 || dim > 3 || n < 2)
      throw PreconditionError("Grid::unit_torus: bad parameters");
    return Grid{dim, 0.5, n, true};
  }
};

// Grid-sampled scalar field with ghost padding.  Interior nodes are indexed
// 0..m-1 per axis; the padded layout keeps the last axis contiguous.
struct ScalarField {
  Grid grid;
  double time = 0.0;
  std::vector<double> data;

  explicit ScalarField(const Grid& g);
  ScalarField() = default;

  int m() const { return grid.nodes_per_axis(); }
  std::size_t pad(int k) const {
    return k < grid.dim ? static_cast<std::size_t>(m()) + 2 : 1;
  }
  std::size_t stride(int k) const {
    std::size_t s = 1;
    for (int j = k + 1; j < 3; ++j) s *= pad(j);
    return s;
  }
  std::size_t index(int i, int j = 0, int k = 0) const {
    std::array<int, 3> idx{i, j, k};
    std::size_t lin = 0;
    for (int a = 0; a < 3; ++a) {
      std::size_t off = a < grid.dim ? 1 : 0;
      lin = lin * pad(a) + (static_cast<std::size_t>(idx[a]) + off);
    }
    return lin;
  }
  double& at(int i, int j = 0, int k = 0) { return data[index(i, j, k)]; }
  double at(int i, int j = 0, int k = 0) const { return data[index(i, j, k)]; }

  void fill(const std::function<double(const Vec3&)>& f);
  void fill_ghosts();

  double min_value() const;
  double max_value() const;
  // Max over neighbor pairs of |du| / h (Lipschitz audit).
  double lipschitz_estimate() const;
  // Multilinear interpolation at a physical point.
  double interpolate(const Vec3& x) const;
};

// Flat CSV export: one row per interior node, index coordinates then value.
void write_field_csv(std::ostream& out, const ScalarField& field);

// Binary dump: header (u32 dim, u32 n, f64 L, f64 time), then the interior
// values row-major as little-endian 64-bit reals.
void write_field_bin(std::ostream& out, const ScalarField& field);
ScalarField read_field_bin(std::istream& in);

}  // namespace hjhom
