#include "hjhom/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace hjhom {

ScalarField::ScalarField(const Grid& g) : grid(g) {
  std::size_t total = 1;
  for (int k = 0; k < 3; ++k) total *= pad(k);
  data.assign(total, 0.0);
}

void ScalarField::fill(const std::function<double(const Vec3&)>& f) {
  int mm = m();
  int nj = grid.dim >= 2 ? mm : 1;
  int nk = grid.dim >= 3 ? mm : 1;
  for (int i = 0; i < mm; ++i)
    for (int j = 0; j < nj; ++j)
      for (int k = 0; k < nk; ++k) at(i, j, k) = f(grid.point({i, j, k}));
}

void ScalarField::fill_ghosts() {
  // Face ghosts only; corner ghosts are never read by the stencil.
  int mm = m();
  auto lin = [&](const std::array<int, 3>& g) {
    std::size_t l = 0;
    for (int a = 0; a < 3; ++a) {
      std::size_t off = a < grid.dim ? 1 : 0;
      l = l * pad(a) + (static_cast<std::size_t>(g[a]) + off);
    }
    return l;
  };
  for (int axis = 0; axis < grid.dim; ++axis) {
    int other[2] = {-1, -1};
    int w = 0;
    for (int a = 0; a < grid.dim; ++a)
      if (a != axis) other[w++] = a;
    int nu = w > 0 ? mm : 1;
    int nv = w > 1 ? mm : 1;
    for (int u = 0; u < nu; ++u) {
      for (int v = 0; v < nv; ++v) {
        std::array<int, 3> idx{0, 0, 0};
        if (w > 0) idx[other[0]] = u;
        if (w > 1) idx[other[1]] = v;
        std::array<int, 3> lo = idx, hi = idx;
        lo[axis] = -1;
        hi[axis] = mm;
        if (grid.periodic) {
          std::array<int, 3> s = idx;
          s[axis] = mm - 1;
          data[lin(lo)] = at(s[0], s[1], s[2]);
          s[axis] = 0;
          data[lin(hi)] = at(s[0], s[1], s[2]);
        } else {
          // Constant extrapolation: copying the edge value keeps the update
          // monotone at the rim (a linearly extrapolated ghost cancels the
          // normal dissipation there and destabilizes boundary layers).
          std::array<int, 3> s = idx;
          s[axis] = 0;
          data[lin(lo)] = at(s[0], s[1], s[2]);
          s[axis] = mm - 1;
          data[lin(hi)] = at(s[0], s[1], s[2]);
        }
      }
    }
  }
}

double ScalarField::min_value() const {
  double best = std::numeric_limits<double>::infinity();
  int mm = m();
  int nj = grid.dim >= 2 ? mm : 1;
  int nk = grid.dim >= 3 ? mm : 1;
  for (int i = 0; i < mm; ++i)
    for (int j = 0; j < nj; ++j)
      for (int k = 0; k < nk; ++k) best = std::min(best, at(i, j, k));
  return best;
}

double ScalarField::max_value() const {
  double best = -std::numeric_limits<double>::infinity();
  int mm = m();
  int nj = grid.dim >= 2 ? mm : 1;
  int nk = grid.dim >= 3 ? mm : 1;
  for (int i = 0; i < mm; ++i)
    for (int j = 0; j < nj; ++j)
      for (int k = 0; k < nk; ++k) best = std::max(best, at(i, j, k));
  return best;
}

double ScalarField::lipschitz_estimate() const {
  double h = grid.spacing();
  double best = 0.0;
  int mm = m();
  int nj = grid.dim >= 2 ? mm : 1;
  int nk = grid.dim >= 3 ? mm : 1;
  for (int i = 0; i < mm; ++i)
    for (int j = 0; j < nj; ++j)
      for (int k = 0; k < nk; ++k) {
        double c = at(i, j, k);
        if (i + 1 < mm) best = std::max(best, std::fabs(at(i + 1, j, k) - c));
        if (grid.dim >= 2 && j + 1 < nj)
          best = std::max(best, std::fabs(at(i, j + 1, k) - c));
        if (grid.dim >= 3 && k + 1 < nk)
          best = std::max(best, std::fabs(at(i, j, k + 1) - c));
      }
  return best / h;
}

double ScalarField::interpolate(const Vec3& x) const {
  double h = grid.spacing();
  int mm = m();
  std::array<int, 3> base{0, 0, 0};
  std::array<double, 3> frac{0.0, 0.0, 0.0};
  for (int k = 0; k < grid.dim; ++k) {
    double s = (x[k] - grid.coord(0)) / h;
    int b = static_cast<int>(std::floor(s));
    b = std::clamp(b, 0, mm - 2);
    base[k] = b;
    frac[k] = std::clamp(s - b, 0.0, 1.0);
  }
  double acc = 0.0;
  int corners = 1 << grid.dim;
  for (int c = 0; c < corners; ++c) {
    double wgt = 1.0;
    std::array<int, 3> idx = base;
    for (int k = 0; k < grid.dim; ++k) {
      if (c & (1 << k)) {
        idx[k] += 1;
        wgt *= frac[k];
      } else {
        wgt *= 1.0 - frac[k];
      }
    }
    acc += wgt * at(idx[0], idx[1], idx[2]);
  }
  return acc;
}

void write_field_csv(std::ostream& out, const ScalarField& field) {
  const Grid& g = field.grid;
  out << "#d=" << g.dim << ",n=" << g.n << ",L=" << g.half_width
      << ",time=" << field.time << ",periodic=" << (g.periodic ? 1 : 0)
      << "\n";
  for (int k = 1; k <= g.dim; ++k) out << "i" << k << ",";
  out << "value\n";
  char buf[32];
  int mm = field.m();
  int nj = g.dim >= 2 ? mm : 1;
  int nk = g.dim >= 3 ? mm : 1;
  for (int i = 0; i < mm; ++i)
    for (int j = 0; j < nj; ++j)
      for (int k = 0; k < nk; ++k) {
        out << i;
        if (g.dim >= 2) out << ',' << j;
        if (g.dim >= 3) out << ',' << k;
        std::snprintf(buf, sizeof buf, "%.17g", field.at(i, j, k));
        out << ',' << buf << '\n';
      }
}

void write_field_bin(std::ostream& out, const ScalarField& field) {
  std::uint32_t d = static_cast<std::uint32_t>(field.grid.dim);
  std::uint32_t n = static_cast<std::uint32_t>(field.grid.n);
  double L = field.grid.half_width;
  double time = field.time;
  out.write(reinterpret_cast<const char*>(&d), sizeof d);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&L), sizeof L);
  out.write(reinterpret_cast<const char*>(&time), sizeof time);
  int mm = field.m();
  int nj = field.grid.dim >= 2 ? mm : 1;
  int nk = field.grid.dim >= 3 ? mm : 1;
  for (int i = 0; i < mm; ++i)
    for (int j = 0; j < nj; ++j)
      for (int k = 0; k < nk; ++k) {
        double v = field.at(i, j, k);
        out.write(reinterpret_cast<const char*>(&v), sizeof v);
      }
}

ScalarField read_field_bin(std::istream& in) {
  std::uint32_t d = 0, n = 0;
  double L = 0.0, time = 0.0;
  in.read(reinterpret_cast<char*>(&d), sizeof d);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&L), sizeof L);
  in.read(reinterpret_cast<char*>(&time), sizeof time);
  if (!in) throw std::runtime_error("read_field_bin: truncated header");
  Grid g = Grid::box(static_cast<int>(d), L, static_cast<int>(n));
  ScalarField f(g);
  f.time = time;
  int mm = f.m();
  int nj = g.dim >= 2 ? mm : 1;
  int nk = g.dim >= 3 ? mm : 1;
  for (int i = 0; i < mm; ++i)
    for (int j = 0; j < nj; ++j)
      for (int k = 0; k < nk; ++k) {
        double v = 0.0;
        in.read(reinterpret_cast<char*>(&v), sizeof v);
        f.at(i, j, k) = v;
      }
  if (!in) throw std::runtime_error("read_field_bin: truncated payload");
  return f;
}

}  // namespace hjhom
