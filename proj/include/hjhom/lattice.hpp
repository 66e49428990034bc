#pragma once

#include <array>

#include "hjhom/bump.hpp"
#include "hjhom/vec3.hpp"

namespace hjhom {

// The three-dimensional highway lattice: the lines
//
//   l1 = R x {0} x {0},   l2 = {0} x R x {1/4},   l3 = {1/4} x {1/4} x R,
//
// together with all their Z^3 translates.  Shifting the whole family by
// (1/2, 1/2, 1/2) produces a second, disjoint family; distinct lines of the
// union stay at least 1/4 apart.
struct HighwayLattice {
  static constexpr Vec3 half_shift{0.5, 0.5, 0.5};

  // Unit direction of line i (1-based).
  static Vec3 direction(int i) {
    switch (i) {
      case 1: return {1.0, 0.0, 0.0};
      case 2: return {0.0, 1.0, 0.0};
      default: return {0.0, 0.0, 1.0};
    }
  }

  // A representative point on line i.
  static Vec3 base_point(int i) {
    switch (i) {
      case 1: return {0.0, 0.0, 0.0};
      case 2: return {0.0, 0.0, 0.25};
      default: return {0.25, 0.25, 0.0};
    }
  }
};

// Euclidean distance from x to l_i + Z^3, computed by reducing the two
// coordinates transverse to the line modulo 1.  (Translate enumeration is
// kept as a test oracle only.)
inline double dist_to_line_lattice(const Vec3& x, int i) {
  double a, b;
  switch (i) {
    case 1:  // transverse coordinates (x2, x3)
      a = wrap_half(x.y);
      b = wrap_half(x.z);
      break;
    case 2:  // transverse coordinates (x1, x3 - 1/4)
      a = wrap_half(x.x);
      b = wrap_half(x.z - 0.25);
      break;
    default:  // transverse coordinates (x1 - 1/4, x2 - 1/4)
      a = wrap_half(x.x - 0.25);
      b = wrap_half(x.y - 0.25);
      break;
  }
  return std::sqrt(a * a + b * b);
}

// phi_i(x) = bump(dist(x, l_i + Z^3)) for i = 1..3.
inline Vec3 phi_vec_3d(const Vec3& x, const BumpProfile& profile) {
  auto of_dist = [&](double d) {
    double u = d / profile.width;
    double u2 = u * u;
    if (u2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u2));
  };
  return {of_dist(dist_to_line_lattice(x, 1)),
          of_dist(dist_to_line_lattice(x, 2)),
          of_dist(dist_to_line_lattice(x, 3))};
}

// phi = phi_1 + phi_2 + phi_3.
inline double phi_total_3d(const Vec3& x, const BumpProfile& profile) {
  Vec3 v = phi_vec_3d(x, profile);
  return v.x + v.y + v.z;
}

}  // namespace hjhom
