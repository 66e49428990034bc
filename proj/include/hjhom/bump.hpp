#pragma once

#include <cmath>

#include "hjhom/errors.hpp"

namespace hjhom {

// Wrap a real number to the fundamental cell [-1/2, 1/2).
inline double wrap_half(double x) {
  double r = x - std::floor(x + 0.5);
  if (r >= 0.5) r -= 1.0;  // floor rounding at the seam
  return r;
}

// Z-periodic C^infinity cutoff with plateau value 1 at the integers and
// support of half-width w:
//
//   phi(x) = exp(1 - 1/(1 - (x/w)^2))   for |x| < w (after wrapping),
//   phi(x) = 0                          otherwise.
//
// "paper" fixes w = 1/100; the PDE experiments use wider profiles so the
// grids can resolve the cell features.
struct BumpProfile {
  double width = 0.01;

  explicit BumpProfile(double w = 0.01) : width(w) {
    if (!(w > 0.0 && w < 0.5))
      throw PreconditionError("BumpProfile: width must lie in (0, 1/2)");
  }

  double operator()(double x) const {
    double r = wrap_half(x);
    double u = r / width;
    double u2 = u * u;
    if (u2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u2));
  }

  // Upper bound for |phi'|; the true maximum is about 2.1706/w.
  double derivative_bound() const { return 2.2 / width; }
};

inline double bump_eval(double x, const BumpProfile& profile) {
  return profile(x);
}

inline BumpProfile paper_profile() { return BumpProfile(0.01); }
inline BumpProfile experiments_profile_2d() { return BumpProfile(0.125); }
inline BumpProfile experiments_profile_3d() { return BumpProfile(0.1); }

}  // namespace hjhom
