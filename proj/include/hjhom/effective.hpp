#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hjhom/vec3.hpp"

namespace hjhom {

// h(gamma) = max{0, 400|gamma| - 200}: the effective Hamiltonian of the 3D
// example along a coordinate axis.  Even, piecewise linear, convex, with
// kinks at |gamma| = 1/2.
inline double h_formula(double gamma) {
  return std::max(0.0, 400.0 * std::fabs(gamma) - 200.0);
}

// Full 3D effective Hamiltonian: max_i h(p_i).
inline double hbar_formula_3d(const Vec3& p) {
  return std::max({h_formula(p.x), h_formula(p.y), h_formula(p.z)});
}

enum class HbarProvenance { Formula, Game, Pde };

// Effective Hamiltonian tabulated on a symmetric momentum box [-P, P]^d
// with multilinear interpolation between nodes.
struct EffectiveHTable {
  int dim = 3;
  double box = 3.0;     // half-width P
  int n_per_axis = 25;  // nodes per axis; spacing 1/4 puts the h-kinks
                        // at |gamma| = 1/2 on nodes
  std::vector<double> values;
  HbarProvenance provenance = HbarProvenance::Formula;
  double residual = 0.0;  // worst fit residual for numeric tables

  static EffectiveHTable from_function(
      int dim, double box, int n_per_axis,
      const std::function<double(const Vec3&)>& f, HbarProvenance prov,
      double residual = 0.0);

  double node(const std::vector<int>& idx) const;
  Vec3 node_momentum(const std::vector<int>& idx) const;
  double eval(const Vec3& p) const;  // refuses momenta outside the box
  // Clamps the momentum into the box; callers must watch for overflow
  // themselves (the solver aborts when its monitor sees one).
  double eval_clamped(const Vec3& p) const;
  double min_value() const;
  double max_value() const;

  void write_csv(std::ostream& out) const;
};

// Worst midpoint-convexity violation max over sampled pairs (p, q) of
// H((p+q)/2) - (H(p) + H(q))/2; a result <= 0 certifies midpoint convexity
// on the sample.  Momenta are drawn from a fine dyadic lattice so the
// midpoints are exact in floating point.
double convexity_check(const std::function<double(const Vec3&)>& hbar,
                       int dim, double box, int samples, std::uint64_t seed);

// Same audit over table nodes (pairs whose midpoint is itself a node).
double convexity_check(const EffectiveHTable& table, int sample_pairs,
                       std::uint64_t seed);

// Worst absolute gap |estimate(p) - max_i estimate(p_i e_i)| over samples.
double decomposition_check(
    const std::vector<Vec3>& p_samples,
    const std::function<double(const Vec3&)>& estimate);

enum class HbarMethod { Formula, Game, Pde };

struct HbarEstimate {
  double value = 0.0;
  double residual = 0.0;  // affine-fit residual (error proxy)
};

// Effective-Hamiltonian estimate extracted from the long-time corrector:
// by differential game (paper profile) or by the periodic PDE solver
// (experiments profile); the formula method returns max_i h(p_i) exactly.
HbarEstimate hbar_estimate(const Vec3& p, HbarMethod method, double T,
                           int resolution);

}  // namespace hjhom
