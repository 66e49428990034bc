#pragma once

#include <vector>

#include "hjhom/bump.hpp"
#include "hjhom/lattice.hpp"
#include "hjhom/vec3.hpp"

namespace hjhom {

enum class GameKind { Example2D, Example3D };

// x-dependent data entering the two-dimensional running cost / transition:
// big_phi = phi(x2) + phi(x2 + 1/2), delta_phi = phi(x2) - phi(x2 + 1/2).
struct Spatial2D {
  double big_phi;
  double delta_phi;
};

// Likewise in three dimensions, with the vector bump field.
struct Spatial3D {
  double big_phi;
  Vec3 delta_phi;
};

// One of the paper-style differential games: compact action sets A (closed
// ball) and B (box / segment), bounded running cost R, Caratheodory
// transition f and Lipschitz initial data u0 = min(|x1|, 1).
struct GameSpec {
  GameKind kind;
  int dim;
  double action_radius;  // A = closed ball of this radius
  Vec3 b_lo, b_hi;       // B = per-axis box; unused axes pinned to 0
  BumpProfile profile;

  double running_cost(const Vec3& x, const Vec3& a, const Vec3& b) const;
  Vec3 transition(const Vec3& x, const Vec3& a, const Vec3& b) const;
  double initial_data(const Vec3& x) const;

  Spatial2D spatial_2d(double x2) const;
  Spatial3D spatial_3d(const Vec3& x) const;

  // Speed bound for |f| over A x B x R^d.
  double speed_bound() const;
};

GameSpec make_game_2d(const BumpProfile& profile);
GameSpec make_game_3d(const BumpProfile& profile);

// Closed-form Hamiltonians (production path; the discretized min-max below
// is a test oracle only).
double hamiltonian_closed_form_2d(const Vec3& x, const Vec3& p,
                                  const BumpProfile& profile);
double hamiltonian_closed_form_3d(const Vec3& x, const Vec3& p,
                                  const BumpProfile& profile);
double hamiltonian(const GameSpec& spec, const Vec3& x, const Vec3& p);

enum class HamiltonianOrder { Upper, Lower };

struct OracleResult {
  double upper;  // -min_a max_b (R + p.f)
  double lower;  // -max_b min_a (R + p.f)
};

// Brute-force evaluation of both orderings of R + p.f over a uniform
// discretization of A x B with roughly `res` points per action dimension
// (polar / spherical grid on the ball, per-coordinate grid on the box).
OracleResult hamiltonian_minmax_both(const GameSpec& spec, const Vec3& x,
                                     const Vec3& p, int res);
double hamiltonian_minmax_oracle(const GameSpec& spec, const Vec3& x,
                                 const Vec3& p, int res,
                                 HamiltonianOrder order);

// For each radius r, the minimum of H(x, p) over sampled x in the unit cell
// and sampled |p| = r.  Callers assert monotone divergence.
std::vector<double> coercivity_probe(const GameSpec& spec,
                                     const std::vector<double>& radii);

}  // namespace hjhom
