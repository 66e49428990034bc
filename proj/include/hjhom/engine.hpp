#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hjhom/game.hpp"
#include "hjhom/policy.hpp"
#include "hjhom/vec3.hpp"

namespace hjhom {

struct TrajectorySample {
  double t;
  Vec3 x, a, b;
  double running;  // accumulated running cost at time t
};

struct PhaseRecord {
  int mode;
  double t_begin;
  double t_end;
  double cost;  // running cost accrued during the phase
};

// Measures of the diagnostic time sets along a 2D trajectory: E collects
// times with large idle running cost, U+ / U- the remaining times where II
// can push in the +e1 / -e1 direction.
struct TrajectoryDiagnostics {
  double measure_E = 0.0;
  double measure_U_plus = 0.0;
  double measure_U_minus = 0.0;
  int switch_count = 0;
};

struct Trajectory {
  double eps = 1.0;
  double dt = 0.0;
  double horizon = 1.0;
  double running_cost = 0.0;
  double terminal_cost = 0.0;
  Vec3 final_state;
  double max_speed = 0.0;  // max |sigma_dot| over accepted steps
  double min_x1 = 0.0, max_x1 = 0.0;
  double min_x2 = 0.0, max_x2 = 0.0;
  int switch_count = 0;
  std::vector<TrajectorySample> samples;
  std::vector<PhaseRecord> phases;
  std::optional<TrajectoryDiagnostics> stream_diagnostics;

  double total_cost() const { return running_cost + terminal_cost; }
};

struct IntegrateOptions {
  int record_stride = 0;      // 0 = no samples; k > 0 = every k-th step
  bool diagnostics = false;   // accumulate E / U+- measures while stepping
  double diag_threshold = 1.0;
  Vec3 start{0.0, 0.0, 0.0};
};

// Explicit midpoint integration of sigma_dot = f(sigma/eps, a, b) with the
// policies queried at every substep.  Policy hitting times are refined by
// bisection to dt * 1e-3; fixed-duration phases end on exact step
// boundaries.  Running cost accumulates by midpoint quadrature.
Trajectory integrate(const GameSpec& spec, double eps, PolicyI& policy_i,
                     PolicyII& policy_ii, double T, double dt,
                     const IntegrateOptions& options = {});

// Sampled measures of E, U+ and U- from a recorded trajectory.
TrajectoryDiagnostics diagnostics(const GameSpec& spec,
                                  const Trajectory& trajectory, double eps,
                                  double threshold = 1.0);

// One-sided empirical value brackets over finite families (not true
// sup/inf): the upper estimate plays the highway strategy against every
// member of the II family and takes the worst outcome; the lower estimate
// plays every member of the I family against the adversarial control and
// takes the best.
struct ValueEstimate {
  double value = 0.0;
  std::string argopt;                 // family member realizing the value
  std::vector<double> member_values;  // in family order
};

ValueEstimate upper_value_estimate(const GameSpec& spec2d, double eps,
                                   const std::vector<PolicyIIFactory>& family,
                                   double T, double dt);
ValueEstimate lower_value_estimate(const GameSpec& spec2d, double eps,
                                   const std::vector<PolicyIFactory>& family,
                                   double T, double dt);

// Effective-Hamiltonian estimate from the 3D corrector game: plays the
// axis-aligned corrector strategy against the worst member of the II family
// and reports the negated slope of an affine fit of
// running(t) + p . sigma(t) over t in [T/2, T] (the fit cancels the O(1)
// transient of the approach phase).
struct CorrectorGameResult {
  double hbar = 0.0;
  double fit_residual = 0.0;  // RMS residual of the affine fit
  std::string worst_member;
};

CorrectorGameResult corrector_value_game(const GameSpec& spec3d,
                                         const Vec3& p, double T, double dt,
                                         std::uint64_t seed = 1);

// Least-squares affine fit y ~ c0 + c1 t; returns {c0, c1, rms_residual}.
struct AffineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double rms_residual = 0.0;
};
AffineFit affine_fit(const std::vector<double>& t,
                     const std::vector<double>& y);

// Trajectory CSV: header t,x1..xd,a1..ad,b1..bd,running_cost, one row per
// recorded sample, values printed with 17 significant digits.
void write_trajectory_csv(std::ostream& out, const GameSpec& spec,
                          const Trajectory& trajectory);

}  // namespace hjhom
