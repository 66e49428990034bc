#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "hjhom/effective.hpp"
#include "hjhom/errors.hpp"
#include "hjhom/game.hpp"
#include "hjhom/grid.hpp"

namespace hjhom {

// Per-axis bounds on |dH/dp_i| over the working momentum box; the scheme's
// numerical dissipation coefficients.
struct DissipationBounds {
  int dim = 1;
  Vec3 theta{0.0, 0.0, 0.0};

  double sum() const {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += theta[k];
    return s;
  }
};

struct StepMonitor {
  double max_abs_diff = 0.0;  // max |one-sided difference| seen this step
  double sum_new = 0.0;       // sum of updated interior values
  bool nonfinite = false;
};

inline double cfl_limit(const Grid& grid, const DissipationBounds& th) {
  return 0.4 * grid.spacing() / std::max(th.sum(), 1e-300);
}

// One forward-Euler global Lax-Friedrichs step:
//
//   u_new = u - dt * [ H(x, (D- u + D+ u)/2) - sum_i theta_i (D+_i u - D-_i u)/2 ]
//
// H is a functor double(const std::array<int,3>& idx, const Vec3& x,
// const Vec3& p); ghost cells must have been filled by the caller.
template <int D, class HFn>
void lf_step_sweep(const ScalarField& u, ScalarField& out, const HFn& H,
                   const Vec3& theta, double dt, StepMonitor* mon) {
  const int mm = u.m();
  const double inv_h = 1.0 / u.grid.spacing();
  const std::size_t s0 = u.stride(0);
  const std::size_t s1 = u.stride(1);
  const double* src = u.data.data();
  double* dst = out.data.data();

  double global_max_diff = 0.0;
  double global_sum = 0.0;
  bool bad = false;

#pragma omp parallel reduction(max : global_max_diff) \
    reduction(+ : global_sum) reduction(|| : bad)
  {
#pragma omp for schedule(static)
    for (int i = 0; i < mm; ++i) {
      const int nj = D >= 2 ? mm : 1;
      const int nk = D >= 3 ? mm : 1;
      for (int j = 0; j < nj; ++j) {
        std::size_t row;
        if constexpr (D == 1)
          row = static_cast<std::size_t>(i + 1);
        else if constexpr (D == 2)
          row = static_cast<std::size_t>(i + 1) * s0 +
                static_cast<std::size_t>(j + 1);
        else
          row = static_cast<std::size_t>(i + 1) * s0 +
                static_cast<std::size_t>(j + 1) * s1 + 1;
        for (int k = 0; k < nk; ++k) {
          std::size_t c = D == 3 ? row + static_cast<std::size_t>(k) : row;
          double uc = src[c];
          Vec3 pbar{0.0, 0.0, 0.0};
          double diss = 0.0;
          double local_max = 0.0;

          {
            double dm = (uc - src[c - s0]) * inv_h;
            double dp = (src[c + s0] - uc) * inv_h;
            pbar.x = 0.5 * (dm + dp);
            diss += theta.x * 0.5 * (dp - dm);
            local_max = std::max(local_max, std::max(std::fabs(dm), std::fabs(dp)));
          }
          if constexpr (D >= 2) {
            double dm = (uc - src[c - s1]) * inv_h;
            double dp = (src[c + s1] - uc) * inv_h;
            pbar.y = 0.5 * (dm + dp);
            diss += theta.y * 0.5 * (dp - dm);
            local_max = std::max(local_max, std::max(std::fabs(dm), std::fabs(dp)));
          }
          if constexpr (D >= 3) {
            double dm = (uc - src[c - 1]) * inv_h;
            double dp = (src[c + 1] - uc) * inv_h;
            pbar.z = 0.5 * (dm + dp);
            diss += theta.z * 0.5 * (dp - dm);
            local_max = std::max(local_max, std::max(std::fabs(dm), std::fabs(dp)));
          }

          std::array<int, 3> idx{i, D >= 2 ? j : 0, D >= 3 ? k : 0};
          double hval = H(idx, u.grid.point(idx), pbar);
          double unew = uc - dt * (hval - diss);
          dst[c] = unew;
          global_max_diff = std::max(global_max_diff, local_max);
          global_sum += unew;
          bad = bad || !std::isfinite(unew);
        }
      }
    }
  }

  if (mon) {
    mon->max_abs_diff = global_max_diff;
    mon->sum_new = global_sum;
    mon->nonfinite = bad;
  } else if (bad) {
    throw std::runtime_error("lf_step: non-finite value produced");
  }
}

template <class HFn>
void lf_step_into(ScalarField& u, ScalarField& out, const HFn& H,
                  const DissipationBounds& th, double dt, StepMonitor* mon) {
  if (!(dt > 0.0) || dt > cfl_limit(u.grid, th) * (1.0 + 1e-12))
    throw PreconditionError("lf_step: CFL violated (dt > 0.4 h / sum theta)");
  u.fill_ghosts();
  out.grid = u.grid;
  if (out.data.size() != u.data.size()) out.data.assign(u.data.size(), 0.0);
  switch (u.grid.dim) {
    case 1: lf_step_sweep<1>(u, out, H, th.theta, dt, mon); break;
    case 2: lf_step_sweep<2>(u, out, H, th.theta, dt, mon); break;
    default: lf_step_sweep<3>(u, out, H, th.theta, dt, mon); break;
  }
  out.time = u.time + dt;
  if (mon && mon->nonfinite)
    throw std::runtime_error("lf_step: non-finite value produced");
}

// Convenience wrapper taking H as a plain (x, p) callable.
ScalarField lf_step(const ScalarField& field,
                    const std::function<double(const Vec3&, const Vec3&)>& H,
                    const DissipationBounds& th, double dt);

// theta_i = 1.1 * max over sampled (x, p) of centered-difference |dH/dp_i|,
// clamped below at 1e-6.
DissipationBounds estimate_dissipation(
    const std::function<double(const Vec3&, const Vec3&)>& H, int dim,
    const Vec3& p_lo, const Vec3& p_hi, const std::vector<Vec3>& x_samples,
    int p_res = 9);

struct MicroSolveResult {
  ScalarField field;
  double value_at_origin = 0.0;
  DissipationBounds theta;
  double dt = 0.0;
  int steps = 0;
  double max_gradient = 0.0;  // largest one-sided difference over the run
};

// Forward-Euler LF evolution of the 2D microscopic problem at scale eps on
// [-L, L]^2 with u0 = min(|x1|, 1).  Refuses grids that cannot resolve the
// cell bump (h <= eps * w / 4) or truncate the propagation cone
// (L >= 1 + V T).  The working momentum box must cover the value function's
// vertical gradients, which equalize near the desert-escape cost scale
// (|Du| saturates around 90); the run aborts if |Du| leaves the box.
MicroSolveResult solve_micro_2d(const BumpProfile& profile, double eps,
                                double T, int n, double half_width,
                                double p_box = 120.0);

// Same evolution with an x-independent Hamiltonian (calibration runs and
// the effective problem).
MicroSolveResult solve_xindep(int dim,
                              const std::function<double(const Vec3&)>& H,
                              const std::function<double(const Vec3&)>& u0,
                              double T, int n, double half_width,
                              double p_box = 4.0);

struct CorrectorSolveResult {
  double hbar = 0.0;
  double fit_residual = 0.0;
  DissipationBounds theta;
  int steps = 0;
  double max_gradient = 0.0;
};

// Periodic corrector problem w_t + H(x, p + Dw) = 0, w(0) = 0 on the unit
// torus; returns the slope of the affine fit of -mean(w(t)) over [T/2, T].
CorrectorSolveResult solve_corrector_periodic(const GameSpec& spec,
                                              const Vec3& p, double T, int n);

// Effective problem with the tabulated x-independent Hamiltonian.  Aborts
// with a diagnostic if the working momentum box is exceeded during the run.
MicroSolveResult solve_effective(const EffectiveHTable& table,
                                 const std::function<double(const Vec3&)>& u0,
                                 double T, int n, double half_width);

}  // namespace hjhom
