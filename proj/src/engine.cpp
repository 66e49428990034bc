#include "hjhom/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "hjhom/errors.hpp"

namespace hjhom {

namespace {

struct SubStep {
  Vec3 state_new;
  Vec3 mid;
  Vec3 a0, b0;     // actions at the step start
  double speed;    // |sigma_dot| used for the update
  double dcost;    // midpoint quadrature of the running cost
};

// One explicit midpoint substep of size s from (t0, x0).
SubStep substep(const GameSpec& spec, double eps, PolicyI& pi, PolicyII& pii,
                double t0, const Vec3& x0, double s) {
  SubStep r;
  r.a0 = pi.act(t0, x0);
  r.b0 = pii.act(t0, x0);
  Vec3 k1 = spec.transition((1.0 / eps) * x0, r.a0, r.b0);
  Vec3 mid = x0 + (0.5 * s) * k1;
  double tm = t0 + 0.5 * s;
  Vec3 am = pi.act(tm, mid);
  Vec3 bm = pii.act(tm, mid);
  Vec3 micro_mid = (1.0 / eps) * mid;
  Vec3 k2 = spec.transition(micro_mid, am, bm);
  r.state_new = x0 + s * k2;
  r.mid = mid;
  r.speed = norm(k2);
  r.dcost = s * spec.running_cost(micro_mid, am, bm);
  return r;
}

}  // namespace

Trajectory integrate(const GameSpec& spec, double eps, PolicyI& policy_i,
                     PolicyII& policy_ii, double T, double dt,
                     const IntegrateOptions& options) {
  if (!(eps > 0.0)) throw PreconditionError("integrate: eps must be positive");
  if (!(dt > 0.0 && dt <= T))
    throw PreconditionError("integrate: need 0 < dt <= T");
  // The step must resolve the eps-cell bump: crossing the half-width
  // eps * w at vertical speed 2 takes time eps * w / 2.
  if (dt > eps * spec.profile.width / 2.0 * (1.0 + 1e-12))
    throw PreconditionError(
        "integrate: dt must be at most eps * width / 2 to resolve the cell "
        "features");

  Trajectory traj;
  traj.eps = eps;
  traj.dt = dt;
  traj.horizon = T;

  double t = 0.0;
  Vec3 sigma = options.start;
  traj.min_x1 = traj.max_x1 = sigma.x;
  traj.min_x2 = traj.max_x2 = sigma.y;

  TrajectoryDiagnostics diag;
  const double bisect_tol = dt * 1e-3;

  int phase_mode = policy_i.mode();
  double phase_begin = 0.0;
  double phase_cost = 0.0;
  auto close_phase = [&](double t_end) {
    traj.phases.push_back({phase_mode, phase_begin, t_end, phase_cost});
    phase_mode = policy_i.mode();
    phase_begin = t_end;
    phase_cost = 0.0;
  };

  auto fire_event = [&](double t_ev, Vec3& state) {
    Vec3 before = state;
    policy_i.on_event(t_ev, state);
    if (norm(state - before) > PolicyI::snap_tolerance * (1.0 + 1e-9))
      throw std::runtime_error("integrate: policy snap exceeded tolerance");
    close_phase(t_ev);
  };

  long step_index = 0;
  auto record = [&](double ts, const Vec3& xs, const Vec3& as, const Vec3& bs,
                    bool force) {
    if (options.record_stride <= 0) return;
    if (!force && (step_index % options.record_stride) != 0) return;
    traj.samples.push_back({ts, xs, as, bs, traj.running_cost});
  };

  auto commit = [&](double s, const SubStep& st) {
    traj.running_cost += st.dcost;
    phase_cost += st.dcost;
    traj.max_speed = std::max(traj.max_speed, st.speed);
    sigma = st.state_new;
    traj.min_x1 = std::min(traj.min_x1, sigma.x);
    traj.max_x1 = std::max(traj.max_x1, sigma.x);
    traj.min_x2 = std::min(traj.min_x2, sigma.y);
    traj.max_x2 = std::max(traj.max_x2, sigma.y);
    if (!std::isfinite(sigma.x + sigma.y + sigma.z))
      throw std::runtime_error("integrate: non-finite state");
    if (options.diagnostics && spec.kind == GameKind::Example2D) {
      Spatial2D sp = spec.spatial_2d(st.mid.y / eps);
      if (100.0 * (1.0 - sp.big_phi) >= options.diag_threshold)
        diag.measure_E += s;
      else if (spec.profile(st.mid.y / eps) > 0.0)
        diag.measure_U_plus += s;
      else
        diag.measure_U_minus += s;
    }
  };

  {
    Vec3 a0 = policy_i.act(0.0, sigma);
    Vec3 b0 = policy_ii.act(0.0, sigma);
    record(0.0, sigma, a0, b0, true);
  }

  const double t_scale = std::max(1.0, T);
  while (t < T - 1e-15 * t_scale) {
    // Fire any event whose predicate already holds before stepping.
    int guard = 0;
    while (policy_i.hit(t, sigma)) {
      fire_event(t, sigma);
      if (++guard > 8)
        throw std::runtime_error("integrate: event loop did not settle");
    }

    double sched = policy_i.scheduled_event();
    if (sched <= t) {
      fire_event(t, sigma);
      continue;
    }

    bool clamp_T = false, clamp_sched = false;
    double s = dt;
    if (T - t <= s) {
      s = T - t;
      clamp_T = true;
    }
    if (sched - t <= s) {
      s = sched - t;
      clamp_sched = true;
      clamp_T = false;
    }

    SubStep st = substep(spec, eps, policy_i, policy_ii, t, sigma, s);

    if (policy_i.hit(t + s, st.state_new)) {
      // Refine the hitting time by bisection on the substep size.
      double lo = 0.0, hi = s;
      SubStep at_hi = st;
      while (hi - lo > bisect_tol) {
        double mid = 0.5 * (lo + hi);
        SubStep trial = substep(spec, eps, policy_i, policy_ii, t, sigma, mid);
        if (policy_i.hit(t + mid, trial.state_new)) {
          hi = mid;
          at_hi = trial;
        } else {
          lo = mid;
        }
      }
      commit(hi, at_hi);
      t += hi;
      record(t, sigma, at_hi.a0, at_hi.b0, true);
      fire_event(t, sigma);
      ++step_index;
      continue;
    }

    commit(s, st);
    if (clamp_sched)
      t = sched;
    else if (clamp_T)
      t = T;
    else
      t += s;
    ++step_index;
    record(t, sigma, st.a0, st.b0, false);

    if (clamp_sched) fire_event(t, sigma);
  }

  close_phase(T);
  traj.final_state = sigma;
  traj.terminal_cost = spec.initial_data(sigma);
  traj.switch_count = policy_i.switch_count();
  if (options.record_stride > 0 &&
      (traj.samples.empty() || traj.samples.back().t < T)) {
    Vec3 a = policy_i.act(T, sigma);
    Vec3 b = policy_ii.act(T, sigma);
    traj.samples.push_back({T, sigma, a, b, traj.running_cost});
  }
  if (options.diagnostics) {
    diag.switch_count = traj.switch_count;
    traj.stream_diagnostics = diag;
  }
  return traj;
}

TrajectoryDiagnostics diagnostics(const GameSpec& spec,
                                  const Trajectory& trajectory, double eps,
                                  double threshold) {
  if (spec.kind != GameKind::Example2D)
    throw PreconditionError("diagnostics: 2D trajectories only");
  if (trajectory.samples.size() < 2)
    throw PreconditionError("diagnostics: trajectory carries no samples");
  TrajectoryDiagnostics d;
  for (std::size_t i = 0; i + 1 < trajectory.samples.size(); ++i) {
    const auto& s = trajectory.samples[i];
    double w = trajectory.samples[i + 1].t - s.t;
    Spatial2D sp = spec.spatial_2d(s.x.y / eps);
    if (100.0 * (1.0 - sp.big_phi) >= threshold)
      d.measure_E += w;
    else if (spec.profile(s.x.y / eps) > 0.0)
      d.measure_U_plus += w;
    else
      d.measure_U_minus += w;
  }
  d.switch_count = trajectory.switch_count;
  return d;
}

ValueEstimate upper_value_estimate(const GameSpec& spec2d, double eps,
                                   const std::vector<PolicyIIFactory>& family,
                                   double T, double dt) {
  if (family.empty())
    throw PreconditionError("upper_value_estimate: empty II family");
  ValueEstimate est;
  est.member_values.resize(family.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t j = 0; j < family.size(); ++j) {
    HighwayPolicyI pi(spec2d, eps, dt);
    auto pii = family[j].make(spec2d, eps, dt);
    Trajectory tr = integrate(spec2d, eps, pi, *pii, T, dt);
    est.member_values[j] = tr.total_cost();
  }
  std::size_t best = 0;
  for (std::size_t j = 1; j < family.size(); ++j)
    if (est.member_values[j] > est.member_values[best]) best = j;
  est.value = est.member_values[best];
  est.argopt = family[best].name;
  return est;
}

ValueEstimate lower_value_estimate(const GameSpec& spec2d, double eps,
                                   const std::vector<PolicyIFactory>& family,
                                   double T, double dt) {
  if (family.empty())
    throw PreconditionError("lower_value_estimate: empty I family");
  ValueEstimate est;
  est.member_values.resize(family.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t j = 0; j < family.size(); ++j) {
    auto pi = family[j].make(spec2d, eps, dt);
    AdversarialPolicyII pii(spec2d, eps);
    Trajectory tr = integrate(spec2d, eps, *pi, pii, T, dt);
    est.member_values[j] = tr.total_cost();
  }
  std::size_t best = 0;
  for (std::size_t j = 1; j < family.size(); ++j)
    if (est.member_values[j] < est.member_values[best]) best = j;
  est.value = est.member_values[best];
  est.argopt = family[best].name;
  return est;
}

AffineFit affine_fit(const std::vector<double>& t,
                     const std::vector<double>& y) {
  if (t.size() != y.size() || t.size() < 2)
    throw PreconditionError("affine_fit: need two matched samples");
  double n = static_cast<double>(t.size());
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sy += y[i];
    stt += t[i] * t[i];
    sty += t[i] * y[i];
  }
  double denom = n * stt - st * st;
  if (denom == 0.0) throw PreconditionError("affine_fit: degenerate times");
  AffineFit fit;
  fit.slope = (n * sty - st * sy) / denom;
  fit.intercept = (sy - fit.slope * st) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double r = y[i] - (fit.intercept + fit.slope * t[i]);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

CorrectorGameResult corrector_value_game(const GameSpec& spec3d,
                                         const Vec3& p, double T, double dt,
                                         std::uint64_t seed) {
  if (spec3d.kind != GameKind::Example3D)
    throw PreconditionError("corrector_value_game: needs the 3D game");
  if (!(T >= 10.0))
    throw PreconditionError("corrector_value_game: horizon must be >= 10");

  auto family = corrector_ii_family(p, seed);
  long total_steps = static_cast<long>(T / dt);
  IntegrateOptions opt;
  opt.record_stride = std::max(1L, total_steps / 4000);

  double best_slope = -std::numeric_limits<double>::infinity();
  double best_residual = 0.0;
  std::string best_name;
  for (const auto& member : family) {
    CorrectorPolicyI3D pi(spec3d, p, dt);
    auto pii = member.make(spec3d, 1.0, dt);
    Trajectory tr = integrate(spec3d, 1.0, pi, *pii, T, dt, opt);
    std::vector<double> ts, cost;
    for (const auto& s : tr.samples) {
      if (s.t < 0.5 * T) continue;
      ts.push_back(s.t);
      cost.push_back(s.running + dot(p, s.x));
    }
    AffineFit fit = affine_fit(ts, cost);
    if (fit.slope > best_slope) {
      best_slope = fit.slope;
      best_residual = fit.rms_residual;
      best_name = member.name;
    }
  }
  return {-best_slope, best_residual, best_name};
}

void write_trajectory_csv(std::ostream& out, const GameSpec& spec,
                          const Trajectory& trajectory) {
  int d = spec.dim;
  out << "t";
  for (int k = 1; k <= d; ++k) out << ",x" << k;
  for (int k = 1; k <= d; ++k) out << ",a" << k;
  for (int k = 1; k <= d; ++k) out << ",b" << k;
  out << ",running_cost\n";
  char buf[32];
  auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf << sep;
  };
  for (const auto& s : trajectory.samples) {
    put(s.t, ',');
    for (int k = 0; k < d; ++k) put(s.x[k], ',');
    for (int k = 0; k < d; ++k) put(s.a[k], ',');
    for (int k = 0; k < d; ++k) put(s.b[k], ',');
    std::snprintf(buf, sizeof buf, "%.17g", s.running);
    out << buf << '\n';
  }
}

}  // namespace hjhom
