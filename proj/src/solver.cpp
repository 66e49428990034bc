#include "hjhom/solver.hpp"

#include <algorithm>
#include <cmath>

#include "hjhom/engine.hpp"

namespace hjhom {

ScalarField lf_step(const ScalarField& field,
                    const std::function<double(const Vec3&, const Vec3&)>& H,
                    const DissipationBounds& th, double dt) {
  ScalarField in = field;
  ScalarField out(in.grid);
  auto fn = [&H](const std::array<int, 3>&, const Vec3& x, const Vec3& p) {
    return H(x, p);
  };
  StepMonitor mon;
  lf_step_into(in, out, fn, th, dt, &mon);
  return out;
}

DissipationBounds estimate_dissipation(
    const std::function<double(const Vec3&, const Vec3&)>& H, int dim,
    const Vec3& p_lo, const Vec3& p_hi, const std::vector<Vec3>& x_samples,
    int p_res) {
  if (x_samples.empty())
    throw PreconditionError("estimate_dissipation: no x samples");
  std::vector<Vec3> ps;
  {
    int n0 = p_res, n1 = dim >= 2 ? p_res : 1, n2 = dim >= 3 ? p_res : 1;
    for (int i = 0; i < n0; ++i)
      for (int j = 0; j < n1; ++j)
        for (int k = 0; k < n2; ++k) {
          Vec3 p{0.0, 0.0, 0.0};
          p.x = p_lo.x + (p_hi.x - p_lo.x) * i / std::max(1, n0 - 1);
          if (dim >= 2)
            p.y = p_lo.y + (p_hi.y - p_lo.y) * j / std::max(1, n1 - 1);
          if (dim >= 3)
            p.z = p_lo.z + (p_hi.z - p_lo.z) * k / std::max(1, n2 - 1);
          ps.push_back(p);
        }
  }
  DissipationBounds th;
  th.dim = dim;
  for (int axis = 0; axis < dim; ++axis) {
    double delta = 1e-4 * std::max(1.0, p_hi[axis] - p_lo[axis]);
    double worst = 0.0;
    for (const Vec3& x : x_samples) {
      for (const Vec3& p : ps) {
        Vec3 pp = p, pm = p;
        pp[axis] += delta;
        pm[axis] -= delta;
        double d = (H(x, pp) - H(x, pm)) / (2.0 * delta);
        if (!std::isfinite(d))
          throw std::runtime_error("estimate_dissipation: non-finite sample");
        worst = std::max(worst, std::fabs(d));
      }
    }
    th.theta[axis] = std::max(1.1 * worst, 1e-6);
  }
  return th;
}

namespace {

// Per-row tables of the 2D game Hamiltonian at scale eps: H depends on x
// only through x2.
struct Micro2DH {
  const std::vector<double>* hterm;  // -100 (1 - Phi) per x2 node
  const std::vector<double>* dphi;

  double operator()(const std::array<int, 3>& idx, const Vec3&,
                    const Vec3& p) const {
    double pn2 = p.x * p.x + p.y * p.y;
    double m = (pn2 <= 1.0e4) ? -pn2 * 0.01
                              : 100.0 - 2.0 * std::sqrt(pn2);
    double push = p.x * (*dphi)[idx[1]];
    return (*hterm)[idx[1]] - m - (push > 0.0 ? push : 0.0);
  }
};

std::vector<Vec3> row_samples_2d(const Grid& grid, double eps,
                                 std::size_t max_rows = 4096) {
  std::vector<Vec3> xs;
  int mm = grid.nodes_per_axis();
  int stride = std::max(1, mm / static_cast<int>(max_rows));
  for (int j = 0; j < mm; j += stride)
    xs.push_back({0.0, grid.coord(j) / eps, 0.0});
  return xs;
}

int required_nodes(double length, double h_max) {
  return static_cast<int>(std::ceil(length / h_max));
}

}  // namespace

MicroSolveResult solve_micro_2d(const BumpProfile& profile, double eps,
                                double T, int n, double half_width,
                                double p_box) {
  GameSpec game = make_game_2d(profile);
  double h_max = eps * profile.width / 4.0;
  Grid grid = Grid::box(2, half_width, n);
  if (grid.spacing() > h_max * (1.0 + 1e-12)) {
    throw PreconditionError(
        "solve_micro_2d: grid cannot resolve the cell bump; need N >= " +
        std::to_string(required_nodes(2.0 * half_width, h_max)) +
        " for h <= eps*w/4");
  }
  double V = game.speed_bound();
  if (half_width < 1.0 + V * T)
    throw PreconditionError(
        "solve_micro_2d: domain too small; need L >= 1 + V*T = " +
        std::to_string(1.0 + V * T));

  int mm = grid.nodes_per_axis();
  std::vector<double> hterm(mm), dphi(mm);
  for (int j = 0; j < mm; ++j) {
    Spatial2D s = game.spatial_2d(grid.coord(j) / eps);
    hterm[j] = -100.0 * (1.0 - s.big_phi);
    dphi[j] = s.delta_phi;
  }

  auto H_xy = [&](const Vec3& x, const Vec3& p) {
    return hamiltonian_closed_form_2d((1.0 / eps) * x, p, profile);
  };
  DissipationBounds th =
      estimate_dissipation(H_xy, 2, {-p_box, -p_box, 0.0},
                           {p_box, p_box, 0.0}, row_samples_2d(grid, eps));

  MicroSolveResult res;
  res.theta = th;
  ScalarField u(grid);
  u.fill([&](const Vec3& x) { return std::min(std::fabs(x.x), 1.0); });
  ScalarField buf(grid);

  double dt_max = cfl_limit(grid, th);
  int steps = static_cast<int>(std::ceil(T / dt_max));
  double dt = T / steps;
  Micro2DH H{&hterm, &dphi};
  StepMonitor mon;
  for (int s = 0; s < steps; ++s) {
    lf_step_into(u, buf, H, th, dt, &mon);
    std::swap(u.data, buf.data);
    u.time = buf.time;
    res.max_gradient = std::max(res.max_gradient, mon.max_abs_diff);
    if (mon.max_abs_diff > p_box)
      throw std::runtime_error(
          "solve_micro_2d: working momentum box exceeded (|Du| > " +
          std::to_string(p_box) + ")");
  }
  res.value_at_origin = u.interpolate({0.0, 0.0, 0.0});
  res.field = std::move(u);
  res.dt = dt;
  res.steps = steps;
  return res;
}

MicroSolveResult solve_xindep(int dim,
                              const std::function<double(const Vec3&)>& H,
                              const std::function<double(const Vec3&)>& u0,
                              double T, int n, double half_width,
                              double p_box) {
  Grid grid = Grid::box(dim, half_width, n);
  Vec3 lo{-p_box, dim >= 2 ? -p_box : 0.0, dim >= 3 ? -p_box : 0.0};
  Vec3 hi{p_box, dim >= 2 ? p_box : 0.0, dim >= 3 ? p_box : 0.0};
  auto H_xy = [&H](const Vec3&, const Vec3& p) { return H(p); };
  DissipationBounds th =
      estimate_dissipation(H_xy, dim, lo, hi, {{0.0, 0.0, 0.0}});

  MicroSolveResult res;
  res.theta = th;
  ScalarField u(grid);
  u.fill(u0);
  ScalarField buf(grid);

  double dt_max = cfl_limit(grid, th);
  int steps = static_cast<int>(std::ceil(T / dt_max));
  double dt = T / steps;
  auto fn = [&H](const std::array<int, 3>&, const Vec3&, const Vec3& p) {
    return H(p);
  };
  StepMonitor mon;
  for (int s = 0; s < steps; ++s) {
    lf_step_into(u, buf, fn, th, dt, &mon);
    std::swap(u.data, buf.data);
    u.time = buf.time;
    res.max_gradient = std::max(res.max_gradient, mon.max_abs_diff);
    if (mon.max_abs_diff > p_box)
      throw std::runtime_error(
          "solve_xindep: working momentum box exceeded");
  }
  res.value_at_origin = u.interpolate({0.0, 0.0, 0.0});
  res.field = std::move(u);
  res.dt = dt;
  res.steps = steps;
  return res;
}

namespace {

// Per-node tables of the 3D game Hamiltonian on the unit torus, evaluated
// at p_shift + Dw.
struct Corrector3DH {
  Vec3 p_shift;
  int mm;
  const std::vector<double>* big_phi;
  const std::vector<Vec3>* dphi;

  double operator()(const std::array<int, 3>& idx, const Vec3&,
                    const Vec3& q) const {
    std::size_t lin =
        (static_cast<std::size_t>(idx[0]) * mm + idx[1]) * mm + idx[2];
    double phi = (*big_phi)[lin];
    const Vec3& d = (*dphi)[lin];
    Vec3 p = p_shift + q;
    double pn = norm(p);
    double m = std::min(0.0, 200.0 - 4.0 * (1.0 + 99.0 * phi) * pn);
    double push = std::max(0.0, p.x * d.x) + std::max(0.0, p.y * d.y) +
                  std::max(0.0, p.z * d.z);
    return -100.0 * (1.0 - phi) - m - push;
  }
};

struct Corrector2DH {
  Vec3 p_shift;
  const std::vector<double>* big_phi;  // per x2 row
  const std::vector<double>* dphi;

  double operator()(const std::array<int, 3>& idx, const Vec3&,
                    const Vec3& q) const {
    double phi = (*big_phi)[idx[1]];
    Vec3 p = p_shift + q;
    double pn2 = p.x * p.x + p.y * p.y;
    double m = (pn2 <= 1.0e4) ? -pn2 * 0.01 : 100.0 - 2.0 * std::sqrt(pn2);
    double push = p.x * (*dphi)[idx[1]];
    return -100.0 * (1.0 - phi) - m - (push > 0.0 ? push : 0.0);
  }
};

}  // namespace

CorrectorSolveResult solve_corrector_periodic(const GameSpec& spec,
                                              const Vec3& p, double T,
                                              int n) {
  double w = spec.profile.width;
  Grid grid = Grid::unit_torus(spec.dim, n);
  if (grid.spacing() > w / 4.0 * (1.0 + 1e-12))
    throw PreconditionError(
        "solve_corrector_periodic: grid cannot resolve the bump; need N >= " +
        std::to_string(required_nodes(1.0, w / 4.0)));

  int mm = grid.nodes_per_axis();
  std::vector<double> big_phi;
  std::vector<Vec3> dphi3;
  std::vector<double> dphi2;
  if (spec.dim == 3) {
    big_phi.resize(static_cast<std::size_t>(mm) * mm * mm);
    dphi3.resize(big_phi.size());
    for (int i = 0; i < mm; ++i)
      for (int j = 0; j < mm; ++j)
        for (int k = 0; k < mm; ++k) {
          Spatial3D s = spec.spatial_3d(grid.point({i, j, k}));
          std::size_t lin = (static_cast<std::size_t>(i) * mm + j) * mm + k;
          big_phi[lin] = s.big_phi;
          dphi3[lin] = s.delta_phi;
        }
  } else {
    big_phi.resize(mm);
    dphi2.resize(mm);
    for (int j = 0; j < mm; ++j) {
      Spatial2D s = spec.spatial_2d(grid.coord(j));
      big_phi[j] = s.big_phi;
      dphi2[j] = s.delta_phi;
    }
  }

  // Corrector gradients reach the desert-escape cost scale, well beyond
  // |p| itself.
  double margin = 100.0;
  double pb = norm_inf(p) + margin;
  Vec3 lo{-pb, -pb, spec.dim >= 3 ? -pb : 0.0};
  Vec3 hi{pb, pb, spec.dim >= 3 ? pb : 0.0};
  std::vector<Vec3> xs;
  {
    int stride = std::max(1, mm / 16);
    if (spec.dim == 3) {
      for (int i = 0; i < mm; i += stride)
        for (int j = 0; j < mm; j += stride)
          for (int k = 0; k < mm; k += stride)
            xs.push_back(grid.point({i, j, k}));
      xs.push_back({0.0, 0.0, 0.0});
      xs.push_back({0.0, 0.0, 0.25});
      xs.push_back({0.25, 0.25, 0.0});
      xs.push_back({0.5, 0.5, 0.5});
    } else {
      for (int j = 0; j < mm; ++j) xs.push_back({0.0, grid.coord(j), 0.0});
    }
  }
  auto H_xy = [&](const Vec3& x, const Vec3& q) {
    return hamiltonian(spec, x, q);
  };
  DissipationBounds th = estimate_dissipation(H_xy, spec.dim, lo, hi, xs, 7);

  ScalarField u(grid);  // w(0, .) = 0
  ScalarField buf(grid);
  double dt_max = cfl_limit(grid, th);
  int steps = static_cast<int>(std::ceil(T / dt_max));
  double dt = T / steps;

  std::vector<double> ts, neg_mean;
  ts.reserve(steps);
  neg_mean.reserve(steps);
  double count = static_cast<double>(grid.interior_count());

  StepMonitor mon;
  double max_grad = 0.0;
  for (int s = 0; s < steps; ++s) {
    if (spec.dim == 3) {
      Corrector3DH H{p, mm, &big_phi, &dphi3};
      lf_step_into(u, buf, H, th, dt, &mon);
    } else {
      Corrector2DH H{p, &big_phi, &dphi2};
      lf_step_into(u, buf, H, th, dt, &mon);
    }
    std::swap(u.data, buf.data);
    u.time = buf.time;
    max_grad = std::max(max_grad, mon.max_abs_diff);
    if (mon.max_abs_diff > pb - norm_inf(p))
      throw std::runtime_error(
          "solve_corrector_periodic: working momentum box exceeded");
    double t = (s + 1) * dt;
    if (t >= 0.5 * T) {
      ts.push_back(t);
      neg_mean.push_back(-mon.sum_new / count);
    }
  }

  AffineFit fit = affine_fit(ts, neg_mean);
  CorrectorSolveResult res;
  res.hbar = fit.slope;
  res.fit_residual = fit.rms_residual;
  res.theta = th;
  res.steps = steps;
  res.max_gradient = max_grad;
  return res;
}

MicroSolveResult solve_effective(const EffectiveHTable& table,
                                 const std::function<double(const Vec3&)>& u0,
                                 double T, int n, double half_width) {
  Grid grid = Grid::box(table.dim, half_width, n);

  // theta from the table's own finite differences (the interpolant is
  // piecewise multilinear, so adjacent-node slopes bound dH/dp exactly).
  DissipationBounds th;
  th.dim = table.dim;
  {
    int tn = table.n_per_axis;
    double hp = 2.0 * table.box / (tn - 1);
    int n1 = table.dim >= 2 ? tn : 1, n2 = table.dim >= 3 ? tn : 1;
    for (int i = 0; i < tn; ++i)
      for (int j = 0; j < n1; ++j)
        for (int k = 0; k < n2; ++k) {
          std::vector<int> idx{i, j, k};
          idx.resize(table.dim);
          double c = table.node(idx);
          for (int axis = 0; axis < table.dim; ++axis) {
            if (idx[axis] + 1 >= tn) continue;
            std::vector<int> nb = idx;
            nb[axis] += 1;
            th.theta[axis] = std::max(
                th.theta[axis], 1.1 * std::fabs(table.node(nb) - c) / hp);
          }
        }
    for (int axis = 0; axis < table.dim; ++axis)
      th.theta[axis] = std::max(th.theta[axis], 1e-6);
  }

  MicroSolveResult res;
  res.theta = th;
  ScalarField u(grid);
  u.fill(u0);
  ScalarField buf(grid);

  double dt_max = cfl_limit(grid, th);
  int steps = static_cast<int>(std::ceil(T / dt_max));
  double dt = T / steps;
  auto fn = [&table](const std::array<int, 3>&, const Vec3&, const Vec3& p) {
    return table.eval_clamped(p);
  };
  StepMonitor mon;
  for (int s = 0; s < steps; ++s) {
    lf_step_into(u, buf, fn, th, dt, &mon);
    std::swap(u.data, buf.data);
    u.time = buf.time;
    if (mon.max_abs_diff > table.box)
      throw std::runtime_error(
          "solve_effective: momentum left the tabulated box [-P, P]^d "
          "(|Du| reached " +
          std::to_string(mon.max_abs_diff) + ")");
  }
  res.value_at_origin = u.interpolate({0.0, 0.0, 0.0});
  res.field = std::move(u);
  res.dt = dt;
  res.steps = steps;
  return res;
}

}  // namespace hjhom
