#include "hjhom/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hjhom/errors.hpp"

namespace hjhom {

Spatial2D GameSpec::spatial_2d(double x2) const {
  double lo = profile(x2);
  double hi = profile(x2 + 0.5);
  return {lo + hi, lo - hi};
}

Spatial3D GameSpec::spatial_3d(const Vec3& x) const {
  Vec3 f0 = phi_vec_3d(x, profile);
  Vec3 f1 = phi_vec_3d(x + HighwayLattice::half_shift, profile);
  return {(f0.x + f0.y + f0.z) + (f1.x + f1.y + f1.z), f0 - f1};
}

double GameSpec::running_cost(const Vec3& x, const Vec3& a,
                              const Vec3& b) const {
  (void)b;  // II's control never enters the running cost
  if (kind == GameKind::Example2D) {
    Spatial2D s = spatial_2d(x.y);
    return 100.0 * (1.0 - s.big_phi) + 100.0 * dot(a, a);
  }
  Spatial3D s = spatial_3d(x);
  return 100.0 * (1.0 - s.big_phi) + 100.0 * norm(a);
}

Vec3 GameSpec::transition(const Vec3& x, const Vec3& a, const Vec3& b) const {
  if (kind == GameKind::Example2D) {
    Spatial2D s = spatial_2d(x.y);
    return {2.0 * a.x + b.x * s.delta_phi, 2.0 * a.y, 0.0};
  }
  Spatial3D s = spatial_3d(x);
  double boost = 2.0 * (1.0 + 99.0 * s.big_phi);
  return boost * a + hadamard(b, s.delta_phi);
}

double GameSpec::initial_data(const Vec3& x) const {
  return std::min(std::fabs(x.x), 1.0);
}

double GameSpec::speed_bound() const {
  if (kind == GameKind::Example2D) return 2.0 * action_radius + 1.0;
  return 2.0 * (1.0 + 99.0) * action_radius + std::sqrt(3.0);
}

GameSpec make_game_2d(const BumpProfile& profile) {
  GameSpec g;
  g.kind = GameKind::Example2D;
  g.dim = 2;
  g.action_radius = 1.0;
  g.b_lo = {0.0, 0.0, 0.0};
  g.b_hi = {1.0, 0.0, 0.0};
  g.profile = profile;
  return g;
}

GameSpec make_game_3d(const BumpProfile& profile) {
  GameSpec g;
  g.kind = GameKind::Example3D;
  g.dim = 3;
  g.action_radius = 2.0;
  g.b_lo = {0.0, 0.0, 0.0};
  g.b_hi = {1.0, 1.0, 1.0};
  g.profile = profile;
  return g;
}

double hamiltonian_closed_form_2d(const Vec3& x, const Vec3& p,
                                  const BumpProfile& profile) {
  double lo = profile(x.y);
  double hi = profile(x.y + 0.5);
  double big_phi = lo + hi;
  double delta_phi = lo - hi;
  double pn = norm(p);
  // m(p) = min_{|a|<=1} (100|a|^2 + 2 p.a), reduced to the radial problem.
  double m = (pn <= 100.0) ? -pn * pn / 100.0 : 100.0 - 2.0 * pn;
  return -100.0 * (1.0 - big_phi) - m - std::max(0.0, p.x * delta_phi);
}

double hamiltonian_closed_form_3d(const Vec3& x, const Vec3& p,
                                  const BumpProfile& profile) {
  Vec3 f0 = phi_vec_3d(x, profile);
  Vec3 f1 = phi_vec_3d(x + HighwayLattice::half_shift, profile);
  double big_phi = (f0.x + f0.y + f0.z) + (f1.x + f1.y + f1.z);
  Vec3 delta_phi = f0 - f1;
  double pn = norm(p);
  // min_{|a|<=2} (100|a| + 2(1+99 Phi) p.a) is linear in the radius, so the
  // optimum sits at |a| = 0 or |a| = 2.
  double m = std::min(0.0, 200.0 - 4.0 * (1.0 + 99.0 * big_phi) * pn);
  double push = std::max(0.0, p.x * delta_phi.x) +
                std::max(0.0, p.y * delta_phi.y) +
                std::max(0.0, p.z * delta_phi.z);
  return -100.0 * (1.0 - big_phi) - m - push;
}

double hamiltonian(const GameSpec& spec, const Vec3& x, const Vec3& p) {
  if (spec.kind == GameKind::Example2D)
    return hamiltonian_closed_form_2d(x, p, spec.profile);
  return hamiltonian_closed_form_3d(x, p, spec.profile);
}

namespace {

std::vector<Vec3> ball_grid_2d(double radius, int res) {
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(res) * res);
  const double two_pi = 2.0 * M_PI;
  for (int j = 0; j < res; ++j) {
    double r = radius * static_cast<double>(j) / (res - 1);
    for (int k = 0; k < res; ++k) {
      double th = two_pi * k / res;
      pts.push_back({r * std::cos(th), r * std::sin(th), 0.0});
      if (j == 0) break;  // single center point
    }
  }
  return pts;
}

std::vector<Vec3> ball_grid_3d(double radius, int res) {
  // Polar levels forced odd (equator on-grid), azimuth count forced even
  // (direction pi on-grid), so all +-e_i directions are exact.
  int nz = (res % 2 == 1) ? res : res + 1;
  int na = (res % 2 == 0) ? res : res + 1;
  std::vector<Vec3> pts;
  const double two_pi = 2.0 * M_PI;
  for (int j = 0; j < res; ++j) {
    double r = radius * static_cast<double>(j) / (res - 1);
    if (j == 0) {
      pts.push_back({0.0, 0.0, 0.0});
      continue;
    }
    for (int iz = 0; iz < nz; ++iz) {
      double z = -1.0 + 2.0 * iz / (nz - 1);
      double s = std::sqrt(std::max(0.0, 1.0 - z * z));
      if (iz == 0 || iz == nz - 1) {
        pts.push_back({0.0, 0.0, r * z});
        continue;
      }
      for (int k = 0; k < na; ++k) {
        double th = two_pi * k / na;
        pts.push_back({r * s * std::cos(th), r * s * std::sin(th), r * z});
      }
    }
  }
  return pts;
}

std::vector<Vec3> box_grid(const Vec3& lo, const Vec3& hi, int dim, int res) {
  std::vector<double> axis(res);
  for (int k = 0; k < res; ++k)
    axis[k] = static_cast<double>(k) / (res - 1);
  std::vector<Vec3> pts;
  if (dim == 2) {
    // B = [0,1] x {0}: one effective coordinate
    for (int k = 0; k < res; ++k)
      pts.push_back({lo.x + axis[k] * (hi.x - lo.x), lo.y, lo.z});
    return pts;
  }
  pts.reserve(static_cast<std::size_t>(res) * res * res);
  for (int i = 0; i < res; ++i)
    for (int j = 0; j < res; ++j)
      for (int k = 0; k < res; ++k)
        pts.push_back({lo.x + axis[i] * (hi.x - lo.x),
                       lo.y + axis[j] * (hi.y - lo.y),
                       lo.z + axis[k] * (hi.z - lo.z)});
  return pts;
}

}  // namespace

OracleResult hamiltonian_minmax_both(const GameSpec& spec, const Vec3& x,
                                     const Vec3& p, int res) {
  if (res < 2) throw PreconditionError("minmax oracle: res must be >= 2");

  std::vector<Vec3> agrid = (spec.dim == 2)
                                ? ball_grid_2d(spec.action_radius, res)
                                : ball_grid_3d(spec.action_radius, res);
  std::vector<Vec3> bgrid = box_grid(spec.b_lo, spec.b_hi, spec.dim, res);

  // The cost surface is evaluated once per (a, b) pair; the x-dependent
  // bump values are hoisted since x is fixed for the whole sweep.
  const double inf = std::numeric_limits<double>::infinity();
  double minmax = inf;  // min over a of max over b
  std::vector<double> col_min(bgrid.size(), inf);

  if (spec.kind == GameKind::Example2D) {
    Spatial2D s = spec.spatial_2d(x.y);
    double base = 100.0 * (1.0 - s.big_phi);
    for (const Vec3& a : agrid) {
      double ca = base + 100.0 * dot(a, a) +
                  2.0 * (p.x * a.x + p.y * a.y);
      double row_max = -inf;
      for (std::size_t k = 0; k < bgrid.size(); ++k) {
        double c = ca + p.x * bgrid[k].x * s.delta_phi;
        row_max = std::max(row_max, c);
        col_min[k] = std::min(col_min[k], c);
      }
      minmax = std::min(minmax, row_max);
    }
  } else {
    Spatial3D s = spec.spatial_3d(x);
    double base = 100.0 * (1.0 - s.big_phi);
    double boost = 2.0 * (1.0 + 99.0 * s.big_phi);
    Vec3 q = hadamard(p, s.delta_phi);  // p.(b (.) dphi) = q.b
    for (const Vec3& a : agrid) {
      double ca = base + 100.0 * norm(a) + boost * dot(p, a);
      double row_max = -inf;
      for (std::size_t k = 0; k < bgrid.size(); ++k) {
        double c = ca + dot(q, bgrid[k]);
        row_max = std::max(row_max, c);
        col_min[k] = std::min(col_min[k], c);
      }
      minmax = std::min(minmax, row_max);
    }
  }

  double maxmin = -inf;
  for (double v : col_min) maxmin = std::max(maxmin, v);
  return {-minmax, -maxmin};
}

double hamiltonian_minmax_oracle(const GameSpec& spec, const Vec3& x,
                                 const Vec3& p, int res,
                                 HamiltonianOrder order) {
  OracleResult r = hamiltonian_minmax_both(spec, x, p, res);
  return order == HamiltonianOrder::Upper ? r.upper : r.lower;
}

std::vector<double> coercivity_probe(const GameSpec& spec,
                                     const std::vector<double>& radii) {
  // x on a uniform cell grid (includes the highway centers), p on a
  // direction fan including the coordinate axes.
  std::vector<Vec3> xs;
  if (spec.dim == 2) {
    const int nx = 101;
    for (int j = 0; j < nx; ++j) xs.push_back({0.0, double(j) / nx, 0.0});
  } else {
    const int nx = 17;
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < nx; ++j)
        for (int k = 0; k < nx; ++k)
          xs.push_back({double(i) / nx, double(j) / nx, double(k) / nx});
    xs.push_back({0.0, 0.0, 0.0});
    xs.push_back({0.0, 0.0, 0.25});
    xs.push_back({0.25, 0.25, 0.0});
  }

  std::vector<Vec3> dirs;
  if (spec.dim == 2) {
    const int nd = 32;
    for (int k = 0; k < nd; ++k) {
      double th = 2.0 * M_PI * k / nd;
      dirs.push_back({std::cos(th), std::sin(th), 0.0});
    }
  } else {
    dirs = ball_grid_3d(1.0, 9);
    std::vector<Vec3> unit;
    for (const Vec3& d : dirs)
      if (std::fabs(norm(d) - 1.0) < 1e-12) unit.push_back(d);
    dirs = unit;
  }

  std::vector<double> mins;
  mins.reserve(radii.size());
  for (double r : radii) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec3& x : xs)
      for (const Vec3& d : dirs)
        best = std::min(best, hamiltonian(spec, x, r * d));
    mins.push_back(best);
  }
  return mins;
}

}  // namespace hjhom
