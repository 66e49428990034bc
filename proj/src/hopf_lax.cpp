#include "hjhom/hopf_lax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hjhom/errors.hpp"

namespace hjhom {

HopfLaxOracle::HopfLaxOracle(const EffectiveHTable& table, int velocity_res,
                             double u0_lipschitz)
    : dim_(table.dim), res_(velocity_res) {
  if (velocity_res < 2)
    throw PreconditionError("HopfLaxOracle: velocity_res must be >= 2");
  if (convexity_check(table, 4096, 7) > 1e-9)
    throw PreconditionError(
        "HopfLaxOracle: Hamiltonian table failed the convexity audit");

  // Max slope of the interpolant per axis bounds the relevant velocities;
  // beyond it the Lagrangian grows faster than any Lipschitz data can gain.
  double max_slope = 0.0;
  {
    int tn = table.n_per_axis;
    double hp = 2.0 * table.box / (tn - 1);
    int n1 = dim_ >= 2 ? tn : 1, n2 = dim_ >= 3 ? tn : 1;
    for (int i = 0; i < tn; ++i)
      for (int j = 0; j < n1; ++j)
        for (int k = 0; k < n2; ++k) {
          std::vector<int> idx{i, j, k};
          idx.resize(static_cast<std::size_t>(dim_));
          double c = table.node(idx);
          for (int axis = 0; axis < dim_; ++axis) {
            if (idx[static_cast<std::size_t>(axis)] + 1 >= tn) continue;
            std::vector<int> nb = idx;
            nb[static_cast<std::size_t>(axis)] += 1;
            max_slope =
                std::max(max_slope, std::fabs(table.node(nb) - c) / hp);
          }
        }
  }
  qmax_ = max_slope + u0_lipschitz + 1.0;

  // Tabulate momenta once, then L(q) = max_p (q.p - H(p)).
  std::vector<Vec3> ps;
  std::vector<double> hs;
  {
    int tn = table.n_per_axis;
    int n1 = dim_ >= 2 ? tn : 1, n2 = dim_ >= 3 ? tn : 1;
    for (int i = 0; i < tn; ++i)
      for (int j = 0; j < n1; ++j)
        for (int k = 0; k < n2; ++k) {
          ps.push_back(table.node_momentum({i, j, k}));
          hs.push_back(table.node({i, j, k}));
        }
  }

  int n1 = dim_ >= 2 ? res_ : 1, n2 = dim_ >= 3 ? res_ : 1;
  lagrangian_.assign(static_cast<std::size_t>(res_) * n1 * n2, 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < res_; ++i) {
    for (int j = 0; j < n1; ++j)
      for (int k = 0; k < n2; ++k) {
        Vec3 q = velocity(i, j, k);
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < ps.size(); ++m)
          best = std::max(best, dot(q, ps[m]) - hs[m]);
        lagrangian_[(static_cast<std::size_t>(i) * n1 + j) * n2 + k] = best;
      }
  }
}

Vec3 HopfLaxOracle::velocity(int i, int j, int k) const {
  double hq = 2.0 * qmax_ / (res_ - 1);
  Vec3 q{-qmax_ + i * hq, 0.0, 0.0};
  if (dim_ >= 2) q.y = -qmax_ + j * hq;
  if (dim_ >= 3) q.z = -qmax_ + k * hq;
  return q;
}

double HopfLaxOracle::lagrangian(const Vec3& q) const {
  double hq = 2.0 * qmax_ / (res_ - 1);
  int n1 = dim_ >= 2 ? res_ : 1, n2 = dim_ >= 3 ? res_ : 1;
  int idx[3] = {0, 0, 0};
  for (int a = 0; a < dim_; ++a) {
    int b = static_cast<int>(std::lround((q[a] + qmax_) / hq));
    idx[a] = std::clamp(b, 0, res_ - 1);
  }
  return lagrangian_[(static_cast<std::size_t>(idx[0]) * n1 + idx[1]) * n2 +
                     idx[2]];
}

double HopfLaxOracle::eval(const std::function<double(const Vec3&)>& u0,
                           double t, const Vec3& x) const {
  if (t == 0.0) return u0(x);
  int n1 = dim_ >= 2 ? res_ : 1, n2 = dim_ >= 3 ? res_ : 1;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < res_; ++i)
    for (int j = 0; j < n1; ++j)
      for (int k = 0; k < n2; ++k) {
        Vec3 q = velocity(i, j, k);
        double v =
            u0(x - t * q) +
            t * lagrangian_[(static_cast<std::size_t>(i) * n1 + j) * n2 + k];
        best = std::min(best, v);
      }
  return best;
}

}  // namespace hjhom
