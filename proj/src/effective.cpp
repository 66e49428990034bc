#include "hjhom/effective.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "hjhom/engine.hpp"
#include "hjhom/errors.hpp"
#include "hjhom/solver.hpp"

namespace hjhom {

EffectiveHTable EffectiveHTable::from_function(
    int dim, double box, int n_per_axis,
    const std::function<double(const Vec3&)>& f, HbarProvenance prov,
    double residual) {
  if (dim < 1 || dim > 3 || n_per_axis < 2 || !(box > 0.0))
    throw PreconditionError("EffectiveHTable: bad parameters");
  EffectiveHTable t;
  t.dim = dim;
  t.box = box;
  t.n_per_axis = n_per_axis;
  t.provenance = prov;
  t.residual = residual;
  int n1 = dim >= 2 ? n_per_axis : 1;
  int n2 = dim >= 3 ? n_per_axis : 1;
  t.values.reserve(static_cast<std::size_t>(n_per_axis) * n1 * n2);
  for (int i = 0; i < n_per_axis; ++i)
    for (int j = 0; j < n1; ++j)
      for (int k = 0; k < n2; ++k)
        t.values.push_back(f(t.node_momentum({i, j, k})));
  return t;
}

double EffectiveHTable::node(const std::vector<int>& idx) const {
  std::size_t lin = 0;
  int n1 = dim >= 2 ? n_per_axis : 1;
  int n2 = dim >= 3 ? n_per_axis : 1;
  lin = static_cast<std::size_t>(idx[0]) * n1 * n2;
  if (dim >= 2) lin += static_cast<std::size_t>(idx[1]) * n2;
  if (dim >= 3) lin += static_cast<std::size_t>(idx[2]);
  return values[lin];
}

Vec3 EffectiveHTable::node_momentum(const std::vector<int>& idx) const {
  double hp = 2.0 * box / (n_per_axis - 1);
  Vec3 p{0.0, 0.0, 0.0};
  for (int k = 0; k < dim; ++k) p[k] = -box + idx[static_cast<std::size_t>(k)] * hp;
  return p;
}

double EffectiveHTable::eval(const Vec3& p) const {
  for (int k = 0; k < dim; ++k)
    if (std::fabs(p[k]) > box * (1.0 + 1e-9))
      throw PreconditionError("EffectiveHTable::eval: momentum outside box");
  return eval_clamped(p);
}

double EffectiveHTable::eval_clamped(const Vec3& p) const {
  double hp = 2.0 * box / (n_per_axis - 1);
  int base[3] = {0, 0, 0};
  double frac[3] = {0.0, 0.0, 0.0};
  for (int k = 0; k < dim; ++k) {
    double s = (std::clamp(p[k], -box, box) + box) / hp;
    int b = static_cast<int>(std::floor(s));
    b = std::clamp(b, 0, n_per_axis - 2);
    base[k] = b;
    frac[k] = std::clamp(s - b, 0.0, 1.0);
  }
  double acc = 0.0;
  int corners = 1 << dim;
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    std::vector<int> idx{base[0], base[1], base[2]};
    for (int k = 0; k < dim; ++k) {
      if (c & (1 << k)) {
        idx[static_cast<std::size_t>(k)] += 1;
        w *= frac[k];
      } else {
        w *= 1.0 - frac[k];
      }
    }
    acc += w * node(idx);
  }
  return acc;
}

double EffectiveHTable::min_value() const {
  return *std::min_element(values.begin(), values.end());
}

double EffectiveHTable::max_value() const {
  return *std::max_element(values.begin(), values.end());
}

void EffectiveHTable::write_csv(std::ostream& out) const {
  out << "p1,p2,p3,hbar,provenance,residual\n";
  const char* prov = provenance == HbarProvenance::Formula
                         ? "formula"
                         : (provenance == HbarProvenance::Game ? "game"
                                                               : "pde");
  char buf[32];
  int n1 = dim >= 2 ? n_per_axis : 1;
  int n2 = dim >= 3 ? n_per_axis : 1;
  for (int i = 0; i < n_per_axis; ++i)
    for (int j = 0; j < n1; ++j)
      for (int k = 0; k < n2; ++k) {
        Vec3 p = node_momentum({i, j, k});
        for (int a = 0; a < 3; ++a) {
          std::snprintf(buf, sizeof buf, "%.17g", p[a]);
          out << buf << ',';
        }
        std::snprintf(buf, sizeof buf, "%.17g", node({i, j, k}));
        out << buf << ',' << prov << ',';
        std::snprintf(buf, sizeof buf, "%.17g", residual);
        out << buf << '\n';
      }
}

namespace {

// Momenta drawn from a dyadic lattice (multiples of 2^-20) so that pair
// midpoints are exact in double precision and the midpoint-convexity audit
// carries no rounding slack.
Vec3 dyadic_sample(std::mt19937_64& rng, int dim, double box) {
  const double step = std::ldexp(1.0, -20);
  auto k_max = static_cast<long long>(box / step);
  std::uniform_int_distribution<long long> pick(-k_max, k_max);
  Vec3 p{0.0, 0.0, 0.0};
  for (int k = 0; k < dim; ++k) p[k] = static_cast<double>(pick(rng)) * step;
  return p;
}

}  // namespace

double convexity_check(const std::function<double(const Vec3&)>& hbar,
                       int dim, double box, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    Vec3 p = dyadic_sample(rng, dim, box);
    Vec3 q = dyadic_sample(rng, dim, box);
    Vec3 mid = 0.5 * (p + q);
    double v = hbar(mid) - 0.5 * (hbar(p) + hbar(q));
    worst = std::max(worst, v);
  }
  return worst;
}

double convexity_check(const EffectiveHTable& table, int sample_pairs,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, table.n_per_axis - 1);
  double worst = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < sample_pairs; ++s) {
    std::vector<int> a(3, 0), b(3, 0), mid(3, 0);
    for (int k = 0; k < table.dim; ++k) {
      a[static_cast<std::size_t>(k)] = pick(rng);
      b[static_cast<std::size_t>(k)] = pick(rng);
      // force equal parity so the midpoint lands on a node
      if (((a[static_cast<std::size_t>(k)] + b[static_cast<std::size_t>(k)]) & 1) != 0) {
        int& bk = b[static_cast<std::size_t>(k)];
        bk = bk > 0 ? bk - 1 : bk + 1;
      }
      mid[static_cast<std::size_t>(k)] =
          (a[static_cast<std::size_t>(k)] + b[static_cast<std::size_t>(k)]) / 2;
    }
    double v = table.node(mid) - 0.5 * (table.node(a) + table.node(b));
    worst = std::max(worst, v);
  }
  return worst;
}

double decomposition_check(
    const std::vector<Vec3>& p_samples,
    const std::function<double(const Vec3&)>& estimate) {
  double worst = 0.0;
  for (const Vec3& p : p_samples) {
    double full = estimate(p);
    double axis = std::max({estimate({p.x, 0.0, 0.0}),
                            estimate({0.0, p.y, 0.0}),
                            estimate({0.0, 0.0, p.z})});
    worst = std::max(worst, std::fabs(full - axis));
  }
  return worst;
}

HbarEstimate hbar_estimate(const Vec3& p, HbarMethod method, double T,
                           int resolution) {
  switch (method) {
    case HbarMethod::Formula:
      return {hbar_formula_3d(p), 0.0};
    case HbarMethod::Game: {
      GameSpec game = make_game_3d(paper_profile());
      CorrectorGameResult r = corrector_value_game(game, p, T, 1.0 / 200.0);
      return {r.hbar, r.fit_residual};
    }
    default: {
      GameSpec game = make_game_3d(experiments_profile_3d());
      CorrectorSolveResult r =
          solve_corrector_periodic(game, p, T, resolution);
      return {r.hbar, r.fit_residual};
    }
  }
}

}  // namespace hjhom
