#pragma once

#include <functional>
#include <vector>

#include "hjhom/effective.hpp"
#include "hjhom/vec3.hpp"

namespace hjhom {

// Variational solution oracle for convex x-independent Hamiltonians:
//
//   u(t, x) = min_q [ u0(x - t q) + t L(q) ],
//
// with L the discrete Legendre transform of the tabulated Hamiltonian over
// a velocity grid.  Construction audits midpoint convexity of the table and
// refuses nonconvex input.
class HopfLaxOracle {
 public:
  HopfLaxOracle(const EffectiveHTable& table, int velocity_res,
                double u0_lipschitz = 2.0);

  double eval(const std::function<double(const Vec3&)>& u0, double t,
              const Vec3& x) const;
  double lagrangian(const Vec3& q) const;  // nearest velocity-grid value
  double velocity_bound() const { return qmax_; }

 private:
  Vec3 velocity(int i, int j, int k) const;

  int dim_;
  int res_;
  double qmax_;
  std::vector<double> lagrangian_;
};

}  // namespace hjhom
