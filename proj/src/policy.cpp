#include "hjhom/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hjhom/effective.hpp"
#include "hjhom/errors.hpp"

namespace hjhom {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// HighwayPolicyI
// ---------------------------------------------------------------------------

HighwayPolicyI::HighwayPolicyI(const GameSpec& spec, double eps, double dt)
    : spec_(&spec), eps_(eps), sqrt_eps_(std::sqrt(eps)), dt_(dt) {
  if (!(eps > 0.0 && eps < 0.25))
    throw PreconditionError("highway policy: eps must lie in (0, 1/4)");
}

Vec3 HighwayPolicyI::act(double t, const Vec3& sigma) {
  (void)t;
  switch (mode_) {
    case Climb:
      return {0.0, 1.0, 0.0};
    case Descend:
      return {0.0, -1.0, 0.0};
    default: {
      double drift = sigma.y - wait_height_;
      if (std::fabs(drift) > 0.25 * eps_)
        throw std::runtime_error(
            "highway policy: state left the highway band during a WAIT "
            "phase");
      if (drift == 0.0) return {0.0, 0.0, 0.0};
      // corrective vertical micro-action against numerical drift
      double a2 = std::clamp(-drift / (2.0 * dt_), -1.0, 1.0);
      return {0.0, a2, 0.0};
    }
  }
}

bool HighwayPolicyI::hit(double t, const Vec3& sigma) const {
  (void)t;
  if (mode_ == WaitOutbound) return spec_->initial_data(sigma) >= sqrt_eps_;
  if (mode_ == WaitInbound) return sigma.x <= 0.0;
  return false;
}

void HighwayPolicyI::on_event(double t, Vec3& sigma) {
  (void)sigma;
  switch (mode_) {
    case WaitOutbound:
      mode_ = Climb;
      phase_end_ = t + 0.25 * eps_;
      ++switches_;
      break;
    case Climb:
      mode_ = WaitInbound;
      phase_end_ = kNoEvent;
      wait_height_ = 0.5 * eps_;
      break;
    case WaitInbound:
      mode_ = Descend;
      phase_end_ = t + 0.25 * eps_;
      ++switches_;
      break;
    case Descend:
      mode_ = WaitOutbound;
      phase_end_ = kNoEvent;
      wait_height_ = 0.0;
      break;
  }
}

// ---------------------------------------------------------------------------
// CorrectorPolicyI3D
// ---------------------------------------------------------------------------

CorrectorPolicyI3D::CorrectorPolicyI3D(const GameSpec& spec3d, const Vec3& p,
                                       double dt)
    : spec_(&spec3d), dt_(dt) {
  axis_ = 1;
  double best = h_formula(p.x);
  if (h_formula(p.y) > best) {
    best = h_formula(p.y);
    axis_ = 2;
  }
  if (h_formula(p.z) > best) axis_ = 3;
  gamma_ = p[axis_ - 1];
  shifted_ = gamma_ >= 0.0;
}

Vec3 CorrectorPolicyI3D::transverse_offset(const Vec3& sigma) const {
  Vec3 base = HighwayLattice::base_point(axis_);
  if (shifted_) base += HighwayLattice::half_shift;
  Vec3 off{0.0, 0.0, 0.0};
  for (int k = 0; k < 3; ++k) {
    if (k == axis_ - 1) continue;  // coordinate along the line is free
    off[k] = wrap_half(sigma[k] - base[k]);
  }
  return off;
}

Vec3 CorrectorPolicyI3D::cruise_action() const {
  double s = std::fabs(gamma_) > 0.5 ? spec_->action_radius : 0.0;
  double sign = gamma_ > 0.0 ? 1.0 : (gamma_ < 0.0 ? -1.0 : 0.0);
  Vec3 a{0.0, 0.0, 0.0};
  a[axis_ - 1] = -sign * s;
  return a;
}

Vec3 CorrectorPolicyI3D::act(double t, const Vec3& sigma) {
  (void)t;
  if (phase_ == 2) return cruise_action();
  Vec3 off = transverse_offset(sigma);
  double d = norm(off);
  if (d < arrive_tol_) return {0.0, 0.0, 0.0};
  // Full speed far out, proportional braking close in so the approach
  // contracts through the arrival window instead of overshooting the line.
  double boost = 1.0 + 99.0 * spec_->spatial_3d(sigma).big_phi;
  double mag =
      std::min(spec_->action_radius, d / (4.0 * boost * dt_));
  return (-mag / d) * off;
}

bool CorrectorPolicyI3D::hit(double t, const Vec3& sigma) const {
  (void)t;
  if (phase_ != 1) return false;
  return norm(transverse_offset(sigma)) <= arrive_tol_;
}

void CorrectorPolicyI3D::on_event(double t, Vec3& sigma) {
  (void)t;
  // Land exactly on the target line: snap the transverse coordinates to the
  // nearest lattice copy (all line coordinates are exact dyadics).
  Vec3 base = HighwayLattice::base_point(axis_);
  if (shifted_) base += HighwayLattice::half_shift;
  for (int k = 0; k < 3; ++k) {
    if (k == axis_ - 1) continue;
    sigma[k] = base[k] + std::round(sigma[k] - base[k]);
  }
  phase_ = 2;
}

// ---------------------------------------------------------------------------
// Player II
// ---------------------------------------------------------------------------

AdversarialPolicyII::AdversarialPolicyII(const GameSpec& spec, double eps)
    : spec_(&spec), eps_(eps), threshold_(2.0 * std::sqrt(eps)) {}

Vec3 AdversarialPolicyII::act(double t, const Vec3& sigma) {
  (void)t;
  if (spec_->initial_data(sigma) <= threshold_) return {1.0, 0.0, 0.0};
  Spatial2D s = spec_->spatial_2d(sigma.y / eps_);
  if (sigma.x * s.delta_phi > 0.0) return {1.0, 0.0, 0.0};
  return {0.0, 0.0, 0.0};
}

RandomBangBangPolicyII::RandomBangBangPolicyII(std::uint64_t seed,
                                               double switch_scale, int dim)
    : seed_(seed), scale_(switch_scale), dim_(dim) {}

Vec3 RandomBangBangPolicyII::act(double t, const Vec3&) {
  auto k = static_cast<std::uint64_t>(std::floor(t / scale_));
  Vec3 b{0.0, 0.0, 0.0};
  for (int i = 0; i < dim_ && i < (dim_ == 2 ? 1 : 3); ++i) {
    std::uint64_t bit = splitmix64(seed_ ^ (k * 3ULL + std::uint64_t(i))) & 1u;
    b[i] = static_cast<double>(bit);
  }
  return b;
}

GreedyPolicyII3D::GreedyPolicyII3D(const GameSpec& spec3d, const Vec3& p)
    : spec_(&spec3d), p_(p) {}

Vec3 GreedyPolicyII3D::act(double t, const Vec3& sigma) {
  (void)t;
  Spatial3D s = spec_->spatial_3d(sigma);
  Vec3 b{0.0, 0.0, 0.0};
  for (int i = 0; i < 3; ++i)
    if (p_[i] * s.delta_phi[i] > 0.0) b[i] = 1.0;
  return b;
}

// ---------------------------------------------------------------------------
// Families and name lookup
// ---------------------------------------------------------------------------

std::pair<std::vector<PolicyIFactory>, std::vector<PolicyIIFactory>>
baseline_families(std::uint64_t seed) {
  std::vector<PolicyIFactory> fi;
  fi.push_back({"highway", [](const GameSpec& g, double eps, double dt) {
                  return std::unique_ptr<PolicyI>(
                      new HighwayPolicyI(g, eps, dt));
                }});
  fi.push_back({"stay", [](const GameSpec&, double, double) {
                  return std::unique_ptr<PolicyI>(new StayPolicyI());
                }});
  fi.push_back({"home", [](const GameSpec&, double, double) {
                  return std::unique_ptr<PolicyI>(new HomePolicyI());
                }});

  std::vector<PolicyIIFactory> fii;
  fii.push_back({"adversarial", [](const GameSpec& g, double eps, double) {
                   return std::unique_ptr<PolicyII>(
                       new AdversarialPolicyII(g, eps));
                 }});
  fii.push_back({"zero", [](const GameSpec&, double, double) {
                   return std::unique_ptr<PolicyII>(new ZeroPolicyII());
                 }});
  fii.push_back({"push", [](const GameSpec&, double, double) {
                   return std::unique_ptr<PolicyII>(
                       new ConstantPolicyII({1.0, 0.0, 0.0}));
                 }});
  fii.push_back(
      {"random:" + std::to_string(seed),
       [seed](const GameSpec& g, double eps, double) {
         return std::unique_ptr<PolicyII>(
             new RandomBangBangPolicyII(seed, eps, g.dim));
       }});
  return {std::move(fi), std::move(fii)};
}

std::vector<PolicyIIFactory> corrector_ii_family(const Vec3& p,
                                                 std::uint64_t seed) {
  std::vector<PolicyIIFactory> fam;
  fam.push_back({"zero", [](const GameSpec&, double, double) {
                   return std::unique_ptr<PolicyII>(new ZeroPolicyII());
                 }});
  fam.push_back({"ones", [](const GameSpec&, double, double) {
                   return std::unique_ptr<PolicyII>(
                       new ConstantPolicyII({1.0, 1.0, 1.0}));
                 }});
  fam.push_back({"random:" + std::to_string(seed),
                 [seed](const GameSpec& g, double eps, double) {
                   (void)eps;
                   return std::unique_ptr<PolicyII>(
                       new RandomBangBangPolicyII(seed, 1.0, g.dim));
                 }});
  fam.push_back({"greedy", [p](const GameSpec& g, double, double) {
                   return std::unique_ptr<PolicyII>(
                       new GreedyPolicyII3D(g, p));
                 }});
  return fam;
}

PolicyIFactory make_policy_i(const std::string& name) {
  auto [fi, fii] = baseline_families();
  (void)fii;
  for (auto& f : fi)
    if (f.name == name) return f;
  throw PreconditionError("unknown Player I policy: " + name);
}

PolicyIIFactory make_policy_ii(const std::string& name) {
  if (name.rfind("random:", 0) == 0) {
    std::uint64_t seed = std::stoull(name.substr(7));
    return {name, [seed](const GameSpec& g, double eps, double) {
              return std::unique_ptr<PolicyII>(
                  new RandomBangBangPolicyII(seed, eps, g.dim));
            }};
  }
  auto [fi, fii] = baseline_families();
  (void)fi;
  for (auto& f : fii)
    if (f.name.substr(0, f.name.find(':')) == name ||
        f.name == name)
      return f;
  throw PreconditionError("unknown Player II policy: " + name);
}

}  // namespace hjhom
