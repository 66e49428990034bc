#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "hjhom/game.hpp"
#include "hjhom/vec3.hpp"

namespace hjhom {

inline constexpr double kNoEvent = std::numeric_limits<double>::infinity();

// Player I policies are feedback controllers with internal mode state.  The
// integrator drives the event machinery: `scheduled_event` announces a known
// future switch time (fixed-duration phases), `hit` is the hitting predicate
// of the current mode (refined by bisection when it flips during a step),
// and `on_event` performs the mode transition.  `on_event` may adjust the
// state by a tiny snap (bounded by `snap_tolerance`), which realizes
// exact-arithmetic landings robustly in floating point.
class PolicyI {
 public:
  virtual ~PolicyI() = default;
  virtual Vec3 act(double t, const Vec3& sigma) = 0;
  virtual double scheduled_event() const { return kNoEvent; }
  virtual bool hit(double t, const Vec3& sigma) const {
    (void)t;
    (void)sigma;
    return false;
  }
  virtual void on_event(double t, Vec3& sigma) {
    (void)t;
    (void)sigma;
  }
  virtual int mode() const { return 0; }
  virtual int switch_count() const { return 0; }
  static constexpr double snap_tolerance = 1e-5;
};

class PolicyII {
 public:
  virtual ~PolicyII() = default;
  virtual Vec3 act(double t, const Vec3& sigma) = 0;
};

// ---------------------------------------------------------------------------
// Player I: the four-phase highway-switching strategy (2D game).
//
//   WAIT_OUTBOUND  a = 0 on the height-0 highway until u0(sigma) >= eps^1/2
//   CLIMB          a = (0, 1) for eps/4 (height 0 -> eps/2)
//   WAIT_INBOUND   a = 0 on the height-eps/2 highway until sigma_1 <= 0
//   DESCEND        a = (0, -1) for eps/4, then repeat
//
// During WAIT phases a small vertical corrective action (magnitude <= 1)
// cancels numerical drift off the highway center.
// ---------------------------------------------------------------------------
class HighwayPolicyI : public PolicyI {
 public:
  enum Mode { WaitOutbound = 0, Climb = 1, WaitInbound = 2, Descend = 3 };

  HighwayPolicyI(const GameSpec& spec, double eps, double dt);

  Vec3 act(double t, const Vec3& sigma) override;
  double scheduled_event() const override { return phase_end_; }
  bool hit(double t, const Vec3& sigma) const override;
  void on_event(double t, Vec3& sigma) override;
  int mode() const override { return mode_; }
  int switch_count() const override { return switches_; }

 private:
  const GameSpec* spec_;
  double eps_, sqrt_eps_, dt_;
  Mode mode_ = WaitOutbound;
  double phase_end_ = kNoEvent;  // absolute end time of CLIMB / DESCEND
  double wait_height_ = 0.0;     // highway the current WAIT phase sits on
  int switches_ = 0;
};

// Player I baselines.
class StayPolicyI : public PolicyI {
 public:
  Vec3 act(double, const Vec3&) override { return {0.0, 0.0, 0.0}; }
};

class HomePolicyI : public PolicyI {
 public:
  Vec3 act(double, const Vec3& sigma) override {
    double n = std::max(norm(sigma), 1e-9);
    return (-1.0 / n) * sigma;
  }
};

// Test/benchmark helper: a constant action.
class ConstantPolicyI : public PolicyI {
 public:
  explicit ConstantPolicyI(const Vec3& a) : a_(a) {}
  Vec3 act(double, const Vec3&) override { return a_; }

 private:
  Vec3 a_;
};

// ---------------------------------------------------------------------------
// Player I: corrector strategy for the 3D game with linear data p.x.
// Phase 1 travels at full speed to the nearest point of l_i + Z^3 (gamma<0)
// or l_i + 1/2 + Z^3 (gamma>=0), where i maximizes h(p_i); phase 2 holds the
// constant axial action -sign(gamma) s e_i with s = 2 when |gamma| > 1/2 and
// s = 0 otherwise (the bang-bang optimum of 100|a| + 200 gamma a.e_i).
// ---------------------------------------------------------------------------
class CorrectorPolicyI3D : public PolicyI {
 public:
  CorrectorPolicyI3D(const GameSpec& spec3d, const Vec3& p, double dt);

  Vec3 act(double t, const Vec3& sigma) override;
  bool hit(double t, const Vec3& sigma) const override;
  void on_event(double t, Vec3& sigma) override;
  int mode() const override { return phase_; }

  int axis() const { return axis_; }
  double gamma() const { return gamma_; }
  Vec3 cruise_action() const;  // the phase-2 action

 private:
  // Transverse offset (wrapped) from sigma to the target line lattice.
  Vec3 transverse_offset(const Vec3& sigma) const;

  const GameSpec* spec_;
  int axis_;        // 1..3
  double gamma_;    // p[axis-1]
  bool shifted_;    // target the +1/2 family
  double dt_;
  int phase_ = 1;
  static constexpr double arrive_tol_ = 1e-7;
};

// Player II: the paper's adversarial feedback control for the 2D game.
// Push with b = (1, 0) when u0(sigma) <= 2 eps^1/2 or when pushing moves
// sigma_1 away from zero; otherwise stay idle.
class AdversarialPolicyII : public PolicyII {
 public:
  AdversarialPolicyII(const GameSpec& spec, double eps);
  Vec3 act(double t, const Vec3& sigma) override;

 private:
  const GameSpec* spec_;
  double eps_, threshold_;
};

class ZeroPolicyII : public PolicyII {
 public:
  Vec3 act(double, const Vec3&) override { return {0.0, 0.0, 0.0}; }
};

class ConstantPolicyII : public PolicyII {
 public:
  explicit ConstantPolicyII(const Vec3& b) : b_(b) {}
  Vec3 act(double, const Vec3&) override { return b_; }

 private:
  Vec3 b_;
};

// Seeded bang-bang control: each component switches between 0 and 1 on a
// fixed time scale; the bit stream is a pure function of (seed, interval
// index), so trajectories are reproducible bit for bit.
class RandomBangBangPolicyII : public PolicyII {
 public:
  RandomBangBangPolicyII(std::uint64_t seed, double switch_scale, int dim);
  Vec3 act(double t, const Vec3&) override;

 private:
  std::uint64_t seed_;
  double scale_;
  int dim_;
};

// Greedy cost-maximizer for the 3D corrector game: push component i exactly
// when it increases p . sigma_dot.
class GreedyPolicyII3D : public PolicyII {
 public:
  GreedyPolicyII3D(const GameSpec& spec3d, const Vec3& p);
  Vec3 act(double t, const Vec3& sigma) override;

 private:
  const GameSpec* spec_;
  Vec3 p_;
};

// ---------------------------------------------------------------------------
// Named families.
// ---------------------------------------------------------------------------
struct PolicyIFactory {
  std::string name;
  std::function<std::unique_ptr<PolicyI>(const GameSpec&, double eps,
                                         double dt)>
      make;
};

struct PolicyIIFactory {
  std::string name;
  std::function<std::unique_ptr<PolicyII>(const GameSpec&, double eps,
                                          double dt)>
      make;
};

// The baseline families for the 2D rate experiments:
//   I:  { highway, stay, home }          II: { adversarial, zero, push,
//                                              random:<seed> }
std::pair<std::vector<PolicyIFactory>, std::vector<PolicyIIFactory>>
baseline_families(std::uint64_t seed = 1);

// II family for the 3D corrector game: { zero, ones, random, greedy }.
std::vector<PolicyIIFactory> corrector_ii_family(const Vec3& p,
                                                 std::uint64_t seed = 1);

// Name lookups used by the CLI ("random:SEED" selects the seeded member).
PolicyIFactory make_policy_i(const std::string& name);
PolicyIIFactory make_policy_ii(const std::string& name);

std::uint64_t splitmix64(std::uint64_t z);

}  // namespace hjhom
