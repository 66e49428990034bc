#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "hjhom/engine.hpp"
#include "hjhom/policy.hpp"

using namespace hjhom;

TEST_CASE("highway policy: initial wait and trigger state") {
  GameSpec g = make_game_2d(paper_profile());
  double eps = 1e-4, dt = eps / 200.0;
  HighwayPolicyI pi(g, eps, dt);

  Vec3 a = pi.act(0.0, {0.0, 0.0, 0.0});
  CHECK(a == Vec3{0.0, 0.0, 0.0});
  CHECK(pi.mode() == HighwayPolicyI::WaitOutbound);

  double se = std::sqrt(eps);
  CHECK(!pi.hit(0.0, {0.5 * se, 0.0, 0.0}));
  CHECK(pi.hit(0.1, {se, 0.0, 0.0}));  // tie at the threshold fires

  Vec3 sigma{se, 0.0, 0.0};
  pi.on_event(0.1, sigma);
  CHECK(pi.mode() == HighwayPolicyI::Climb);
  CHECK(pi.act(0.1, sigma) == Vec3{0.0, 1.0, 0.0});
  CHECK(pi.scheduled_event() == doctest::Approx(0.1 + eps / 4.0));
  CHECK(pi.switch_count() == 1);
}

TEST_CASE("highway policy rejects eps outside (0, 1/4)") {
  GameSpec g = make_game_2d(paper_profile());
  CHECK_THROWS_AS(HighwayPolicyI(g, 0.3, 1e-4), PreconditionError);
  CHECK_THROWS_AS(HighwayPolicyI(g, 0.0, 1e-4), PreconditionError);
}

TEST_CASE("climb covers exactly half a cell in eps/4 time") {
  GameSpec g = make_game_2d(paper_profile());
  double eps = 1.0 / 1024.0, dt = eps / 200.0;
  HighwayPolicyI pi(g, eps, dt);
  ConstantPolicyII pii({1.0, 0.0, 0.0});  // full push
  Trajectory tr = integrate(g, eps, pi, pii, 1.0, dt);

  // after the first climb the state sits exactly on the eps/2 highway
  bool saw_climb = false;
  for (const auto& ph : tr.phases) {
    if (ph.mode == HighwayPolicyI::Climb) {
      saw_climb = true;
      CHECK(ph.t_end - ph.t_begin == doctest::Approx(eps / 4.0).epsilon(1e-12));
    }
  }
  CHECK(saw_climb);
  CHECK(tr.max_x2 == doctest::Approx(eps / 2.0).epsilon(1e-12));
  CHECK(tr.min_x2 >= -1e-15);
}

TEST_CASE("adversarial control: named decisions") {
  GameSpec g = make_game_2d(paper_profile());
  double eps = 1e-4;
  double se = std::sqrt(eps);
  AdversarialPolicyII pii(g, eps);

  // near the origin it always pushes
  CHECK(pii.act(0.0, {0.0, 0.0, 0.0}) == Vec3{1.0, 0.0, 0.0});
  // far out on the outbound highway: pushing raises u0, so push
  CHECK(pii.act(0.0, {3.0 * se, 0.0, 0.0}) == Vec3{1.0, 0.0, 0.0});
  // far out on the inbound highway: pushing would shrink u0, so idle
  CHECK(pii.act(0.0, {3.0 * se, eps / 2.0, 0.0}) == Vec3{0.0, 0.0, 0.0});
}

TEST_CASE("adversarial control never pushes toward smaller u0 when far out") {
  GameSpec g = make_game_2d(paper_profile());
  double eps = 1e-4, dt = eps / 200.0;
  double threshold = 2.0 * std::sqrt(eps);
  // the stay baseline lets the adversary drag the state far beyond the
  // 2 sqrt(eps) band, exercising the outward-push clause
  StayPolicyI pi;
  AdversarialPolicyII pii(g, eps);
  IntegrateOptions opt;
  opt.record_stride = 16;
  Trajectory tr = integrate(g, eps, pi, pii, 1.0, dt, opt);
  int far_pushes = 0;
  for (const auto& s : tr.samples) {
    if (g.initial_data(s.x) < threshold) continue;
    if (s.b.x == 0.0) continue;
    Spatial2D sp = g.spatial_2d(s.x.y / eps);
    double push_dir = sp.delta_phi;  // sign of the available push
    if (push_dir != 0.0) {
      CHECK(s.x.x * push_dir >= 0.0);
      ++far_pushes;
    }
  }
  CHECK(far_pushes > 0);
}

TEST_CASE("corrector policy: axis choice and cruise actions") {
  GameSpec g = make_game_3d(paper_profile());
  const double dt = 1.0 / 200.0;

  CorrectorPolicyI3D zero(g, {0.0, 0.0, 0.0}, dt);
  CHECK(zero.cruise_action() == Vec3{0.0, 0.0, 0.0});

  // |gamma| = 1 > 1/2: bang-bang at full radius
  CorrectorPolicyI3D one(g, {1.0, 0.0, 0.0}, dt);
  CHECK(one.axis() == 1);
  CHECK(one.cruise_action() == Vec3{-2.0, 0.0, 0.0});

  // below the kink the optimal magnitude is zero
  CorrectorPolicyI3D quarter(g, {0.25, 0.0, 0.0}, dt);
  CHECK(quarter.cruise_action() == Vec3{0.0, 0.0, 0.0});

  // clamp at the action radius, sign follows -sgn(gamma)
  CorrectorPolicyI3D minus3(g, {-3.0, 0.0, 0.0}, dt);
  CHECK(minus3.cruise_action() == Vec3{2.0, 0.0, 0.0});

  // mixed momentum: the axis with the largest h(p_i) wins
  CorrectorPolicyI3D mixed(g, {0.4, -1.5, 0.9}, dt);
  CHECK(mixed.axis() == 2);
  CHECK(mixed.cruise_action() == Vec3{0.0, 2.0, 0.0});
}

TEST_CASE("baseline families: sizes and reproducibility") {
  auto [fi, fii] = baseline_families(123);
  CHECK(fi.size() == 3);
  CHECK(fii.size() == 4);

  GameSpec g = make_game_2d(paper_profile());
  double eps = 1e-3;
  auto b1 = fii[3].make(g, eps, eps / 200.0);
  auto b2 = fii[3].make(g, eps, eps / 200.0);
  for (int k = 0; k < 1000; ++k) {
    double t = k * 1.7e-4;
    Vec3 v1 = b1->act(t, {0.0, 0.0, 0.0});
    Vec3 v2 = b2->act(t, {0.0, 0.0, 0.0});
    CHECK(v1 == v2);
    CHECK((v1.x == 0.0 || v1.x == 1.0));
  }
}

TEST_CASE("stay vs zero never moves") {
  GameSpec g = make_game_2d(paper_profile());
  double eps = 1e-3;
  StayPolicyI pi;
  ZeroPolicyII pii;
  Trajectory tr = integrate(g, eps, pi, pii, 1.0, eps / 200.0);
  CHECK(tr.final_state == Vec3{0.0, 0.0, 0.0});
  CHECK(tr.running_cost == 0.0);
  CHECK(tr.total_cost() == 0.0);
}

TEST_CASE("policy name lookup") {
  CHECK(make_policy_i("highway").name == "highway");
  CHECK(make_policy_i("stay").name == "stay");
  CHECK(make_policy_i("home").name == "home");
  CHECK_THROWS_AS(make_policy_i("nope"), PreconditionError);
  CHECK(make_policy_ii("adversarial").name == "adversarial");
  CHECK(make_policy_ii("random:17").name == "random:17");
  CHECK_THROWS_AS(make_policy_ii("nope"), PreconditionError);
}
