#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "hjhom/game.hpp"

using namespace hjhom;

TEST_CASE("2D game: named cost and transition values") {
  GameSpec g = make_game_2d(paper_profile());
  CHECK(g.dim == 2);
  CHECK(g.action_radius == 1.0);

  // on the origin highway with a = 0 the cost vanishes for any b
  for (double b1 : {0.0, 0.3, 1.0})
    CHECK(g.running_cost({0.0, 0.0, 0.0}, {0.0, 0.0, 0.0},
                         {b1, 0.0, 0.0}) == 0.0);

  Vec3 f = g.transition({0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {1.0, 0.0, 0.0});
  CHECK(f.x == doctest::Approx(1.0));
  CHECK(f.y == 0.0);

  // off the highways both terms price in
  CHECK(g.running_cost({0.0, 0.25, 0.0}, {1.0, 0.0, 0.0},
                       {0.7, 0.0, 0.0}) == doctest::Approx(200.0));

  CHECK(g.initial_data({0.3, 9.0, 0.0}) == doctest::Approx(0.3));
  CHECK(g.initial_data({-4.0, 0.0, 0.0}) == 1.0);
}

TEST_CASE("3D game: named cost and transition values") {
  GameSpec g = make_game_3d(paper_profile());
  CHECK(g.dim == 3);
  CHECK(g.action_radius == 2.0);

  Vec3 a{0.3, -0.2, 0.1};
  Vec3 f = g.transition({0.0, 0.0, 0.0}, a, {0.0, 0.0, 0.0});
  CHECK(f.x == doctest::Approx(200.0 * a.x));
  CHECK(f.y == doctest::Approx(200.0 * a.y));
  CHECK(f.z == doctest::Approx(200.0 * a.z));

  CHECK(g.running_cost({0.0, 0.0, 0.0}, {0.0, 0.0, 0.0},
                       {1.0, 1.0, 1.0}) == 0.0);

  // oracle for the shifted-lattice push: direct evaluation through
  // phi_vec_3d gives phi~(x) = 0 and phi~(x + 1/2) = (1, 0, 0) here,
  // so f = b (.) (0 - (1,0,0)) = (-1, 0, 0).
  Vec3 fb = g.transition({0.5, 0.5, 0.5}, {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
  Vec3 p0 = phi_vec_3d({0.5, 0.5, 0.5}, g.profile);
  Vec3 p1 = phi_vec_3d(Vec3{0.5, 0.5, 0.5} + HighwayLattice::half_shift,
                       g.profile);
  CHECK(fb.x == doctest::Approx(p0.x - p1.x));
  CHECK(fb.y == doctest::Approx(p0.y - p1.y));
  CHECK(fb.z == doctest::Approx(p0.z - p1.z));
  CHECK(fb.x == doctest::Approx(-1.0));
  CHECK(fb.y == 0.0);
  CHECK(fb.z == 0.0);
}

TEST_CASE("sampled boundedness and periodicity of R and f") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> s(-1.0, 1.0);
  std::uniform_int_distribution<int> z(-2, 2);

  GameSpec g2 = make_game_2d(paper_profile());
  GameSpec g3 = make_game_3d(paper_profile());
  for (int k = 0; k < 2000; ++k) {
    Vec3 x{u(rng), u(rng), u(rng)};
    Vec3 shift{double(z(rng)), double(z(rng)), double(z(rng))};
    Vec3 a2{s(rng), s(rng), 0.0};
    if (norm(a2) > 1.0) a2 = (1.0 / norm(a2)) * a2;
    Vec3 b2{u(rng), 0.0, 0.0};
    Vec3 x2{x.x, x.y, 0.0};
    Vec3 shift2{shift.x, shift.y, 0.0};

    double r = g2.running_cost(x2, a2, b2);
    CHECK(r >= 0.0);
    CHECK(r <= 200.0 + 100.0 * 1.0 + 1e-9);
    CHECK(norm(g2.transition(x2, a2, b2)) <= 2.0 * 1.0 + 1.0 + 1e-9);
    CHECK(g2.running_cost(x2 + shift2, a2, b2) == doctest::Approx(r));
    Vec3 f0 = g2.transition(x2, a2, b2);
    Vec3 f1 = g2.transition(x2 + shift2, a2, b2);
    CHECK(norm(f0 - f1) <= 1e-12);

    Vec3 a3 = 2.0 * Vec3{s(rng), s(rng), s(rng)};
    if (norm(a3) > 2.0) a3 = (2.0 / norm(a3)) * a3;
    Vec3 b3{u(rng), u(rng), u(rng)};
    double r3 = g3.running_cost(x, a3, b3);
    CHECK(r3 >= 0.0);
    CHECK(r3 <= 200.0 + 100.0 * 2.0 + 1e-9);
    CHECK(norm(g3.transition(x, a3, b3)) <=
          2.0 * (1.0 + 99.0 * 3.0) * 2.0 + std::sqrt(3.0));
    CHECK(g3.running_cost(x + shift, a3, b3) == doctest::Approx(r3));
    Vec3 g0 = g3.transition(x, a3, b3);
    Vec3 g1 = g3.transition(x + shift, a3, b3);
    // |f| reaches ~800, so compare at a scale-aware tolerance
    CHECK(norm(g0 - g1) <= 1e-12 * (1.0 + norm(g0)));
  }
}

TEST_CASE("2D closed form: named values") {
  BumpProfile prof = paper_profile();
  CHECK(hamiltonian_closed_form_2d({0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, prof) ==
        0.0);
  CHECK(hamiltonian_closed_form_2d({0.0, 0.25, 0.0}, {0.0, 0.0, 0.0},
                                   prof) == doctest::Approx(-100.0));
  CHECK(hamiltonian_closed_form_2d({0.0, 0.0, 0.0}, {10.0, 0.0, 0.0},
                                   prof) == doctest::Approx(-9.0));
  CHECK(hamiltonian_closed_form_2d({0.0, 0.25, 0.0}, {200.0, 0.0, 0.0},
                                   prof) == doctest::Approx(200.0));
}

TEST_CASE("3D closed form: named values") {
  BumpProfile prof = paper_profile();
  CHECK(hamiltonian_closed_form_3d({0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, prof) ==
        0.0);
  CHECK(hamiltonian_closed_form_3d({0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, prof) ==
        doctest::Approx(199.0));
  CHECK(hamiltonian_closed_form_3d({0.4, 0.4, 0.0}, {0.0, 0.0, 0.0}, prof) ==
        doctest::Approx(-100.0));
}

TEST_CASE("closed forms are Z^d periodic and 2D ignores x1") {
  BumpProfile prof = paper_profile();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> up(-20.0, 20.0);
  std::uniform_int_distribution<int> z(-3, 3);
  for (int k = 0; k < 1000; ++k) {
    Vec3 x{u(rng), u(rng), u(rng)};
    Vec3 p{up(rng), up(rng), up(rng)};
    Vec3 shift{double(z(rng)), double(z(rng)), double(z(rng))};

    Vec3 x2{x.x, x.y, 0.0};
    Vec3 p2{p.x, p.y, 0.0};
    double h2 = hamiltonian_closed_form_2d(x2, p2, prof);
    CHECK(hamiltonian_closed_form_2d(x2 + Vec3{shift.x, shift.y, 0.0}, p2,
                                     prof) == doctest::Approx(h2).epsilon(1e-12));
    // independent of x1, bitwise
    CHECK(hamiltonian_closed_form_2d({x.x + 0.37, x.y, 0.0}, p2, prof) == h2);

    double h3 = hamiltonian_closed_form_3d(x, p, prof);
    CHECK(hamiltonian_closed_form_3d(x + shift, p, prof) ==
          doctest::Approx(h3).epsilon(1e-12));
  }
}

TEST_CASE("min-max oracle agrees with the closed forms") {
  GameSpec g2 = make_game_2d(paper_profile());

  CHECK_THROWS_AS(hamiltonian_minmax_oracle(g2, {0, 0, 0}, {0, 0, 0}, 1,
                                            HamiltonianOrder::Upper),
                  PreconditionError);

  // exact optimum on-grid at modest resolution
  CHECK(hamiltonian_minmax_oracle(g2, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, 50,
                                  HamiltonianOrder::Upper) ==
        doctest::Approx(0.0).epsilon(0.05));

  CHECK(hamiltonian_minmax_oracle(g2, {0.0, 0.0, 0.0}, {10.0, 0.0, 0.0}, 400,
                                  HamiltonianOrder::Upper) ==
        doctest::Approx(-9.0).epsilon(0.02));

  // error decreases monotonically (up to round-off) on fixed probes
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> up(-15.0, 15.0);
  for (int k = 0; k < 20; ++k) {
    Vec3 x{u(rng), u(rng), 0.0};
    Vec3 p{up(rng), up(rng), 0.0};
    double closed = hamiltonian_closed_form_2d(x, p, g2.profile);
    double e100 = std::fabs(
        hamiltonian_minmax_oracle(g2, x, p, 100, HamiltonianOrder::Upper) -
        closed);
    double e400 = std::fabs(
        hamiltonian_minmax_oracle(g2, x, p, 400, HamiltonianOrder::Upper) -
        closed);
    CHECK(e400 <= 5e-2);
    CHECK(e400 <= e100 + 1e-9);
  }
}

TEST_CASE("3D oracle at exact-on-grid probes") {
  GameSpec g3 = make_game_3d(paper_profile());
  OracleResult r =
      hamiltonian_minmax_both(g3, {0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, 24);
  CHECK(r.upper == doctest::Approx(199.0).epsilon(1e-6));
  CHECK(r.lower == doctest::Approx(199.0).epsilon(1e-6));

  OracleResult r0 =
      hamiltonian_minmax_both(g3, {0.4, 0.4, 0.0}, {0.0, 0.0, 0.0}, 16);
  CHECK(r0.upper == doctest::Approx(-100.0).epsilon(1e-9));
}

TEST_CASE("Isaacs gap bounded by the refinement delta") {
  GameSpec g2 = make_game_2d(paper_profile());
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> up(-20.0, 20.0);
  for (int k = 0; k < 10; ++k) {
    Vec3 x{u(rng), u(rng), 0.0};
    Vec3 p{up(rng), up(rng), 0.0};
    OracleResult coarse = hamiltonian_minmax_both(g2, x, p, 100);
    OracleResult fine = hamiltonian_minmax_both(g2, x, p, 200);
    double gap = std::fabs(coarse.upper - coarse.lower);
    double delta = std::max(std::fabs(fine.upper - coarse.upper),
                            std::fabs(fine.lower - coarse.lower));
    CHECK(gap <= 2.0 * delta + 1e-9);
  }
}

TEST_CASE("coercivity probe: lower bounds and divergence") {
  GameSpec g2 = make_game_2d(paper_profile());
  std::vector<double> radii{150.0, 200.0, 300.0, 400.0};
  std::vector<double> mins = coercivity_probe(g2, radii);
  REQUIRE(mins.size() == radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i)
    CHECK(mins[i] >= radii[i] - 300.0 - 1e-9);
  // sampled min at r = 200 is the analytic worst case 100
  CHECK(mins[1] >= 100.0 - 1e-9);
  CHECK(mins[1] <= 102.0);
  // strictly increasing beyond r = 150
  for (std::size_t i = 1; i < mins.size(); ++i) CHECK(mins[i] > mins[i - 1]);

  GameSpec g3 = make_game_3d(paper_profile());
  std::vector<double> m3 = coercivity_probe(g3, {200.0});
  double r = 200.0;
  CHECK(m3[0] >= 4.0 * r - 200.0 - std::sqrt(3.0) * r - 100.0);
}
