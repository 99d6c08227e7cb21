#include <doctest.h>

#include "samarl/kinematics.hpp"
#include "samarl/orca.hpp"

using namespace samarl;

TEST_CASE("unconstrained solve returns the preferred velocity") {
  const Vec2 v = solve_velocity({0.7, -0.2}, {}, 2.0);
  CHECK(v.x == doctest::Approx(0.7));
  CHECK(v.y == doctest::Approx(-0.2));
}

TEST_CASE("speed cap projects the preferred velocity onto the disc") {
  const Vec2 v = solve_velocity({3.0, 4.0}, {}, 1.0);
  CHECK(v.norm() == doctest::Approx(1.0));
  CHECK(v.x == doctest::Approx(0.6));
  CHECK(v.y == doctest::Approx(0.8));
}

TEST_CASE("a single half-plane clips the infeasible component") {
  // forbid velocities with x > 0.5: plane through (0.5, 0), normal (-1, 0)
  std::vector<HalfPlane> planes{{{0.5, 0.0}, {-1.0, 0.0}}};
  const Vec2 v = solve_velocity({1.0, 0.3}, planes, 2.0);
  CHECK(v.x == doctest::Approx(0.5));
  CHECK(v.y == doctest::Approx(0.3));
}

TEST_CASE("static neighbor dead ahead produces a braking half-plane") {
  PublicState self;
  self.p = {0.0, 0.0};
  self.v = {1.0, 0.0};
  PublicState other;
  other.p = {2.0, 0.0};
  other.v = {0.0, 0.0};
  OrcaParams params;
  const auto planes = orca_halfplanes(self, self.rho, {other}, params, 0.25);
  REQUIRE(planes.size() == 1);
  // normal must push the velocity away from the line of sight (+x)
  CHECK(planes[0].normal.x < 0.0);
  CHECK(planes[0].normal.norm() == doctest::Approx(1.0));
}

TEST_CASE("symmetric head-on agents pass without contact") {
  OrcaParams params;
  const double dt = 0.25;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    AgentState a, b;
    const double jitter = 1e-4 * static_cast<double>(seed % 7);
    a.pub.p = {-4.0, jitter};
    a.prv.goal = {4.0, jitter};
    b.pub.p = {4.0, -jitter};
    b.prv.goal = {-4.0, -jitter};
    a.prv.v_pref = b.prv.v_pref = 1.0;

    double min_dist = 1e9;
    for (int t = 0; t < 100; ++t) {
      const Vec2 va = orca_policy(a, {b.pub}, params, dt, 1.0);
      const Vec2 vb = orca_policy(b, {a.pub}, params, dt, 1.0);
      a.pub = integrate_human(a.pub, va, 1.0, dt);
      b.pub = integrate_human(b.pub, vb, 1.0, dt);
      min_dist = std::min(min_dist, (a.pub.p - b.pub.p).norm());
    }
    CHECK(min_dist > a.pub.rho + b.pub.rho);
    CHECK((a.pub.p - a.prv.goal).norm() < 0.5);
    CHECK((b.pub.p - b.prv.goal).norm() < 0.5);
  }
}

TEST_CASE("mirror-symmetric crossing configurations stay symmetric") {
  OrcaParams params;
  AgentState a, b;
  a.pub.p = {-3.0, 1.0};
  a.pub.v = {1.0, 0.0};
  a.prv.goal = {3.0, 1.0};
  b.pub.p = {-3.0, -1.0};
  b.pub.v = {1.0, 0.0};
  b.prv.goal = {3.0, -1.0};
  a.prv.v_pref = b.prv.v_pref = 1.0;
  const Vec2 va = orca_policy(a, {b.pub}, params, 0.25, 1.0);
  const Vec2 vb = orca_policy(b, {a.pub}, params, 0.25, 1.0);
  // the fixed tie-break rotation is the only asymmetry allowed
  CHECK(va.x == doctest::Approx(vb.x).epsilon(1e-2));
  CHECK(va.y == doctest::Approx(-vb.y).epsilon(1e-2));
}

TEST_CASE("human at its goal has zero preferred velocity") {
  AgentState h;
  h.pub.p = {1.0, 1.0};
  h.prv.goal = {1.0, 1.0};
  h.prv.v_pref = 1.0;
  const Vec2 v = human_policy(h, {}, OrcaParams{}, 0.25);
  CHECK(v.norm() == doctest::Approx(0.0));
}

TEST_CASE("neighbor filtering keeps only the nearest max_neighbors") {
  PublicState self;
  self.p = {0.0, 0.0};
  OrcaParams params;
  params.max_neighbors = 2;
  std::vector<PublicState> far;
  for (int i = 0; i < 5; ++i) {
    PublicState n;
    n.p = {2.0 + i * 0.5, 0.0};
    far.push_back(n);
  }
  const auto planes = orca_halfplanes(self, self.rho, far, params, 0.25);
  CHECK(planes.size() == 2);
}
