#include <gtest/gtest.h>

#include <cmath>

#include "uwhunt/environment.hpp"
#include "uwhunt/errors.hpp"
#include "uwhunt/vehicle.hpp"

using namespace uwh;

namespace {

VehicleParams unit_params(double damping = 0.0) {
  VehicleParams p;
  p.damping_diag = Eigen::Vector3d::Constant(damping);
  return p;
}

}  // namespace

TEST(Rotation, ZeroHeadingIsIdentity) {
  EXPECT_TRUE(rotation_matrix(0.0).isApprox(Eigen::Matrix3d::Identity(), 0.0));
}

TEST(Rotation, QuarterTurn) {
  Eigen::Matrix3d expected;
  expected << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  EXPECT_LT((rotation_matrix(kPi / 2) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Rotation, OrthogonalWithUnitDeterminant) {
  Rng rng(3);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Matrix3d j = rotation_matrix(rng.uniform(-10.0, 10.0));
    EXPECT_LT((j.transpose() * j - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(j.determinant(), 1.0, 1e-12);
  }
}

TEST(Rotation, RejectsNonFinite) {
  EXPECT_THROW(rotation_matrix(std::nan("")), DomainError);
  EXPECT_THROW(rotation_matrix(INFINITY), DomainError);
}

TEST(Kinematics, AxisAlignedSurge) {
  const AgentPose p = step_kinematics({0, 0, -200, 0}, {1, 0, 0}, 1.0);
  EXPECT_DOUBLE_EQ(p.x, 1.0);
  EXPECT_DOUBLE_EQ(p.y, 0.0);
  EXPECT_DOUBLE_EQ(p.heading, 0.0);
  EXPECT_EQ(p.depth, -200.0);
}

TEST(Kinematics, SurgeAtQuarterTurnMovesAlongY) {
  const AgentPose p = step_kinematics({0, 0, 0, kPi / 2}, {1, 0, 0}, 1.0);
  EXPECT_NEAR(p.x, 0.0, 1e-15);
  EXPECT_NEAR(p.y, 1.0, 1e-15);
  EXPECT_NEAR(p.heading, kPi / 2, 1e-15);
}

TEST(Kinematics, RestLeavesPoseUnchanged) {
  const AgentPose start{3.5, -2.0, -200.0, 1.0};
  for (double dt : {0.1, 1.0, 7.0}) {
    const AgentPose p = step_kinematics(start, {0, 0, 0}, dt);
    EXPECT_EQ(p.x, start.x);
    EXPECT_EQ(p.y, start.y);
    EXPECT_EQ(p.heading, start.heading);
  }
}

TEST(Kinematics, ZeroHeadingMovesOnlyAlongBodyAxes) {
  Rng rng(9);
  for (int k = 0; k < 100; ++k) {
    const double u = rng.uniform(-2, 2), v = rng.uniform(-2, 2);
    const AgentPose p = step_kinematics({0, 0, 0, 0}, {u, v, 0}, 1.0);
    EXPECT_EQ(p.x, u);
    EXPECT_EQ(p.y, v);
  }
}

TEST(Kinematics, RejectsNonPositiveDt) {
  EXPECT_THROW(step_kinematics({}, {}, 0.0), DomainError);
}

TEST(NormalizeAngle, RangeIsHalfOpen) {
  EXPECT_DOUBLE_EQ(normalize_angle(kPi), kPi);
  EXPECT_DOUBLE_EQ(normalize_angle(-kPi), kPi);
  EXPECT_NEAR(normalize_angle(3 * kPi / 2), -kPi / 2, 1e-15);
  Rng rng(1);
  for (int k = 0; k < 1000; ++k) {
    const double a = normalize_angle(rng.uniform(-50, 50));
    EXPECT_GT(a, -kPi);
    EXPECT_LE(a, kPi);
  }
}

TEST(Dynamics, PureIntegrator) {
  ControlInput c;
  c.surge_accel = 1.0;
  const BodyVelocity v = step_dynamics({0, 0, 0}, c, {}, unit_params(), 1.0);
  EXPECT_DOUBLE_EQ(v.surge, 1.0);
  EXPECT_DOUBLE_EQ(v.sway, 0.0);
  EXPECT_DOUBLE_EQ(v.heave, 0.0);
}

TEST(Dynamics, UnitDampingStopsInOneEulerStep) {
  const BodyVelocity v = step_dynamics({1, 0, 0}, {}, {}, unit_params(1.0), 1.0);
  EXPECT_DOUBLE_EQ(v.surge, 0.0);
  EXPECT_DOUBLE_EQ(v.sway, 0.0);
}

TEST(Dynamics, DisturbanceOnly) {
  Disturbance d;
  d.force = {0.5, 0, 0};
  const BodyVelocity v = step_dynamics({0, 0, 0}, {}, d, unit_params(), 1.0);
  EXPECT_DOUBLE_EQ(v.surge, 0.5);
}

TEST(Dynamics, InertiaScalesResponse) {
  VehicleParams p = unit_params();
  p.inertia_diag = {2.0, 4.0, 1.0};
  ControlInput c;
  c.surge_accel = 1.0;
  c.sway_accel = 1.0;
  const BodyVelocity v = step_dynamics({0, 0, 0}, c, {}, p, 1.0);
  EXPECT_DOUBLE_EQ(v.surge, 0.5);
  EXPECT_DOUBLE_EQ(v.sway, 0.25);
}

TEST(Dynamics, ZeroInertiaIsConfigError) {
  VehicleParams p = unit_params();
  p.inertia_diag.x() = 0.0;
  EXPECT_THROW(step_dynamics({}, {}, {}, p, 1.0), ConfigError);
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(Dynamics, HeaveForcedToZero) {
  Disturbance d;
  d.force = {0, 0, 3.0};
  EXPECT_EQ(step_dynamics({0, 0, 1.0}, {}, d, unit_params(), 1.0).heave, 0.0);
}

TEST(Clamp, PursuerOverCapLandsOnCap) {
  const SpeedLimits lim;
  const BodyVelocity v = clamp_limits({3.0 * 0.6, 3.0 * 0.8, 0}, Role::Pursuer, lim);
  EXPECT_NEAR(v.norm(), 5 * kKnot, 1e-15);
  EXPECT_NEAR(v.surge / v.sway, 0.75, 1e-12);
  EXPECT_NEAR(5 * kKnot, 2.572, 1e-3);
}

TEST(Clamp, ZeroAndBelowCapUnchanged) {
  SpeedLimits lim;
  lim.evader = 1.0 * kKnot;
  const BodyVelocity z = clamp_limits({0, 0, 0}, Role::Evader, lim);
  EXPECT_EQ(z.norm(), 0.0);
  const BodyVelocity v = clamp_limits({0.3, 0, 0}, Role::Evader, lim);
  EXPECT_EQ(v.surge, 0.3);
}

TEST(Clamp, FuzzedStepsNeverExceedCap) {
  Rng rng(11);
  const SpeedLimits lim;
  const VehicleParams params;
  for (int k = 0; k < 2000; ++k) {
    const Role role = k % 2 ? Role::Pursuer : Role::Evader;
    AgentState a;
    a.vel = {rng.uniform(-5, 5), rng.uniform(-5, 5), 0};
    ControlInput c;
    c.surge_accel = rng.uniform(-1, 1);
    c.sway_accel = rng.uniform(-1, 1);
    c.commanded_heading = rng.uniform(-kPi / 2, kPi / 2);
    Disturbance d = sample_disturbance(rng, 0.5);
    const AgentState n = advance_agent(a, c, d, params, role, lim, 1.0);
    EXPECT_LE(n.vel.norm(), lim.cap(role) * (1 + 1e-15));
  }
}

TEST(Disturbance, ZeroBoundGivesZeroForce) {
  Rng rng(1);
  EXPECT_EQ(sample_disturbance(rng, 0.0).force.norm(), 0.0);
}

TEST(Disturbance, Deterministic) {
  Rng a(77), b(77);
  for (int k = 0; k < 100; ++k)
    EXPECT_EQ(sample_disturbance(a, 0.3).force, sample_disturbance(b, 0.3).force);
}

TEST(Disturbance, MagnitudesWithinBound) {
  Rng rng(5);
  double largest = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const Disturbance d = sample_disturbance(rng, 0.1);
    EXPECT_LE(d.force.norm(), 0.1);
    EXPECT_EQ(d.force.z(), 0.0);
    largest = std::max(largest, d.force.norm());
  }
  EXPECT_GT(largest, 0.09);
}

TEST(Disturbance, NegativeBoundRejected) {
  Rng rng(1);
  EXPECT_THROW(sample_disturbance(rng, -0.1), DomainError);
}

TEST(Controls, PursuerHeadingOutsideRangeRejected) {
  const AccelLimits acc;
  const HeadingRange range;
  Rng rng(21);
  for (int k = 0; k < 1000; ++k) {
    ControlInput c;
    c.commanded_heading = rng.uniform(-kPi, kPi);
    const bool inside = std::abs(c.commanded_heading) <= kPi / 2;
    if (inside)
      EXPECT_NO_THROW(validate_control(c, Role::Pursuer, acc, range));
    else
      EXPECT_THROW(validate_control(c, Role::Pursuer, acc, range), DomainError);
  }
}

TEST(Controls, EvaderHeadingIsNormalized) {
  Rng rng(22);
  const VehicleParams params;
  const SpeedLimits lim;
  for (int k = 0; k < 1000; ++k) {
    ControlInput c;
    c.commanded_heading = rng.uniform(-20, 20);
    EXPECT_NO_THROW(validate_control(c, Role::Evader, AccelLimits{}, HeadingRange{}));
    const AgentState n = advance_agent({}, c, {}, params, Role::Evader, lim, 1.0);
    EXPECT_GT(n.pose.heading, -kPi);
    EXPECT_LE(n.pose.heading, kPi);
    EXPECT_NEAR(std::remainder(n.pose.heading - c.commanded_heading, 2 * kPi), 0.0, 1e-9);
  }
}

TEST(Controls, AccelerationCapAndHeave) {
  const AccelLimits acc;
  ControlInput c;
  c.surge_accel = acc.pursuer * 1.01;
  EXPECT_THROW(validate_control(c, Role::Pursuer, acc, {}), DomainError);
  c.surge_accel = acc.pursuer;
  EXPECT_NO_THROW(validate_control(c, Role::Pursuer, acc, {}));
  EXPECT_THROW(validate_control(c, Role::Evader, acc, {}), DomainError);
  c.surge_accel = 0;
  c.heave_accel = 1e-3;
  EXPECT_THROW(validate_control(c, Role::Pursuer, acc, {}), DomainError);
  EXPECT_GT(acc.pursuer, acc.evader);
}

TEST(Environment, DepthBitwiseConstantOverEpisode) {
  ScenarioConfig cfg;
  Rng placement(1);
  Environment env(cfg, place_initial(cfg, placement), Rng(2));
  std::vector<ControlInput> ctrl(3);
  for (auto& c : ctrl) c.surge_accel = cfg.accel.pursuer;
  for (int k = 0; k < 200; ++k) {
    env.step(ctrl, evader_policy(env.state(), cfg));
    for (const auto& a : env.world().agents) ASSERT_EQ(a.pose.depth, -200.0);
  }
}

TEST(Environment, DisturbanceFreeRunsAreIdentical) {
  ScenarioConfig cfg;
  cfg.delay_mode = DelayMode::Off;
  cfg.disturbance_bound = 0.0;
  auto run = [&] {
    Rng placement(4);
    Environment env(cfg, place_initial(cfg, placement), Rng(8));
    std::vector<ControlInput> ctrl(3);
    for (int k = 0; k < 100; ++k) {
      for (int i = 0; i < 3; ++i) ctrl[i].commanded_heading = 0.3 * (i - 1);
      env.step(ctrl, evader_policy(env.state(), cfg));
    }
    return env.state().stacked();
  };
  EXPECT_EQ(run(), run());
}
