#pragma once

// Planar vehicle model: earth-fixed pose, body-frame velocity, and the
// simplified inertia/damping dynamics used for both pursuers and the evader.

#include <Eigen/Dense>
#include <array>
#include <numbers>

#include "uwhunt/rng.hpp"

namespace uwh {

inline constexpr double kPi = std::numbers::pi;
/// 1 knot = 1.852 km/h.
inline constexpr double kKnot = 1852.0 / 3600.0;
inline constexpr double kDefaultDamping = 0.001;

enum class Role { Pursuer, Evader };

struct AgentPose {
  double x = 0.0;
  double y = 0.0;
  double depth = 0.0;    // fixed for the whole episode
  double heading = 0.0;  // yaw, (-pi, pi]
};

struct BodyVelocity {
  double surge = 0.0;
  double sway = 0.0;
  double heave = 0.0;  // always 0 in the planar game

  [[nodiscard]] double norm() const;
  [[nodiscard]] Eigen::Vector3d vec() const { return {surge, sway, heave}; }
  static BodyVelocity from(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }
};

struct ControlInput {
  double surge_accel = 0.0;
  double sway_accel = 0.0;
  double heave_accel = 0.0;  // forced 0
  double commanded_heading = 0.0;

  [[nodiscard]] double accel_norm() const;
};

struct VehicleParams {
  Eigen::Vector3d inertia_diag{1.0, 1.0, 1.0};
  Eigen::Vector3d damping_diag{kDefaultDamping, kDefaultDamping, kDefaultDamping};
  bool coriolis_mode = false;
  Eigen::Vector3d restoring{0.0, 0.0, 0.0};

  /// Throws ConfigError on non-positive inertia or negative damping.
  void validate() const;
};

struct Disturbance {
  Eigen::Vector3d force{0.0, 0.0, 0.0};  // body-frame acceleration, m/s^2
  double bound = 0.0;
};

struct SpeedLimits {
  double pursuer = 5.0 * kKnot;  // V1
  double evader = 2.0 * kKnot;   // V2
  [[nodiscard]] double cap(Role role) const { return role == Role::Pursuer ? pursuer : evader; }
};

struct AccelLimits {
  double pursuer = 0.008 * kKnot;
  double evader = 0.0016 * kKnot;
  [[nodiscard]] double cap(Role role) const { return role == Role::Pursuer ? pursuer : evader; }
};

/// Allowed commanded headings: pursuers [-pi/2, pi/2], evader [-pi, pi].
struct HeadingRange {
  double lo = -kPi / 2;
  double hi = kPi / 2;
};

/// Wraps an angle into (-pi, pi].
double normalize_angle(double angle);

/// Earth-from-body rotation J(eta) for yaw `heading`. Throws DomainError if
/// heading is not finite.
Eigen::Matrix3d rotation_matrix(double heading);

/// One explicit Euler step of eta_dot = J(eta) nu. Depth is carried through
/// untouched and heading is re-normalized.
AgentPose step_kinematics(const AgentPose& pose, const BodyVelocity& vel, double dt);

/// One explicit Euler step of M nu_dot + C(nu) nu + B nu + G = p + tau_d with
/// diagonal M and B. `yaw_rate` only matters when params.coriolis_mode is set.
/// Heave is forced to zero on output.
BodyVelocity step_dynamics(const BodyVelocity& vel, const ControlInput& ctrl,
                           const Disturbance& dist, const VehicleParams& params, double dt,
                           double yaw_rate = 0.0);

/// Rescales `vel` onto the role's speed cap if it exceeds it.
BodyVelocity clamp_limits(const BodyVelocity& vel, Role role, const SpeedLimits& limits);

/// Uniform planar direction, magnitude uniform in [0, bound].
Disturbance sample_disturbance(Rng& rng, double bound);

/// Checks heading range (pursuer: reject, evader: normalized by the caller)
/// and the acceleration cap. Throws DomainError.
void validate_control(const ControlInput& ctrl, Role role, const AccelLimits& accel,
                      const HeadingRange& pursuer_range);

struct AgentState {
  AgentPose pose;
  BodyVelocity vel;
};

/// Full per-slot update of one vehicle: dynamics, speed clamp, heading
/// setpoint, kinematics.
AgentState advance_agent(const AgentState& agent, const ControlInput& ctrl,
                         const Disturbance& dist, const VehicleParams& params, Role role,
                         const SpeedLimits& limits, double dt);

/// Earth-frame planar velocity of an agent.
Eigen::Vector2d planar_velocity(const AgentState& agent);

}  // namespace uwh
