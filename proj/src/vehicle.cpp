#include "uwhunt/vehicle.hpp"

#include <cmath>

#include "uwhunt/errors.hpp"

namespace uwh {

double BodyVelocity::norm() const { return std::sqrt(surge * surge + sway * sway + heave * heave); }

double ControlInput::accel_norm() const {
  return std::sqrt(surge_accel * surge_accel + sway_accel * sway_accel +
                   heave_accel * heave_accel);
}

void VehicleParams::validate() const {
  for (int k = 0; k < 3; ++k) {
    if (!(inertia_diag[k] > 0.0)) throw ConfigError("vehicles.inertia: entries must be > 0");
    if (!(damping_diag[k] >= 0.0)) throw ConfigError("vehicles.damping: entries must be >= 0");
  }
}

double normalize_angle(double angle) {
  double a = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

Eigen::Matrix3d rotation_matrix(double heading) {
  if (!std::isfinite(heading)) throw DomainError("rotation_matrix: heading is not finite");
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  Eigen::Matrix3d j;
  j << c, -s, 0.0,  //
      s, c, 0.0,    //
      0.0, 0.0, 1.0;
  return j;
}

AgentPose step_kinematics(const AgentPose& pose, const BodyVelocity& vel, double dt) {
  if (!(dt > 0.0)) throw DomainError("step_kinematics: dt must be > 0");
  const double c = std::cos(pose.heading);
  const double s = std::sin(pose.heading);
  AgentPose next = pose;
  next.x += (c * vel.surge - s * vel.sway) * dt;
  next.y += (s * vel.surge + c * vel.sway) * dt;
  // Third row of J maps heave to the yaw slot; heave is pinned to 0 in the
  // planar game so heading only changes through the setpoint.
  next.heading = normalize_angle(pose.heading + vel.heave * dt);
  return next;
}

BodyVelocity step_dynamics(const BodyVelocity& vel, const ControlInput& ctrl,
                           const Disturbance& dist, const VehicleParams& params, double dt,
                           double yaw_rate) {
  if (!(dt > 0.0)) throw DomainError("step_dynamics: dt must be > 0");
  for (int k = 0; k < 3; ++k) {
    if (!(params.inertia_diag[k] > 0.0))
      throw ConfigError("step_dynamics: inertia entry must be > 0");
  }
  const Eigen::Vector3d nu = vel.vec();
  const Eigen::Vector3d p{ctrl.surge_accel, ctrl.sway_accel, 0.0};
  Eigen::Vector3d coriolis = Eigen::Vector3d::Zero();
  if (params.coriolis_mode) {
    const auto& m = params.inertia_diag;
    coriolis = {-m[1] * nu[1] * yaw_rate, m[0] * nu[0] * yaw_rate, 0.0};
  }
  const Eigen::Vector3d damping = params.damping_diag.cwiseProduct(nu);
  const Eigen::Vector3d rhs = p + dist.force - damping - coriolis - params.restoring;
  Eigen::Vector3d next = nu + rhs.cwiseQuotient(params.inertia_diag) * dt;
  next.z() = 0.0;
  return BodyVelocity::from(next);
}

BodyVelocity clamp_limits(const BodyVelocity& vel, Role role, const SpeedLimits& limits) {
  const double cap = limits.cap(role);
  const double n = vel.norm();
  if (n <= cap || n == 0.0) return vel;
  const double k = cap / n;
  return {vel.surge * k, vel.sway * k, vel.heave * k};
}

Disturbance sample_disturbance(Rng& rng, double bound) {
  if (!(bound >= 0.0)) throw DomainError("sample_disturbance: bound must be >= 0");
  Disturbance d;
  d.bound = bound;
  // Always consume two draws so the stream position does not depend on bound.
  const double angle = rng.uniform(-kPi, kPi);
  const double mag = rng.uniform() * bound;
  d.force = {mag * std::cos(angle), mag * std::sin(angle), 0.0};
  return d;
}

void validate_control(const ControlInput& ctrl, Role role, const AccelLimits& accel,
                      const HeadingRange& pursuer_range) {
  constexpr double kTol = 1e-12;
  if (!std::isfinite(ctrl.commanded_heading))
    throw DomainError("control: commanded heading is not finite");
  if (role == Role::Pursuer && (ctrl.commanded_heading < pursuer_range.lo - kTol ||
                                ctrl.commanded_heading > pursuer_range.hi + kTol)) {
    throw DomainError("control: pursuer heading outside its movement range");
  }
  if (ctrl.heave_accel != 0.0) throw DomainError("control: heave acceleration must be 0");
  if (ctrl.accel_norm() > accel.cap(role) * (1.0 + kTol))
    throw DomainError("control: acceleration exceeds the role cap");
}

AgentState advance_agent(const AgentState& agent, const ControlInput& ctrl,
                         const Disturbance& dist, const VehicleParams& params, Role role,
                         const SpeedLimits& limits, double dt) {
  const double heading = normalize_angle(ctrl.commanded_heading);
  const double yaw_rate = normalize_angle(heading - agent.pose.heading) / dt;
  AgentState next;
  next.vel = clamp_limits(step_dynamics(agent.vel, ctrl, dist, params, dt, yaw_rate), role,
                          limits);
  AgentPose pose = agent.pose;
  pose.heading = heading;
  next.pose = step_kinematics(pose, next.vel, dt);
  return next;
}

Eigen::Vector2d planar_velocity(const AgentState& agent) {
  const double c = std::cos(agent.pose.heading);
  const double s = std::sin(agent.pose.heading);
  return {c * agent.vel.surge - s * agent.vel.sway, s * agent.vel.surge + c * agent.vel.sway};
}

}  // namespace uwh
