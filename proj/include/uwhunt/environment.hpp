#pragma once

// The simulated world shared by the analytic controller and the learner:
// vehicle states, seeded disturbances, acoustic delay and termination.

#include <span>
#include <vector>

#include "uwhunt/config.hpp"
#include "uwhunt/game.hpp"
#include "uwhunt/rng.hpp"
#include "uwhunt/vehicle.hpp"

namespace uwh {

/// Vehicles 0..M-1 are pursuers, vehicle M is the target.
struct World {
  std::vector<AgentState> agents;
  int slot = 0;
};

GameState snapshot(const World& world, double slot_seconds);

/// Initial placement: pursuers evenly spaced on a circle of radius 2r around
/// O (wider if needed to keep every pair outside r), target at a uniform
/// angle on the circle of radius `initial_distance`. Pursuers start moving
/// toward the target at their initial speed; the target gets a uniform
/// random heading.
World place_initial(const ScenarioConfig& config, Rng& rng);

/// Maps a desired earth-frame planar velocity to a rate-limited control:
/// heading setpoint within the role's range plus a capped surge/sway
/// acceleration toward the desired speed.
ControlInput command_velocity(const AgentState& agent, const Vec2& desired, Role role,
                              const ScenarioConfig& config);

/// Default evader: heading straight away from the pursuer centroid (heading
/// 0 when the centroid coincides with the target), full acceleration.
ControlInput evader_policy(const GameState& state, const ScenarioConfig& config);

class Environment {
 public:
  Environment(const ScenarioConfig& config, World initial, Rng disturbance_rng);

  [[nodiscard]] const World& world() const { return world_; }
  [[nodiscard]] const ScenarioConfig& config() const { return *config_; }
  [[nodiscard]] GameState state() const { return snapshot(world_, config_->slot_seconds); }
  [[nodiscard]] int num_pursuers() const { return config_->num_pursuers; }
  /// |nu| per vehicle, pursuers first.
  [[nodiscard]] std::vector<double> speeds() const;
  [[nodiscard]] double sound_speed() const { return sound_; }
  /// Average acoustic delay (seconds, already scaled), 0 when delay is off.
  [[nodiscard]] double current_delay() const;
  [[nodiscard]] Outcome termination() const;

  /// Advances all vehicles by one slot. Controls are validated first.
  void step(std::span<const ControlInput> pursuer_controls, const ControlInput& evader_control);

 private:
  const ScenarioConfig* config_;
  World world_;
  Rng disturbance_rng_;
  double sound_;
};

}  // namespace uwh
