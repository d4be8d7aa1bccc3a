#pragma once

// Scenario configuration: every tunable of the game, the vehicles, the
// acoustic channel and the learner, with defaults equal to the reference
// scenario (three pursuers, 40 m initial distance, 1000 slots).

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>

#include "uwhunt/acoustics.hpp"
#include "uwhunt/dqn_types.hpp"
#include "uwhunt/game.hpp"
#include "uwhunt/vehicle.hpp"

namespace uwh {

enum class DelayMode { Off, Acoustic };

struct ScenarioConfig {
  std::uint64_t seed = 1;

  // [scenario]
  Eigen::Vector3d start_point{400.0, 400.0, -200.0};
  int num_pursuers = 3;
  double initial_distance = 40.0;
  double slot_seconds = 1.0;

  // [vehicles], stored in SI units
  SpeedLimits speed;
  AccelLimits accel;
  HeadingRange pursuer_heading{-kPi / 2, kPi / 2};
  HeadingRange evader_heading{-kPi, kPi};
  double initial_speed_pursuer = 1.0 * kKnot;
  double initial_speed_target = 1.0 * kKnot;
  VehicleParams vehicle;
  double disturbance_bound = 0.001;

  // [game]
  TerminationConfig termination;
  double constraint_c = 0.5;
  double alpha_d = 1.0;
  double beta_c = 1.0;

  // [acoustics]
  WaterColumn water;
  DelayMode delay_mode = DelayMode::Acoustic;
  double delay_scale = 1.0;

  // [analytic]
  double length_scale = 90.0;
  double riccati_step = 1.0;
  double lookahead = 0.0;  // seconds; 0 = remaining episode horizon

  DqnHyperparams dqn;

  // [metrics]
  int smoothing_window = 51;
  int kendall_window = 100;
  bool kendall_pair_normalized = false;

  [[nodiscard]] Vec2 origin() const { return start_point.head<2>(); }
  [[nodiscard]] double depth() const { return start_point.z(); }
  [[nodiscard]] PayoffWeights weights() const;

  /// Throws ConfigError naming the offending key(s).
  void validate() const;
};

/// Parses TOML-syntax text (tables, scalars, numeric arrays). Unknown keys
/// and type mismatches are rejected with the full key path.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Canonical TOML rendering of every value; parse_config round-trips it.
std::string to_toml(const ScenarioConfig& config);

/// FNV-1a of the canonical rendering, as 16 hex digits.
std::string config_hash(const ScenarioConfig& config);

std::string_view to_string(DelayMode mode);

}  // namespace uwh
