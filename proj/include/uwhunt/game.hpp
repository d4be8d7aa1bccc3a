#pragma once

// Joint game state, pay-off functionals and termination logic of the
// M-pursuer / one-evader hunting game.

#include <Eigen/Dense>
#include <optional>
#include <string_view>
#include <vector>

#include "uwhunt/vehicle.hpp"

namespace uwh {

using Vec2 = Eigen::Vector2d;

/// Joint position configuration s = [U_1, ..., U_M, T]. The optional
/// per-agent kinematics (index M is the target) are filled by the simulator
/// and consumed by observation encoding and CSV output.
struct GameState {
  std::vector<Vec2> pursuers;
  Vec2 target = Vec2::Zero();
  int slot = 0;
  double elapsed = 0.0;
  std::vector<double> headings;
  std::vector<BodyVelocity> velocities;

  [[nodiscard]] int num_pursuers() const { return static_cast<int>(pursuers.size()); }
  /// Stacked 2(M+1) vector in s-ordering.
  [[nodiscard]] Eigen::VectorXd stacked() const;
  /// Same ordering, all positions shifted by -origin.
  [[nodiscard]] Eigen::VectorXd stacked_relative(const Vec2& origin) const;
};

struct PayoffWeights {
  std::vector<double> alpha_d;  // per pursuer
  std::vector<double> beta_c;   // per pursuer
  double exponent_c = 0.5;

  static PayoffWeights uniform(int m, double alpha, double beta, double c);
  void validate(int m) const;
};

struct TerminationConfig {
  double safety_radius = 5.0;   // r
  double sense_radius = 80.0;   // R1
  double attack_radius = 15.0;  // R2
  double escape_value = -1.0;   // a
  double capture_value = 10.0;  // b
  int horizon = 1000;           // T_h, slots
  bool strict_escape = false;   // escape when ANY pursuer is beyond R1

  void validate() const;
};

enum class Outcome { Continue, Capture, Escape, Timeout };

std::string_view to_string(Outcome outcome);
std::optional<Outcome> outcome_from_string(std::string_view text);

/// Planar controls of one slot: commanded velocity per pursuer and for the
/// evader (earth frame, m/s).
struct Controls {
  std::vector<Vec2> pursuers;
  Vec2 target = Vec2::Zero();

  static Controls zero(int m);
};

struct TrajectoryStep {
  GameState state;
  Controls controls;
};

/// Complete (or truncated) episode. The terminal pay-off term is included
/// only when `outcome` is a terminal outcome.
struct Trajectory {
  std::vector<TrajectoryStep> steps;
  GameState final_state;
  Outcome outcome = Outcome::Continue;
  double dt = 1.0;
  Vec2 origin = Vec2::Zero();
};

struct EpisodeOutcome {
  Outcome kind = Outcome::Continue;
  GameState final_state;
  std::vector<double> per_pursuer_payoff;
  double system_payoff = 0.0;
};

/// e_i = T - U_i.
std::vector<Vec2> relative_vectors(const GameState& state);

/// g_i^d = sum_{j != i} (|U_i - U_j|^2 - r^2)^(-c). Throws SingularityError
/// when any pair is within the avoidance region (|U_i - U_j|^2 <= r^2).
double collision_penalty(const GameState& state, int i, double safety_radius, double c);

/// g_i^c = sum_{j != i} |U_i - U_j|^2.
double cohesion_penalty(const GameState& state, int i);

/// alpha_i g_i^d + beta_i g_i^c, the scalar weight on pursuer i's control.
double control_weight(const GameState& state, int i, const PayoffWeights& weights,
                      double safety_radius);

/// Sum over pursuers of |U_i - T|^-2. Throws SingularityError on coincidence.
double evader_weight(const GameState& state);

/// Per-pursuer terminal weight phi_i: 1/a past R1, 1/b inside R2; a pursuer
/// in the annulus takes the branch of the overall outcome (timeout counts as
/// escape). Throws ContractError when the game has not ended.
std::vector<double> terminal_value(const GameState& state, const TerminationConfig& cfg);

/// One-slot integrand of the system pay-off, already multiplied by dt.
double step_integrand(const GameState& state, const Controls& controls,
                      const PayoffWeights& weights, const TerminationConfig& cfg, double dt);

double pursuer_payoff(const Trajectory& traj, int i, const PayoffWeights& weights,
                      const TerminationConfig& cfg);
double target_payoff(const Trajectory& traj, int i);
double system_payoff(const Trajectory& traj, const PayoffWeights& weights,
                     const TerminationConfig& cfg);

/// Capture if any |e_i| < R2 (takes priority), escape if all |e_i| > R1
/// (any, in strict mode), timeout once slot >= T_h, otherwise continue.
Outcome check_termination(const GameState& state, const TerminationConfig& cfg);

}  // namespace uwh
