#pragma once

// CSV persistence: trajectories, training logs, consistency series and
// smoothed curves. Numbers are written with 17 significant digits so that
// reading a file back reproduces every value exactly.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "uwhunt/dqn.hpp"
#include "uwhunt/game.hpp"
#include "uwhunt/metrics.hpp"

namespace uwh {

struct TrajectoryRow {
  int episode = 0;
  int slot = 0;
  int agent_id = 0;  // pursuers 0..M-1, target M
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double speed = 0.0;
  double reward_step = 0.0;
  bool terminated = false;
};

/// One row per agent per recorded state. `step_rewards[k]` is the reward
/// of the transition into state k + 1 (may be empty); the last state is
/// flagged terminated when `outcome` ends the game.
std::vector<TrajectoryRow> trajectory_rows(int episode, const std::vector<GameState>& states,
                                           const std::vector<double>& step_rewards,
                                           Outcome outcome);

/// All states of a recorded trajectory, final state included.
std::vector<GameState> trajectory_states(const Trajectory& traj);

std::string format_number(double value);

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows);
std::vector<TrajectoryRow> read_trajectory_csv(std::istream& in);

/// Columns: episode, total_reward, steps, outcome, epsilon, loss_mean,
/// delay_mean_slots, then payoff_0 .. payoff_{M-1}.
void write_training_log(std::ostream& out, const std::vector<TrainingLogRow>& rows);
std::vector<TrainingLogRow> read_training_log(std::istream& in);

/// Columns: episode_window_end, kappa, kappa_pair_i_j for i < j, and
/// kappa_smoothed.
void write_consistency_csv(std::ostream& out, const std::vector<ConsistencyRow>& rows,
                           int num_pursuers, const std::vector<double>& smoothed);
struct ConsistencyTable {
  std::vector<ConsistencyRow> rows;
  std::vector<double> smoothed;
};
ConsistencyTable read_consistency_csv(std::istream& in);

struct CurveRow {
  int episode = 0;
  double total_reward = 0.0;
  double reward_smoothed = 0.0;
  double steps = 0.0;
  double steps_smoothed = 0.0;
  double capture = 0.0;  // 1 for a captured episode
  double capture_smoothed = 0.0;
};
void write_curve_csv(std::ostream& out, const std::vector<CurveRow>& rows);
std::vector<CurveRow> read_curve_csv(std::istream& in);

/// Writes `content` to `path` via a sibling temporary file and rename.
void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace uwh
