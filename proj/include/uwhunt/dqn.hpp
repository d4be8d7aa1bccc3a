#pragma once

// Delay-aware deep Q-learning for the pursuers. All pursuers share one
// network and act on their own observation of the delayed game state. The
// network estimates the discounted pay-off still to come, so the greedy
// action is the arg-min and a slot's pay-off is the negated reward.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "uwhunt/acoustics.hpp"
#include "uwhunt/config.hpp"
#include "uwhunt/environment.hpp"
#include "uwhunt/mlp.hpp"
#include "uwhunt/rng.hpp"

namespace uwh {

inline constexpr int kObservationDim = 7;
inline constexpr int kAccelLevels = 3;

using Observation = Eigen::Matrix<double, kObservationDim, 1>;

/// heading_bins evenly spaced headings over the pursuer range times the
/// surge accelerations {+cap, 0, -cap}. Index = bin * 3 + level.
struct ActionSpec {
  int heading_bins = 7;
  double accel_cap = 0.008 * kKnot;
  HeadingRange range;

  static ActionSpec from(const ScenarioConfig& config);
  [[nodiscard]] int count() const { return heading_bins * kAccelLevels; }
  [[nodiscard]] ControlInput decode(int index) const;
};

/// Pursuer i's view at slot `now`: relative target vector and mean teammate
/// offset from the state recorded floor(delay) slots ago (both over R1), its
/// own signed surge over V1 and heading over pi from the newest entry, and
/// the delay in slots over T_h. Every component is clipped to [-1, 1].
Observation encode_observation(const DelayBuffer& buffer, int now, double delay, int i,
                               const ScenarioConfig& config);

enum class ActionSource { WarmUp, Greedy, Random };

/// With probability `epsilon` the action of least predicted pay-off (lowest
/// index on ties), otherwise a uniform action.
int select_action(const Mlp& net, const Observation& obs, double epsilon, Rng& rng,
                  ActionSource* source = nullptr);

/// First index of the minimum.
int argmin_action(const Eigen::VectorXd& q);

/// Capture: b. Escape or timeout: a. While every pursuer is within
/// [R2, R1] of the target: 1 / max(floor, step pay-off at the delayed
/// state). Otherwise 0. A collision inside the safety radius makes the step
/// pay-off infinite and the reward 0.
double step_reward(const GameState& delayed, const Controls& controls, Outcome outcome,
                   const PayoffWeights& weights, const TerminationConfig& cfg, double dt,
                   double floor);

struct Transition {
  Observation obs;
  int action = 0;
  double payoff = 0.0;  // -reward
  Observation next_obs;
  bool terminal = false;
};

/// Per-pursuer closing bonus `weight * (|e_i(before)| - |e_i(after)|)`.
std::vector<double> progress_shaping(const GameState& before, const GameState& after,
                                     double weight);

/// payoff + discount * min_a' Q_target(next_obs, a'), or payoff alone on a
/// terminal transition.
double td_target(const Transition& t, const Mlp& target_net, double discount);
double td_target(double payoff, double min_next_q, bool terminal, double discount);

class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);
  void push(const Transition& t);
  [[nodiscard]] std::size_t size() const { return data_.size(); }
  [[nodiscard]] std::size_t capacity() const { return capacity_; }
  [[nodiscard]] std::size_t total_pushed() const { return pushed_; }
  /// i-th oldest retained transition.
  [[nodiscard]] const Transition& at(std::size_t i) const;
  /// Uniform sample with replacement.
  [[nodiscard]] std::vector<const Transition*> sample(std::size_t n, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  // next write position once full
  std::size_t pushed_ = 0;
  std::vector<Transition> data_;
};

/// Online network, frozen target copy, optimizer and replay memory.
struct Learner {
  Mlp online;
  Mlp target;
  Adam optimizer;
  ReplayBuffer replay;
  Rng replay_rng;
  long gradient_steps = 0;

  Learner(const DqnHyperparams& hyper, int actions, Rng& init_rng, Rng replay_stream);
  void sync_target() { target = online; }
};

/// One gradient step on a uniform batch. Returns nullopt (and does nothing)
/// while the replay holds fewer than batch_size transitions.
std::optional<double> train_step(Learner& learner, const DqnHyperparams& hyper, Rng& replay_rng);

/// Loss and parameter gradient of a fixed batch, as used by train_step.
double batch_loss(const Mlp& online, const Mlp& target, const std::vector<const Transition*>& batch,
                  double discount, Eigen::VectorXd* grad);

struct EpisodeOptions {
  bool learn = true;            // store transitions and train
  double epsilon = 0.9;         // greedy probability
  bool record_trajectory = false;
  bool record_sources = false;
};

struct EpisodeResult {
  EpisodeOutcome outcome;
  double total_reward = 0.0;
  int steps = 0;
  std::optional<double> loss_mean;
  double delay_mean_slots = 0.0;
  Trajectory trajectory;               // when record_trajectory
  std::vector<double> step_rewards;    // when record_trajectory
  std::vector<std::vector<ActionSource>> sources;  // per slot, per pursuer
  std::vector<int> delay_per_slot;
};

/// Per-episode random streams, all derived from the run seed.
struct EpisodeStreams {
  Rng placement;
  Rng disturbance;
  Rng exploration;

  static EpisodeStreams of(std::uint64_t seed, int episode);
};

/// Runs one episode of the delayed learning loop. Each slot k computes the
/// delay floor(delta); while k - delta <= t0 the pursuers take uniform
/// random actions and nothing is learned, otherwise they act on s(k - delta)
/// with epsilon-greedy selection, the slot's reward is computed and the
/// transitions go to replay (with a gradient step every train_interval
/// slots). Ends on capture, escape or the slot cap. When `learner` is only
/// read (options.learn == false) the call is safe to run concurrently.
EpisodeResult run_episode(const ScenarioConfig& config, Learner* learner, const Mlp& policy,
                          EpisodeStreams streams, const EpisodeOptions& options);

struct TrainingLogRow {
  int episode = 0;
  double total_reward = 0.0;
  int steps = 0;
  Outcome outcome = Outcome::Continue;
  double epsilon = 0.0;
  std::optional<double> loss_mean;
  double delay_mean_slots = 0.0;
  std::vector<double> payoffs;  // per pursuer
};

struct TrainingRun {
  Learner learner;
  std::vector<TrainingLogRow> log;
};

/// Fresh learner for `config` (network init from the Init stream).
TrainingRun start_training(const ScenarioConfig& config);
/// Trains for episodes [first, first + count).
void continue_training(const ScenarioConfig& config, TrainingRun& run, int first, int count);

}  // namespace uwh
