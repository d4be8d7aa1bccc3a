#include "uwhunt/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uwhunt/errors.hpp"

namespace uwh {

ActionSpec ActionSpec::from(const ScenarioConfig& config) {
  return {config.dqn.heading_bins, config.accel.pursuer, config.pursuer_heading};
}

ControlInput ActionSpec::decode(int index) const {
  if (index < 0 || index >= count())
    throw DomainError("ActionSpec::decode: index " + std::to_string(index) + " out of range");
  const int bin = index / kAccelLevels;
  const int level = index % kAccelLevels;
  ControlInput c;
  c.commanded_heading =
      heading_bins == 1 ? 0.5 * (range.lo + range.hi)
                        : range.lo + (range.hi - range.lo) * bin / (heading_bins - 1);
  c.surge_accel = level == 0 ? accel_cap : (level == 1 ? 0.0 : -accel_cap);
  return c;
}

Observation encode_observation(const DelayBuffer& buffer, int now, double delay, int i,
                               const ScenarioConfig& config) {
  const DelayedView view = delayed_view(buffer, now, delay);
  const GameState& past = *view.state;
  const GameState& live = buffer.newest();
  const int m = past.num_pursuers();
  if (i < 0 || i >= m) throw DomainError("encode_observation: pursuer index out of range");
  const double r1 = config.termination.sense_radius;

  Observation o;
  const Vec2 e = (past.target - past.pursuers[i]) / r1;
  Vec2 mate = Vec2::Zero();
  for (int j = 0; j < m; ++j)
    if (j != i) mate += past.pursuers[j] - past.pursuers[i];
  if (m > 1) mate /= (m - 1) * r1;
  const double surge = live.velocities.empty() ? 0.0 : live.velocities[i].surge;
  const double heading = live.headings.empty() ? 0.0 : live.headings[i];
  o << e.x(), e.y(), surge / config.speed.pursuer, heading / kPi, mate.x(), mate.y(),
      static_cast<double>(now - view.slot) / config.termination.horizon;
  return o.cwiseMax(-1.0).cwiseMin(1.0);
}

int argmin_action(const Eigen::VectorXd& q) {
  int best = 0;
  for (int a = 1; a < q.size(); ++a)
    if (q(a) < q(best)) best = a;
  return best;
}

int select_action(const Mlp& net, const Observation& obs, double epsilon, Rng& rng,
                  ActionSource* source) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("select_action: epsilon not in [0, 1]");
  const bool greedy = rng.uniform() < epsilon;
  if (source) *source = greedy ? ActionSource::Greedy : ActionSource::Random;
  if (greedy) return argmin_action(net.forward(Eigen::VectorXd(obs)));
  return static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(net.output_dim())));
}

double step_reward(const GameState& delayed, const Controls& controls, Outcome outcome,
                   const PayoffWeights& weights, const TerminationConfig& cfg, double dt,
                   double floor) {
  switch (outcome) {
    case Outcome::Capture: return cfg.capture_value;
    case Outcome::Escape:
    case Outcome::Timeout: return cfg.escape_value;
    case Outcome::Continue: break;
  }
  for (const auto& e : relative_vectors(delayed)) {
    const double d = e.norm();
    if (d < cfg.attack_radius || d > cfg.sense_radius) return 0.0;
  }
  double payoff = 0.0;
  try {
    payoff = step_integrand(delayed, controls, weights, cfg, dt);
  } catch (const SingularityError&) {
    return 0.0;
  }
  return 1.0 / std::max(floor, payoff);
}

std::vector<double> progress_shaping(const GameState& before, const GameState& after,
                                     double weight) {
  const auto e0 = relative_vectors(before);
  const auto e1 = relative_vectors(after);
  std::vector<double> out(e0.size());
  for (std::size_t i = 0; i < e0.size(); ++i) out[i] = weight * (e0[i].norm() - e1[i].norm());
  return out;
}

double td_target(double payoff, double min_next_q, bool terminal, double discount) {
  return terminal ? payoff : payoff + discount * min_next_q;
}

double td_target(const Transition& t, const Mlp& target_net, double discount) {
  if (!(discount >= 0.0 && discount <= 1.0)) throw DomainError("td_target: discount not in [0, 1]");
  if (t.terminal) return t.payoff;
  return td_target(t.payoff, target_net.forward(Eigen::VectorXd(t.next_obs)).minCoeff(), false,
                   discount);
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw DomainError("ReplayBuffer: capacity must be >= 1");
  data_.reserve(capacity);
}

void ReplayBuffer::push(const Transition& t) {
  ++pushed_;
  if (data_.size() < capacity_) {
    data_.push_back(t);
    return;
  }
  data_[head_] = t;
  head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= data_.size()) throw DomainError("ReplayBuffer::at: index out of range");
  return data_[(head_ + i) % data_.size()];
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t n, Rng& rng) const {
  if (data_.empty()) throw StateError("ReplayBuffer::sample: buffer is empty");
  std::vector<const Transition*> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(&data_[rng.uniform_index(data_.size())]);
  return out;
}

Learner::Learner(const DqnHyperparams& hyper, int actions, Rng& init_rng, Rng replay_stream)
    : online(kObservationDim, hyper.hidden_sizes, actions, init_rng),
      target(online),
      optimizer(online.num_parameters(), hyper.learning_rate),
      replay(static_cast<std::size_t>(hyper.memory_capacity)),
      replay_rng(std::move(replay_stream)) {}

double batch_loss(const Mlp& online, const Mlp& target, const std::vector<const Transition*>& batch,
                  double discount, Eigen::VectorXd* grad) {
  const auto n = static_cast<Eigen::Index>(batch.size());
  Eigen::MatrixXd x(kObservationDim, n), next(kObservationDim, n);
  std::vector<int> actions(batch.size());
  for (Eigen::Index b = 0; b < n; ++b) {
    x.col(b) = batch[b]->obs;
    next.col(b) = batch[b]->next_obs;
    actions[b] = batch[b]->action;
  }
  const Eigen::MatrixXd next_q = target.forward(next);
  Eigen::VectorXd y(n);
  for (Eigen::Index b = 0; b < n; ++b)
    y(b) = td_target(batch[b]->payoff, next_q.col(b).minCoeff(), batch[b]->terminal, discount);
  return online.selected_loss(x, actions, y, grad);
}

std::optional<double> train_step(Learner& learner, const DqnHyperparams& hyper, Rng& replay_rng) {
  if (learner.replay.size() < static_cast<std::size_t>(hyper.batch_size)) return std::nullopt;
  const auto batch = learner.replay.sample(static_cast<std::size_t>(hyper.batch_size), replay_rng);
  Eigen::VectorXd grad;
  const double loss = batch_loss(learner.online, learner.target, batch, hyper.discount, &grad);
  Eigen::VectorXd params = learner.online.parameters();
  learner.optimizer.step(params, grad);
  learner.online.set_parameters(params);
  ++learner.gradient_steps;
  if (learner.gradient_steps % hyper.target_sync_interval == 0) learner.sync_target();
  return loss;
}

EpisodeStreams EpisodeStreams::of(std::uint64_t seed, int episode) {
  const auto idx = static_cast<std::uint64_t>(episode);
  return {Rng::stream(seed, Stream::Placement, idx), Rng::stream(seed, Stream::Disturbance, idx),
          Rng::stream(seed, Stream::Exploration, idx)};
}

namespace {

std::vector<double> episode_payoffs(const Trajectory& traj, const ScenarioConfig& config) {
  const PayoffWeights weights = config.weights();
  std::vector<double> out;
  for (int i = 0; i < config.num_pursuers; ++i) {
    try {
      out.push_back(pursuer_payoff(traj, i, weights, config.termination));
    } catch (const SingularityError&) {
      out.push_back(std::numeric_limits<double>::infinity());
    }
  }
  return out;
}

}  // namespace

EpisodeResult run_episode(const ScenarioConfig& config, Learner* learner, const Mlp& policy,
                          EpisodeStreams streams, const EpisodeOptions& options) {
  const int m = config.num_pursuers;
  const double dt = config.slot_seconds;
  const DqnHyperparams& hyper = config.dqn;
  const ActionSpec spec = ActionSpec::from(config);
  if (policy.output_dim() != spec.count() || policy.input_dim() != kObservationDim)
    throw ContractError("run_episode: network shape does not match the action space");
  const bool learn = options.learn && learner != nullptr;
  const PayoffWeights weights = config.weights();

  Environment env(config, place_initial(config, streams.placement), std::move(streams.disturbance));
  Rng& explore = streams.exploration;

  DelayBuffer history(static_cast<std::size_t>(config.termination.horizon) + 2);
  history.push(env.state());

  EpisodeResult result;
  Trajectory traj;
  traj.dt = dt;
  traj.origin = config.origin();

  double loss_sum = 0.0;
  int loss_count = 0;
  long delay_sum = 0;
  Outcome outcome = env.termination();
  std::vector<Observation> obs(static_cast<std::size_t>(m));
  std::vector<int> actions(static_cast<std::size_t>(m));
  std::vector<ControlInput> controls(static_cast<std::size_t>(m));
  std::vector<ActionSource> sources(static_cast<std::size_t>(m));

  while (outcome == Outcome::Continue) {
    const int k = env.world().slot;
    const double delay = env.current_delay();
    const int delta = delay_slots(delay, dt);
    delay_sum += delta;
    result.delay_per_slot.push_back(delta);
    const bool warmup = k - delta <= hyper.warmup_slots;

    for (int i = 0; i < m; ++i) {
      if (warmup) {
        actions[i] = static_cast<int>(explore.uniform_index(static_cast<std::uint64_t>(spec.count())));
        sources[i] = ActionSource::WarmUp;
      } else {
        obs[i] = encode_observation(history, k, delay, i, config);
        actions[i] = select_action(policy, obs[i], options.epsilon, explore, &sources[i]);
      }
      controls[i] = spec.decode(actions[i]);
    }
    const GameState live = env.state();
    const GameState delayed = *delayed_view(history, k, delay).state;
    env.step(controls, evader_policy(live, config));
    history.push(env.state());
    outcome = env.termination();

    Controls realized = Controls::zero(m);
    for (int i = 0; i < m; ++i) realized.pursuers[i] = planar_velocity(env.world().agents[i]);
    realized.target = planar_velocity(env.world().agents[m]);
    traj.steps.push_back({live, realized});

    const double reward = step_reward(delayed, realized, outcome, weights, config.termination, dt,
                                      hyper.reward_floor);
    std::vector<double> shaping(static_cast<std::size_t>(m), 0.0);
    double shaping_mean = 0.0;
    if (hyper.progress_weight != 0.0) {
      const int k1 = env.world().slot;
      const double next_delay = outcome != Outcome::Continue ? delay : env.current_delay();
      const GameState next_delayed = *delayed_view(history, k1, next_delay).state;
      shaping = progress_shaping(delayed, next_delayed, hyper.progress_weight);
      for (double s : shaping) shaping_mean += s / m;
    }
    result.total_reward += reward + shaping_mean;
    if (options.record_trajectory) result.step_rewards.push_back(reward + shaping_mean);
    if (options.record_sources) result.sources.push_back(sources);

    if (learn && !warmup) {
      const bool terminal = outcome != Outcome::Continue;
      const int k1 = env.world().slot;
      const double next_delay = terminal ? delay : env.current_delay();
      for (int i = 0; i < m; ++i) {
        Transition t;
        t.obs = obs[i];
        t.action = actions[i];
        t.payoff = -(reward + shaping[static_cast<std::size_t>(i)]);
        t.next_obs = encode_observation(history, k1, next_delay, i, config);
        t.terminal = terminal;
        learner->replay.push(t);
      }
    }
    if (learn && hyper.train_interval > 0 && (k + 1) % hyper.train_interval == 0) {
      if (auto loss = train_step(*learner, hyper, learner->replay_rng)) {
        loss_sum += *loss;
        ++loss_count;
      }
    }
  }
  result.steps = static_cast<int>(traj.steps.size());
  result.delay_mean_slots =
      result.steps > 0 ? static_cast<double>(delay_sum) / result.steps : 0.0;
  if (loss_count > 0) result.loss_mean = loss_sum / loss_count;
  traj.final_state = env.state();
  traj.outcome = outcome;
  result.outcome.kind = outcome;
  result.outcome.final_state = env.state();
  result.outcome.per_pursuer_payoff = episode_payoffs(traj, config);
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    try {
      total += result.outcome.per_pursuer_payoff[i] - target_payoff(traj, i);
    } catch (const SingularityError&) {
      total = std::numeric_limits<double>::infinity();
    }
  }
  result.outcome.system_payoff = total;
  if (options.record_trajectory) result.trajectory = std::move(traj);
  return result;
}

}  // namespace uwh

namespace uwh {

TrainingRun start_training(const ScenarioConfig& config) {
  config.validate();
  Rng init = Rng::stream(config.seed, Stream::Init);
  return TrainingRun{Learner(config.dqn, ActionSpec::from(config).count(), init,
                             Rng::stream(config.seed, Stream::Replay)),
                     {}};
}

void continue_training(const ScenarioConfig& config, TrainingRun& run, int first, int count) {
  for (int ep = first; ep < first + count; ++ep) {
    EpisodeOptions opts;
    opts.learn = true;
    opts.epsilon = config.dqn.epsilon_at(ep);
    const EpisodeResult r = run_episode(config, &run.learner, run.learner.online,
                                        EpisodeStreams::of(config.seed, ep), opts);
    run.log.push_back({ep, r.total_reward, r.steps, r.outcome.kind, opts.epsilon, r.loss_mean,
                       r.delay_mean_slots, r.outcome.per_pursuer_payoff});
  }
}

}  // namespace uwh
