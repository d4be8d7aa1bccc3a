#include "uwhunt/game.hpp"

#include <cmath>
#include <string>

#include "uwhunt/errors.hpp"

namespace uwh {

Eigen::VectorXd GameState::stacked() const { return stacked_relative(Vec2::Zero()); }

Eigen::VectorXd GameState::stacked_relative(const Vec2& origin) const {
  const int m = num_pursuers();
  Eigen::VectorXd s(2 * (m + 1));
  for (int i = 0; i < m; ++i) s.segment<2>(2 * i) = pursuers[i] - origin;
  s.segment<2>(2 * m) = target - origin;
  return s;
}

PayoffWeights PayoffWeights::uniform(int m, double alpha, double beta, double c) {
  return {std::vector<double>(m, alpha), std::vector<double>(m, beta), c};
}

void PayoffWeights::validate(int m) const {
  if (static_cast<int>(alpha_d.size()) != m || static_cast<int>(beta_c.size()) != m)
    throw ConfigError("game.alpha_d/beta_c: need one weight per pursuer");
  for (int i = 0; i < m; ++i) {
    if (!(alpha_d[i] > 0.0)) throw ConfigError("game.alpha_d: weights must be > 0");
    if (!(beta_c[i] > 0.0)) throw ConfigError("game.beta_c: weights must be > 0");
  }
  if (!(exponent_c > 0.0)) throw ConfigError("game.constraint_c: must be > 0");
}

void TerminationConfig::validate() const {
  if (!(safety_radius > 0.0)) throw ConfigError("game.safe_radius: must be > 0");
  if (!(safety_radius < attack_radius))
    throw ConfigError("game.safe_radius must be < game.attack_radius");
  if (!(attack_radius < sense_radius))
    throw ConfigError("game.attack_radius must be < game.sensing_radius");
  if (horizon < 1) throw ConfigError("scenario.max_slots: must be >= 1");
  if (escape_value == 0.0 || !std::isfinite(escape_value))
    throw ConfigError("game.constraint_a: must be finite and non-zero");
  if (capture_value == 0.0 || !std::isfinite(capture_value))
    throw ConfigError("game.constraint_b: must be finite and non-zero");
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Continue: return "continue";
    case Outcome::Capture: return "capture";
    case Outcome::Escape: return "escape";
    case Outcome::Timeout: return "timeout";
  }
  return "?";
}

std::optional<Outcome> outcome_from_string(std::string_view text) {
  for (auto o : {Outcome::Continue, Outcome::Capture, Outcome::Escape, Outcome::Timeout}) {
    if (to_string(o) == text) return o;
  }
  return std::nullopt;
}

Controls Controls::zero(int m) { return {std::vector<Vec2>(m, Vec2::Zero()), Vec2::Zero()}; }

std::vector<Vec2> relative_vectors(const GameState& state) {
  std::vector<Vec2> e;
  e.reserve(state.pursuers.size());
  for (const auto& u : state.pursuers) e.push_back(state.target - u);
  return e;
}

double collision_penalty(const GameState& state, int i, double safety_radius, double c) {
  const double r2 = safety_radius * safety_radius;
  double sum = 0.0;
  for (int j = 0; j < state.num_pursuers(); ++j) {
    if (j == i) continue;
    const double gap = (state.pursuers[i] - state.pursuers[j]).squaredNorm() - r2;
    if (!(gap > 0.0))
      throw SingularityError("collision_penalty: pursuers " + std::to_string(i) + " and " +
                             std::to_string(j) + " inside the safety radius");
    sum += std::pow(gap, -c);
  }
  return sum;
}

double cohesion_penalty(const GameState& state, int i) {
  double sum = 0.0;
  for (int j = 0; j < state.num_pursuers(); ++j) {
    if (j != i) sum += (state.pursuers[i] - state.pursuers[j]).squaredNorm();
  }
  return sum;
}

double control_weight(const GameState& state, int i, const PayoffWeights& weights,
                      double safety_radius) {
  return weights.alpha_d[i] * collision_penalty(state, i, safety_radius, weights.exponent_c) +
         weights.beta_c[i] * cohesion_penalty(state, i);
}

double evader_weight(const GameState& state) {
  double sigma = 0.0;
  for (const auto& e : relative_vectors(state)) {
    const double d2 = e.squaredNorm();
    if (!(d2 > 0.0)) throw SingularityError("evader_weight: pursuer coincides with target");
    sigma += 1.0 / d2;
  }
  return sigma;
}

std::vector<double> terminal_value(const GameState& state, const TerminationConfig& cfg) {
  const Outcome outcome = check_termination(state, cfg);
  if (outcome == Outcome::Continue)
    throw ContractError("terminal_value: game has not terminated");
  const double fallback = outcome == Outcome::Capture ? 1.0 / cfg.capture_value
                                                      : 1.0 / cfg.escape_value;
  std::vector<double> phi;
  for (const auto& e : relative_vectors(state)) {
    const double d = e.norm();
    if (d > cfg.sense_radius) {
      phi.push_back(1.0 / cfg.escape_value);
    } else if (d < cfg.attack_radius) {
      phi.push_back(1.0 / cfg.capture_value);
    } else {
      phi.push_back(fallback);
    }
  }
  return phi;
}

double step_integrand(const GameState& state, const Controls& controls,
                      const PayoffWeights& weights, const TerminationConfig& cfg, double dt) {
  const double q2 = controls.target.squaredNorm();
  double sum = 0.0;
  for (int i = 0; i < state.num_pursuers(); ++i) {
    const double w = control_weight(state, i, weights, cfg.safety_radius);
    const double d2 = (state.pursuers[i] - state.target).squaredNorm();
    if (!(d2 > 0.0)) throw SingularityError("step_integrand: pursuer coincides with target");
    sum += w * controls.pursuers[i].squaredNorm() - q2 / d2;
  }
  return 0.5 * sum * dt;
}

namespace {

double terminal_term(const Trajectory& traj, int i, const TerminationConfig& cfg) {
  if (traj.outcome == Outcome::Continue) return 0.0;
  const auto phi = terminal_value(traj.final_state, cfg);
  const Eigen::VectorXd sf = traj.final_state.stacked_relative(traj.origin);
  return -sf.squaredNorm() * phi[i];
}

}  // namespace

double pursuer_payoff(const Trajectory& traj, int i, const PayoffWeights& weights,
                      const TerminationConfig& cfg) {
  double running = 0.0;
  for (const auto& step : traj.steps) {
    const double w = control_weight(step.state, i, weights, cfg.safety_radius);
    running += w * step.controls.pursuers[i].squaredNorm() * traj.dt;
  }
  return 0.5 * running + terminal_term(traj, i, cfg);
}

double target_payoff(const Trajectory& traj, int i) {
  double running = 0.0;
  for (const auto& step : traj.steps) {
    const double d2 = (step.state.pursuers[i] - step.state.target).squaredNorm();
    if (!(d2 > 0.0)) throw SingularityError("target_payoff: pursuer coincides with target");
    running += step.controls.target.squaredNorm() / d2 * traj.dt;
  }
  return 0.5 * running;
}

double system_payoff(const Trajectory& traj, const PayoffWeights& weights,
                     const TerminationConfig& cfg) {
  const int m = traj.final_state.num_pursuers();
  double total = 0.0;
  for (int i = 0; i < m; ++i) total += pursuer_payoff(traj, i, weights, cfg) - target_payoff(traj, i);
  return total;
}

Outcome check_termination(const GameState& state, const TerminationConfig& cfg) {
  bool any_inside = false;
  bool all_beyond = true;
  bool any_beyond = false;
  for (const auto& e : relative_vectors(state)) {
    const double d = e.norm();
    any_inside = any_inside || d < cfg.attack_radius;
    all_beyond = all_beyond && d > cfg.sense_radius;
    any_beyond = any_beyond || d > cfg.sense_radius;
  }
  if (any_inside) return Outcome::Capture;
  if (cfg.strict_escape ? any_beyond : all_beyond) return Outcome::Escape;
  if (state.slot >= cfg.horizon) return Outcome::Timeout;
  return Outcome::Continue;
}

}  // namespace uwh
