#include "uwhunt/environment.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "uwhunt/acoustics.hpp"
#include "uwhunt/errors.hpp"

namespace uwh {

GameState snapshot(const World& world, double slot_seconds) {
  GameState s;
  const int m = static_cast<int>(world.agents.size()) - 1;
  s.pursuers.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) s.pursuers.emplace_back(world.agents[i].pose.x, world.agents[i].pose.y);
  s.target = {world.agents[m].pose.x, world.agents[m].pose.y};
  s.slot = world.slot;
  s.elapsed = world.slot * slot_seconds;
  for (const auto& a : world.agents) {
    s.headings.push_back(a.pose.heading);
    s.velocities.push_back(a.vel);
  }
  return s;
}

namespace {

// Heading within [lo, hi] and signed surge that realize motion along
// `angle`; reversing (surge < 0) covers directions outside the range.
std::pair<double, double> fold_direction(double angle, double speed, const HeadingRange& range,
                                         double current_surge) {
  struct Option {
    double heading;
    double surge;
  };
  std::vector<Option> options;
  const double fwd = normalize_angle(angle);
  const double back = normalize_angle(angle + kPi);
  if (fwd >= range.lo && fwd <= range.hi) options.push_back({fwd, speed});
  if (back >= range.lo && back <= range.hi) options.push_back({back, -speed});
  if (options.empty()) {
    const double h = std::clamp(fwd, range.lo, range.hi);
    return {h, speed * std::cos(fwd - h)};
  }
  const auto best = std::min_element(options.begin(), options.end(), [&](auto& a, auto& b) {
    return std::abs(a.surge - current_surge) < std::abs(b.surge - current_surge);
  });
  return {best->heading, best->surge};
}

}  // namespace

World place_initial(const ScenarioConfig& config, Rng& rng) {
  const int m = config.num_pursuers;
  const double r = config.termination.safety_radius;
  const double ring = std::max(2.0 * r, r / std::sin(kPi / m));
  const Vec2 o = config.origin();
  World w;
  w.agents.resize(static_cast<std::size_t>(m + 1));
  const double theta = rng.uniform(-kPi, kPi);
  const Vec2 target = o + config.initial_distance * Vec2(std::cos(theta), std::sin(theta));
  for (int i = 0; i < m; ++i) {
    const double a = 2.0 * kPi * i / m;
    AgentState& p = w.agents[i];
    p.pose.x = o.x() + ring * std::cos(a);
    p.pose.y = o.y() + ring * std::sin(a);
    p.pose.depth = config.depth();
    const Vec2 to_target = target - Vec2(p.pose.x, p.pose.y);
    const auto [heading, surge] =
        fold_direction(std::atan2(to_target.y(), to_target.x()), config.initial_speed_pursuer,
                       config.pursuer_heading, config.initial_speed_pursuer);
    p.pose.heading = heading;
    p.vel = {surge, 0.0, 0.0};
  }
  AgentState& t = w.agents[m];
  t.pose = {target.x(), target.y(), config.depth(), normalize_angle(rng.uniform(-kPi, kPi))};
  t.vel = {config.initial_speed_target, 0.0, 0.0};
  return w;
}

ControlInput command_velocity(const AgentState& agent, const Vec2& desired, Role role,
                              const ScenarioConfig& config) {
  const double dt = config.slot_seconds;
  const double cap = config.accel.cap(role);
  const double speed = std::min(desired.norm(), config.speed.cap(role));
  const HeadingRange& range = role == Role::Pursuer ? config.pursuer_heading : config.evader_heading;
  double heading = std::clamp(agent.pose.heading, range.lo, range.hi);
  double target_surge = 0.0;
  if (speed > 1e-12) {
    const double angle = std::atan2(desired.y(), desired.x());
    std::tie(heading, target_surge) = fold_direction(angle, speed, range, agent.vel.surge);
  }
  ControlInput ctrl;
  ctrl.commanded_heading = heading;
  ctrl.surge_accel = std::clamp((target_surge - agent.vel.surge) / dt, -cap, cap);
  const double budget = std::sqrt(std::max(0.0, cap * cap - ctrl.surge_accel * ctrl.surge_accel));
  ctrl.sway_accel = std::clamp(-agent.vel.sway / dt, -budget, budget);
  return ctrl;
}

ControlInput evader_policy(const GameState& state, const ScenarioConfig& config) {
  Vec2 centroid = Vec2::Zero();
  for (const auto& u : state.pursuers) centroid += u;
  centroid /= static_cast<double>(state.pursuers.size());
  const Vec2 away = state.target - centroid;
  ControlInput ctrl;
  ctrl.commanded_heading = away.norm() > 1e-12 ? std::atan2(away.y(), away.x()) : 0.0;
  ctrl.surge_accel = config.accel.evader;
  return ctrl;
}

Environment::Environment(const ScenarioConfig& config, World initial, Rng disturbance_rng)
    : config_(&config),
      world_(std::move(initial)),
      disturbance_rng_(std::move(disturbance_rng)),
      sound_(uwh::sound_speed(config.water)) {
  if (static_cast<int>(world_.agents.size()) != config.num_pursuers + 1)
    throw ConfigError("Environment: world size does not match scenario.num_pursuers");
}

std::vector<double> Environment::speeds() const {
  std::vector<double> out;
  out.reserve(world_.agents.size());
  for (const auto& a : world_.agents) out.push_back(a.vel.norm());
  return out;
}

double Environment::current_delay() const {
  if (config_->delay_mode == DelayMode::Off) return 0.0;
  const auto v = speeds();
  return config_->delay_scale * average_delay(state(), v, sound_);
}

Outcome Environment::termination() const {
  return check_termination(state(), config_->termination);
}

void Environment::step(std::span<const ControlInput> pursuer_controls,
                       const ControlInput& evader_control) {
  const int m = num_pursuers();
  if (static_cast<int>(pursuer_controls.size()) != m)
    throw DomainError("Environment::step: need one control per pursuer");
  for (const auto& c : pursuer_controls)
    validate_control(c, Role::Pursuer, config_->accel, config_->pursuer_heading);
  validate_control(evader_control, Role::Evader, config_->accel, config_->pursuer_heading);

  const double dt = config_->slot_seconds;
  World next = world_;
  for (int i = 0; i <= m; ++i) {
    const Disturbance d = sample_disturbance(disturbance_rng_, config_->disturbance_bound);
    const bool evader = i == m;
    const ControlInput& c = evader ? evader_control : pursuer_controls[i];
    next.agents[i] = advance_agent(world_.agents[i], c, d, config_->vehicle,
                                   evader ? Role::Evader : Role::Pursuer, config_->speed, dt);
  }
  next.slot = world_.slot + 1;
  world_ = std::move(next);
}

}  // namespace uwh
