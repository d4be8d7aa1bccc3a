#include "uwhunt/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "uwhunt/errors.hpp"

namespace uwh {

LinearGameMatrices LinearGameMatrices::planar(int num_pursuers) {
  const int n = 2 * (num_pursuers + 1);
  LinearGameMatrices m;
  m.F = Eigen::MatrixXd::Zero(n, n);
  m.G12 = Eigen::MatrixXd::Zero(n, 2 * num_pursuers);
  m.G12.topRows(2 * num_pursuers).setIdentity();
  m.G21 = Eigen::MatrixXd::Zero(n, 2);
  m.G21.bottomRows(2).setIdentity();
  return m;
}

void LinearGameMatrices::validate(int num_pursuers) const {
  const auto n = F.rows();
  if (F.cols() != n || G12.rows() != n || G21.rows() != n)
    throw DomainError("LinearGameMatrices: row counts differ from the state dimension");
  if (num_pursuers < 1 || G12.cols() % num_pursuers != 0)
    throw DomainError("LinearGameMatrices: G12 columns not divisible by the pursuer count");
  if (!F.allFinite() || !G12.allFinite() || !G21.allFinite())
    throw DomainError("LinearGameMatrices: non-finite entry");
}

FrozenWeights FrozenWeights::at(const GameState& state, const PayoffWeights& weights,
                                double safety_radius) {
  FrozenWeights f;
  for (int i = 0; i < state.num_pursuers(); ++i)
    f.pursuer.push_back(control_weight(state, i, weights, safety_radius));
  f.evader = evader_weight(state);
  return f;
}

double RiccatiSolution::max_asymmetry() const {
  double worst = 0.0;
  for (const auto& p : P) worst = std::max(worst, (p - p.transpose()).cwiseAbs().maxCoeff());
  return worst;
}

namespace {

int block_size(const FrozenWeights& frozen, const LinearGameMatrices& mats) {
  const int m = frozen.num_pursuers();
  if (m < 1 || mats.G12.cols() % m != 0)
    throw DomainError("G12 columns not divisible by the pursuer count");
  return static_cast<int>(mats.G12.cols()) / m;
}

void check_positive(const FrozenWeights& frozen) {
  for (double w : frozen.pursuer)
    if (!(w > 0.0)) throw DomainError("pursuer control weight must be > 0");
  if (!(frozen.evader > 0.0)) throw DomainError("evader distance weight must be > 0");
}

}  // namespace

double hamiltonian(const Eigen::VectorXd& s, const StackedControls& u, const Eigen::VectorXd& grad,
                   const FrozenWeights& frozen, const LinearGameMatrices& mats) {
  const int k = block_size(frozen, mats);
  const Eigen::VectorXd sdot = mats.F * s + mats.G12 * u.p + mats.G21 * u.q;
  double running = -frozen.evader * u.q.squaredNorm();
  for (int i = 0; i < frozen.num_pursuers(); ++i)
    running += frozen.pursuer[i] * u.p.segment(i * k, k).squaredNorm();
  return grad.dot(sdot) + 0.5 * running;
}

double hamiltonian(const GameState& state, const Eigen::VectorXd& s, const StackedControls& u,
                   const Eigen::VectorXd& grad, const PayoffWeights& weights,
                   const LinearGameMatrices& mats, double safety_radius) {
  return hamiltonian(s, u, grad, FrozenWeights::at(state, weights, safety_radius), mats);
}

StackedControls optimal_controls(const Eigen::VectorXd& grad, const FrozenWeights& frozen,
                                 const LinearGameMatrices& mats) {
  check_positive(frozen);
  const int k = block_size(frozen, mats);
  StackedControls u;
  u.p = mats.G12.transpose() * grad;
  for (int i = 0; i < frozen.num_pursuers(); ++i) u.p.segment(i * k, k) *= -1.0 / frozen.pursuer[i];
  u.q = mats.G21.transpose() * grad / frozen.evader;
  return u;
}

Eigen::MatrixXd riccati_rhs(const Eigen::MatrixXd& P, const FrozenWeights& frozen,
                            const LinearGameMatrices& mats) {
  check_positive(frozen);
  const int k = block_size(frozen, mats);
  const auto n = mats.state_dim();
  Eigen::MatrixXd s12 = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < frozen.num_pursuers(); ++i) {
    const auto g = mats.G12.middleCols(i * k, k);
    s12.noalias() += (g * g.transpose()) / frozen.pursuer[i];
  }
  const Eigen::MatrixXd s21 = mats.G21 * mats.G21.transpose() / frozen.evader;
  Eigen::MatrixXd rhs = -mats.F.transpose() * P - P * mats.F + P * (s12 - s21) * P;
  return 0.5 * (rhs + rhs.transpose());
}

RiccatiSolution solve_riccati(const Eigen::MatrixXd& terminal_P, double horizon,
                              const FrozenWeights& frozen, const LinearGameMatrices& mats,
                              double step) {
  if (!(step > 0.0)) throw DomainError("solve_riccati: step must be > 0");
  if (!(horizon >= 0.0)) throw DomainError("solve_riccati: horizon must be >= 0");
  if (terminal_P.rows() != mats.state_dim() || terminal_P.cols() != mats.state_dim())
    throw DomainError("solve_riccati: terminal_P has the wrong shape");
  if ((terminal_P - terminal_P.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw DomainError("solve_riccati: terminal_P must be symmetric");

  // Precompute the constant pieces of the right-hand side.
  check_positive(frozen);
  const int k = block_size(frozen, mats);
  const auto n = mats.state_dim();
  Eigen::MatrixXd coupling = -mats.G21 * mats.G21.transpose() / frozen.evader;
  for (int i = 0; i < frozen.num_pursuers(); ++i) {
    const auto g = mats.G12.middleCols(i * k, k);
    coupling.noalias() += (g * g.transpose()) / frozen.pursuer[i];
  }
  const bool has_drift = !mats.F.isZero(0.0);
  auto rhs = [&](const Eigen::MatrixXd& P) {
    Eigen::MatrixXd r = P * coupling * P;
    if (has_drift) r -= mats.F.transpose() * P + P * mats.F;
    return r;
  };

  RiccatiSolution sol;
  sol.terminal_P = terminal_P;
  const auto steps = static_cast<long>(std::ceil(horizon / step - 1e-9));
  sol.grid.reserve(static_cast<std::size_t>(steps + 1));
  sol.P.reserve(static_cast<std::size_t>(steps + 1));
  double t = horizon;
  Eigen::MatrixXd P = terminal_P;
  sol.grid.push_back(t);
  sol.P.push_back(P);
  Eigen::MatrixXd k1(n, n), k2(n, n), k3(n, n), k4(n, n);
  for (long j = 0; j < steps; ++j) {
    const double h = -std::min(step, t);  // integrate toward t = 0
    k1 = rhs(P);
    k2 = rhs(P + 0.5 * h * k1);
    k3 = rhs(P + 0.5 * h * k2);
    k4 = rhs(P + h * k3);
    P += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    P = 0.5 * (P + P.transpose()).eval();
    t = (j + 1 == steps) ? 0.0 : t + h;
    if (!P.allFinite() || P.cwiseAbs().maxCoeff() > 1e12)
      throw DivergenceError("solve_riccati: |P| exceeded 1e12 at t = " + std::to_string(t), t);
    sol.grid.push_back(t);
    sol.P.push_back(P);
  }
  return sol;
}

FeedbackGains feedback_gains(const Eigen::MatrixXd& P, const FrozenWeights& frozen,
                             const LinearGameMatrices& mats) {
  check_positive(frozen);
  const int k = block_size(frozen, mats);
  FeedbackGains g;
  g.K12 = -mats.G12.transpose() * P;
  for (int i = 0; i < frozen.num_pursuers(); ++i) g.K12.middleRows(i * k, k) /= frozen.pursuer[i];
  g.K21 = mats.G21.transpose() * P / frozen.evader;
  return g;
}

Eigen::MatrixXd relative_terminal_weight(int num_pursuers, double phi) {
  const int n = 2 * (num_pursuers + 1);
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < num_pursuers; ++i) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, n);
    D.middleCols(2 * i, 2) = -Eigen::Matrix2d::Identity();
    D.rightCols(2) = Eigen::Matrix2d::Identity();
    W.noalias() += D.transpose() * D;
  }
  return phi * W;
}

namespace {

// P at time t from a solution with a uniform grid (grid[0] = horizon).
const Eigen::MatrixXd& riccati_at(const RiccatiSolution& sol, double t) {
  const double h = sol.grid.size() > 1 ? sol.grid[0] - sol.grid[1] : 1.0;
  const auto idx = static_cast<long>(std::llround((sol.grid[0] - t) / h));
  return sol.P[static_cast<std::size_t>(std::clamp<long>(idx, 0, static_cast<long>(sol.P.size()) - 1))];
}

}  // namespace

double frozen_game_cost(const FrozenGame& game, const Eigen::VectorXd& s0, const Strategy& pursuers,
                        const Strategy& evader) {
  const auto& mats = game.mats;
  const int k = block_size(game.frozen, mats);
  const double h = game.slot_seconds / game.substeps;

  auto controls = [&](double t, const Eigen::VectorXd& s, int slot) {
    StackedControls u{Eigen::VectorXd::Zero(mats.G12.cols()), Eigen::VectorXd::Zero(mats.G21.cols())};
    if (pursuers.riccati || evader.riccati) {
      const auto* sol = pursuers.riccati ? pursuers.riccati : evader.riccati;
      const FeedbackGains g = feedback_gains(riccati_at(*sol, t), game.frozen, mats);
      if (pursuers.riccati) u.p = g.K12 * s;
      if (evader.riccati) u.q = g.K21 * s;
    }
    if (!pursuers.offsets.empty()) u.p += pursuers.offsets[static_cast<std::size_t>(slot)];
    if (!evader.offsets.empty()) u.q += evader.offsets[static_cast<std::size_t>(slot)];
    return u;
  };
  // Augmented state [s; J].
  auto deriv = [&](double t, const Eigen::VectorXd& x, int slot) {
    const Eigen::VectorXd s = x.head(x.size() - 1);
    const StackedControls u = controls(t, s, slot);
    Eigen::VectorXd dx(x.size());
    dx.head(s.size()) = mats.F * s + mats.G12 * u.p + mats.G21 * u.q;
    double running = -game.frozen.evader * u.q.squaredNorm();
    for (int i = 0; i < game.frozen.num_pursuers(); ++i)
      running += game.frozen.pursuer[i] * u.p.segment(i * k, k).squaredNorm();
    dx(s.size()) = 0.5 * running;
    return dx;
  };

  Eigen::VectorXd x(s0.size() + 1);
  x.head(s0.size()) = s0;
  x(s0.size()) = 0.0;
  double t = 0.0;
  for (int slot = 0; slot < game.slots; ++slot) {
    for (int j = 0; j < game.substeps; ++j) {
      const Eigen::VectorXd k1 = deriv(t, x, slot);
      const Eigen::VectorXd k2 = deriv(t + 0.5 * h, x + 0.5 * h * k1, slot);
      const Eigen::VectorXd k3 = deriv(t + 0.5 * h, x + 0.5 * h * k2, slot);
      const Eigen::VectorXd k4 = deriv(t + h, x + h * k3, slot);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += h;
    }
  }
  const Eigen::VectorXd sf = x.head(s0.size());
  return x(s0.size()) + 0.5 * sf.dot(game.terminal_P * sf);
}

namespace {

GameState scaled_state(const GameState& state, const Vec2& origin, double scale) {
  GameState s;
  s.slot = state.slot;
  s.elapsed = state.elapsed;
  for (const auto& u : state.pursuers) s.pursuers.push_back((u - origin) / scale);
  s.target = (state.target - origin) / scale;
  return s;
}

}  // namespace

ClosedLoopResult closed_loop_episode(const ScenarioConfig& config, const World& initial,
                                     Rng disturbance_rng, const ClosedLoopOptions& options) {
  const int m = config.num_pursuers;
  const double scale = config.length_scale;
  const Vec2 origin = config.origin();
  const PayoffWeights weights = config.weights();
  const LinearGameMatrices mats = LinearGameMatrices::planar(m);
  const Eigen::MatrixXd terminal_P =
      relative_terminal_weight(m, 1.0 / config.termination.capture_value);

  Environment env(config, initial, std::move(disturbance_rng));
  ClosedLoopResult result;
  result.trajectory.dt = config.slot_seconds;
  result.trajectory.origin = origin;
  result.states.push_back(env.state());

  Outcome outcome = env.termination();
  while (outcome == Outcome::Continue) {
    const GameState state = env.state();
    const GameState scaled = scaled_state(state, origin, scale);
    const Eigen::VectorXd s = scaled.stacked();
    Controls commanded = Controls::zero(m);
    try {
      const FrozenWeights frozen =
          FrozenWeights::at(scaled, weights, config.termination.safety_radius / scale);
      double remaining = (config.termination.horizon - state.slot) * config.slot_seconds;
      if (config.lookahead > 0.0) remaining = std::min(remaining, config.lookahead);
      // Shorten the look-ahead until the frozen game has a bounded value.
      std::optional<RiccatiSolution> sol;
      for (double span = remaining;; span *= 0.5) {
        try {
          sol = solve_riccati(terminal_P, span, frozen, mats, config.riccati_step);
          break;
        } catch (const DivergenceError&) {
          if (span <= config.riccati_step) throw;
          ++result.horizon_cuts;
        }
      }
      const Eigen::MatrixXd& P = sol->initial();
      const FeedbackGains gains = feedback_gains(P, frozen, mats);
      const Eigen::VectorXd p = gains.K12 * s;
      const Eigen::VectorXd q = gains.K21 * s;
      for (int i = 0; i < m; ++i) commanded.pursuers[i] = p.segment<2>(2 * i) * scale;
      commanded.target = q * scale;
      if (options.verbose) {
        const StackedControls u{p, q};
        const Eigen::VectorXd grad = P * s;
        const double h = hamiltonian(s, u, grad, frozen, mats);
        const Eigen::MatrixXd pdot = riccati_rhs(P, frozen, mats);
        result.diagnostics.push_back({state.slot, gains.K12.norm(), gains.K21.norm(), h,
                                      h + 0.5 * s.dot(pdot * s)});
      }
    } catch (const DivergenceError& e) {
      result.aborted = true;
      result.diagnostic = std::string("riccati divergence at slot ") +
                          std::to_string(state.slot) + ": " + e.what();
      break;
    } catch (const SingularityError& e) {
      result.aborted = true;
      result.diagnostic =
          std::string("singularity at slot ") + std::to_string(state.slot) + ": " + e.what();
      break;
    }

    std::vector<ControlInput> ctrl;
    for (int i = 0; i < m; ++i)
      ctrl.push_back(command_velocity(env.world().agents[i], commanded.pursuers[i], Role::Pursuer,
                                      config));
    const ControlInput evader =
        options.analytic_evader
            ? command_velocity(env.world().agents[m], commanded.target, Role::Evader, config)
            : evader_policy(state, config);
    env.step(ctrl, evader);

    Controls realized = Controls::zero(m);
    for (int i = 0; i < m; ++i) realized.pursuers[i] = planar_velocity(env.world().agents[i]);
    realized.target = planar_velocity(env.world().agents[m]);
    result.trajectory.steps.push_back({state, realized});
    result.states.push_back(env.state());
    outcome = env.termination();
  }

  result.trajectory.final_state = env.state();
  result.trajectory.outcome = result.aborted ? Outcome::Continue : outcome;
  result.outcome.kind = result.aborted ? Outcome::Continue : outcome;
  result.outcome.final_state = env.state();
  try {
    for (int i = 0; i < m; ++i)
      result.outcome.per_pursuer_payoff.push_back(
          pursuer_payoff(result.trajectory, i, weights, config.termination));
    result.outcome.system_payoff = system_payoff(result.trajectory, weights, config.termination);
  } catch (const SingularityError& e) {
    result.outcome.per_pursuer_payoff.assign(static_cast<std::size_t>(m),
                                             std::numeric_limits<double>::infinity());
    result.outcome.system_payoff = std::numeric_limits<double>::infinity();
    if (result.diagnostic.empty()) result.diagnostic = e.what();
  }
  return result;
}

}  // namespace uwh
