#pragma once

// Zero-delay equilibrium feedback for the hunting game.
//
// The game is instantiated as a linear model over planar positions,
// s_dot = F s + G12 p + G21 q, with p the stacked commanded pursuer
// velocities and q the evader's. The state-dependent control weights are
// frozen at the current state, which turns the min-max problem into a
// linear-quadratic game with value V = 1/2 s' P s. P(t) then solves
//
//   P_dot = -F'P - PF + P S12 P - P S21 P,
//   S12 = sum_i w_i^-1 G12_i G12_i',  S21 = G21 G21' / sigma,
//
// where w_i = alpha_i g_i^d + beta_i g_i^c and sigma = sum_i |U_i - T|^-2,
// and the saddle-point feedback is p_i = -w_i^-1 G12_i' P s,
// q = G21' P s / sigma.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "uwhunt/config.hpp"
#include "uwhunt/environment.hpp"
#include "uwhunt/game.hpp"

namespace uwh {

struct LinearGameMatrices {
  Eigen::MatrixXd F;    // n x n
  Eigen::MatrixXd G12;  // n x (M * k), k columns per pursuer
  Eigen::MatrixXd G21;  // n x k_q

  /// Planar instance: n = 2(M+1), F = 0, G12 places pursuer i's velocity in
  /// its position rows, G21 places the evader's velocity in the target rows.
  static LinearGameMatrices planar(int num_pursuers);
  [[nodiscard]] int state_dim() const { return static_cast<int>(F.rows()); }
  /// Throws DomainError on inconsistent shapes or non-finite entries.
  void validate(int num_pursuers) const;
};

/// Control weights frozen at one state.
struct FrozenWeights {
  std::vector<double> pursuer;  // w_i
  double evader = 1.0;          // sigma

  static FrozenWeights at(const GameState& state, const PayoffWeights& weights,
                          double safety_radius);
  [[nodiscard]] int num_pursuers() const { return static_cast<int>(pursuer.size()); }
};

struct StackedControls {
  Eigen::VectorXd p;  // all pursuers, stacked
  Eigen::VectorXd q;
};

struct RiccatiSolution {
  std::vector<double> grid;       // descending times, grid.front() == horizon
  std::vector<Eigen::MatrixXd> P; // P at each grid time
  Eigen::MatrixXd terminal_P;

  [[nodiscard]] const Eigen::MatrixXd& initial() const { return P.back(); }
  [[nodiscard]] double max_asymmetry() const;
};

struct FeedbackGains {
  Eigen::MatrixXd K12;  // stacked per-pursuer gains, p = K12 s
  Eigen::MatrixXd K21;  // q = K21 s
};

/// grad' (F s + G12 p + G21 q) + 1/2 sum_i (w_i |p_i|^2 - |q|^2 / |U_i - T|^2).
double hamiltonian(const GameState& state, const Eigen::VectorXd& s, const StackedControls& u,
                   const Eigen::VectorXd& grad, const PayoffWeights& weights,
                   const LinearGameMatrices& mats, double safety_radius);

/// Same Hamiltonian with the weights already frozen.
double hamiltonian(const Eigen::VectorXd& s, const StackedControls& u, const Eigen::VectorXd& grad,
                   const FrozenWeights& frozen, const LinearGameMatrices& mats);

/// Stationary controls for a given value gradient. Throws DomainError when a
/// weight is not strictly positive.
StackedControls optimal_controls(const Eigen::VectorXd& grad, const FrozenWeights& frozen,
                                 const LinearGameMatrices& mats);

/// Riccati right-hand side, symmetrized.
Eigen::MatrixXd riccati_rhs(const Eigen::MatrixXd& P, const FrozenWeights& frozen,
                            const LinearGameMatrices& mats);

/// Backward RK4 integration of the Riccati equation from `horizon` to 0
/// with weights frozen. The last step is shortened to land on 0. Throws
/// DivergenceError when |P| exceeds 1e12.
RiccatiSolution solve_riccati(const Eigen::MatrixXd& terminal_P, double horizon,
                              const FrozenWeights& frozen, const LinearGameMatrices& mats,
                              double step);

FeedbackGains feedback_gains(const Eigen::MatrixXd& P, const FrozenWeights& frozen,
                             const LinearGameMatrices& mats);

/// Terminal weight phi * sum_i D_i' D_i, where D_i s = e_i. Invariant under
/// translation of the whole configuration.
Eigen::MatrixXd relative_terminal_weight(int num_pursuers, double phi);

/// Frozen-weight game cost of a piecewise-constant open-loop or feedback
/// play over `slots` slots: 1/2 int (sum_i w_i |p_i|^2 - sigma |q|^2) dt +
/// 1/2 s_f' P_f s_f. Used to check the saddle property numerically.
struct FrozenGame {
  FrozenWeights frozen;
  LinearGameMatrices mats;
  Eigen::MatrixXd terminal_P;
  int slots = 5;
  double slot_seconds = 1.0;
  int substeps = 200;  // RK4 substeps per slot
};

/// Pursuer/evader strategy for `frozen_game_cost`: feedback from P(t), a
/// per-slot open-loop offset, or both. The Riccati solution must span the
/// game horizon with step slot_seconds / (2 * substeps) so that every RK4
/// stage lands on a grid point.
struct Strategy {
  const RiccatiSolution* riccati = nullptr;  // feedback from P(t); null = no feedback
  std::vector<Eigen::VectorXd> offsets;      // per slot, may be empty
};

double frozen_game_cost(const FrozenGame& game, const Eigen::VectorXd& s0, const Strategy& pursuers,
                        const Strategy& evader);

struct ClosedLoopOptions {
  bool analytic_evader = true;  // false: flee-from-centroid heuristic
  bool verbose = false;         // collect per-slot diagnostics
};

struct ClosedLoopDiagnostic {
  int slot = 0;
  double gain_norm_pursuers = 0.0;
  double gain_norm_evader = 0.0;
  double hamiltonian = 0.0;
  double hjb_residual = 0.0;
};

struct ClosedLoopResult {
  Trajectory trajectory;
  std::vector<GameState> states;  // every slot including the final one
  EpisodeOutcome outcome;
  bool aborted = false;
  std::string diagnostic;
  int horizon_cuts = 0;  // look-ahead halvings forced by divergence
  std::vector<ClosedLoopDiagnostic> diagnostics;
};

/// Receding-horizon feedback episode without delay: each slot freezes the
/// weights at the current (length-scaled) state, re-solves the Riccati
/// equation over the remaining horizon (capped at `lookahead`), applies the gains and steps the
/// vehicles. When the Riccati solution diverges the look-ahead is halved and
/// the solve repeated; divergence at a single step, or a singular state,
/// aborts the episode with a diagnostic.
ClosedLoopResult closed_loop_episode(const ScenarioConfig& config, const World& initial,
                                     Rng disturbance_rng, const ClosedLoopOptions& options = {});

}  // namespace uwh
