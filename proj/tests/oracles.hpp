#pragma once
// Independent reference computations used by the unit and acceptance tests.
// They are written from the defining formulas, without sharing code with the
// library, so that agreement is meaningful.

#include <cmath>
#include <vector>

#include "uwhunt/game.hpp"

namespace oracle {

inline double sound_speed(double t, double s, double p) {
  return 1450.0 + 4.21 * t - 0.037 * t * t + 1.14 * (s - 35.0) + 0.175 * p;
}

/// Kendall consistency by enumerating every ordered pair of episodes.
inline double kendall(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t l = a.size();
  if (l < 2) return 0.0;
  long total = 0;
  for (std::size_t m = 0; m < l; ++m) {
    for (std::size_t n = 0; n < l; ++n) {
      if (m == n) continue;
      const int sa = (a[m] > a[n]) - (a[m] < a[n]);
      const int sb = (b[m] > b[n]) - (b[m] < b[n]);
      total += sa * sb;
    }
  }
  return static_cast<double>(total) / static_cast<double>(l * (l - 1));
}

/// p(t) = p_f / (1 + p_f (T - t)), the solution of p' = p^2, p(T) = p_f.
inline double scalar_riccati(double pf, double horizon, double t) {
  return pf / (1.0 + pf * (horizon - t));
}

/// System pay-off recomputed slot by slot from the raw positions.
inline double system_payoff(const uwh::Trajectory& traj, double alpha, double beta, double r,
                            double c, double a, double b, double attack, double sense) {
  double running = 0.0;
  for (const auto& step : traj.steps) {
    const auto& st = step.state;
    const std::size_t m = st.pursuers.size();
    for (std::size_t i = 0; i < m; ++i) {
      double gd = 0.0, gc = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        const double dx = st.pursuers[i].x() - st.pursuers[j].x();
        const double dy = st.pursuers[i].y() - st.pursuers[j].y();
        const double d2 = dx * dx + dy * dy;
        gd += std::pow(d2 - r * r, -c);
        gc += d2;
      }
      const double px = step.controls.pursuers[i].x(), py = step.controls.pursuers[i].y();
      const double ex = st.target.x() - st.pursuers[i].x();
      const double ey = st.target.y() - st.pursuers[i].y();
      const double q2 = step.controls.target.x() * step.controls.target.x() +
                        step.controls.target.y() * step.controls.target.y();
      running += 0.5 * (alpha * gd + beta * gc) * (px * px + py * py) * traj.dt;
      running -= 0.5 * q2 / (ex * ex + ey * ey) * traj.dt;
    }
  }
  if (traj.outcome == uwh::Outcome::Continue) return running;
  const auto& f = traj.final_state;
  double sf2 = 0.0;
  for (const auto& u : f.pursuers) sf2 += (u - traj.origin).squaredNorm();
  sf2 += (f.target - traj.origin).squaredNorm();
  double terminal = 0.0;
  bool captured = false;
  for (const auto& u : f.pursuers) captured = captured || (f.target - u).norm() < attack;
  for (const auto& u : f.pursuers) {
    const double d = (f.target - u).norm();
    double phi;
    if (d > sense) phi = 1.0 / a;
    else if (d < attack) phi = 1.0 / b;
    else phi = captured ? 1.0 / b : 1.0 / a;
    terminal -= sf2 * phi;
  }
  return running + terminal;
}

}  // namespace oracle
