#pragma once

// Sound speed, acoustic link delays and the per-episode history of game
// states that controllers read with a delay.

#include <cstddef>
#include <deque>
#include <span>

#include "uwhunt/game.hpp"

namespace uwh {

struct WaterColumn {
  double temperature = 10.0;  // deg C
  double salinity = 35.0;     // psu
  double pressure = 200.0;    // decibar (~ depth in m)

  /// Rejects values outside T in [-2, 40], S in [0, 45], P >= 0.
  void validate() const;
};

/// Empirical sound speed 1450 + 4.21T - 0.037T^2 + 1.14(S-35) + 0.175P, m/s.
double sound_speed(const WaterColumn& water);

/// separation / (sound - receiver_speed). Throws PropagationError when the
/// receiver is at least as fast as sound, DomainError on negative inputs.
double one_way_delay(double separation, double receiver_speed, double sound);

/// Mean over all pursuer/target links of both directions' delays.
/// `speeds` holds M pursuer speeds followed by the target speed.
double average_delay(const GameState& state, std::span<const double> speeds, double sound);

/// Bounded, contiguous history of game states indexed by slot.
class DelayBuffer {
 public:
  explicit DelayBuffer(std::size_t capacity);

  /// Appends the state of the next slot. Throws StateError if the slot does
  /// not directly follow the newest entry.
  void push(const GameState& state);

  [[nodiscard]] bool empty() const { return entries_.empty(); }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] std::size_t capacity() const { return capacity_; }
  [[nodiscard]] int oldest_slot() const;
  [[nodiscard]] int newest_slot() const;
  /// State recorded at `slot`; the slot must be retained.
  [[nodiscard]] const GameState& at(int slot) const;
  [[nodiscard]] const GameState& newest() const;

 private:
  std::size_t capacity_;
  std::deque<GameState> entries_;
};

struct DelayedView {
  const GameState* state = nullptr;
  int slot = 0;
  bool truncated = false;  // requested slot predates the retained history
};

/// State at slot now - floor(delay), or the oldest retained state (flagged
/// truncated) when that slot is gone. Throws StateError on an empty buffer.
DelayedView delayed_view(const DelayBuffer& buffer, int now, double delay);

/// floor() of a delay in slots, as an integer slot count.
int delay_slots(double delay_seconds, double slot_seconds = 1.0);

}  // namespace uwh
