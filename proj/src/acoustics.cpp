#include "uwhunt/acoustics.hpp"

#include <cmath>
#include <string>

#include "uwhunt/errors.hpp"

namespace uwh {

void WaterColumn::validate() const {
  if (!(temperature >= -2.0 && temperature <= 40.0))
    throw DomainError("acoustics.temperature outside [-2, 40] degC");
  if (!(salinity >= 0.0 && salinity <= 45.0))
    throw DomainError("acoustics.salinity outside [0, 45] psu");
  if (!(pressure >= 0.0)) throw DomainError("acoustics.pressure must be >= 0");
}

double sound_speed(const WaterColumn& water) {
  water.validate();
  const double t = water.temperature;
  return 1450.0 + 4.21 * t - 0.037 * t * t + 1.14 * (water.salinity - 35.0) +
         0.175 * water.pressure;
}

double one_way_delay(double separation, double receiver_speed, double sound) {
  if (!(separation >= 0.0)) throw DomainError("one_way_delay: negative separation");
  if (!(receiver_speed >= 0.0)) throw DomainError("one_way_delay: negative receiver speed");
  if (!(sound > receiver_speed))
    throw PropagationError("one_way_delay: receiver at least as fast as sound");
  return separation / (sound - receiver_speed);
}

double average_delay(const GameState& state, std::span<const double> speeds, double sound) {
  const int m = state.num_pursuers();
  if (m < 1) throw DomainError("average_delay: need at least one pursuer");
  if (static_cast<int>(speeds.size()) != m + 1)
    throw DomainError("average_delay: need M pursuer speeds plus the target speed");
  const double target_speed = speeds[m];
  double sum = 0.0;
  const auto e = relative_vectors(state);
  for (int i = 0; i < m; ++i) {
    const double d = e[i].norm();
    sum += one_way_delay(d, target_speed, sound) + one_way_delay(d, speeds[i], sound);
  }
  return sum / (2.0 * m);
}

DelayBuffer::DelayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw DomainError("DelayBuffer: capacity must be >= 1");
}

void DelayBuffer::push(const GameState& state) {
  if (!entries_.empty() && state.slot != entries_.back().slot + 1)
    throw StateError("DelayBuffer::push: slot " + std::to_string(state.slot) +
                     " does not follow " + std::to_string(entries_.back().slot));
  entries_.push_back(state);
  while (entries_.size() > capacity_) entries_.pop_front();
}

int DelayBuffer::oldest_slot() const {
  if (entries_.empty()) throw StateError("DelayBuffer: empty");
  return entries_.front().slot;
}

int DelayBuffer::newest_slot() const {
  if (entries_.empty()) throw StateError("DelayBuffer: empty");
  return entries_.back().slot;
}

const GameState& DelayBuffer::at(int slot) const {
  if (entries_.empty()) throw StateError("DelayBuffer: empty");
  const int offset = slot - entries_.front().slot;
  if (offset < 0 || offset >= static_cast<int>(entries_.size()))
    throw StateError("DelayBuffer::at: slot " + std::to_string(slot) + " not retained");
  return entries_[static_cast<std::size_t>(offset)];
}

const GameState& DelayBuffer::newest() const {
  if (entries_.empty()) throw StateError("DelayBuffer: empty");
  return entries_.back();
}

int delay_slots(double delay_seconds, double slot_seconds) {
  if (!(delay_seconds >= 0.0)) throw DomainError("delay_slots: negative delay");
  return static_cast<int>(std::floor(delay_seconds / slot_seconds));
}

DelayedView delayed_view(const DelayBuffer& buffer, int now, double delay) {
  if (buffer.empty()) throw StateError("delayed_view: empty buffer");
  const int wanted = std::min(now, buffer.newest_slot()) - delay_slots(delay);
  DelayedView view;
  if (wanted < buffer.oldest_slot()) {
    view.slot = buffer.oldest_slot();
    view.truncated = true;
  } else {
    view.slot = wanted;
  }
  view.state = &buffer.at(view.slot);
  return view;
}

}  // namespace uwh
