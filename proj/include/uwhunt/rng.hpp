#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace uwh {

/// Independent random streams derived from one run seed. The order is fixed
/// so that changing one subsystem never shifts another subsystem's draws.
enum class Stream : std::uint64_t {
  Placement = 1,
  Disturbance = 2,
  Exploration = 3,
  Replay = 4,
  Init = 5,
  Evaluation = 6,
};

/// Seeded 64-bit Mersenne Twister with portable uniform helpers (the
/// std distributions are implementation defined, these are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  /// Stream `stream` of run `seed`, optionally further split by `index`
  /// (episode number, worker id).
  static Rng stream(std::uint64_t seed, Stream stream, std::uint64_t index = 0);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n). Requires n > 0.
  std::uint64_t uniform_index(std::uint64_t n);

  [[nodiscard]] std::string serialize() const;
  void deserialize(const std::string& state);

  friend bool operator==(const Rng& a, const Rng& b) { return a.engine_ == b.engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace uwh
