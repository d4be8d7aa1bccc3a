#pragma once

// Versioned binary checkpoint of a learner: architecture, online and target
// parameters, optimizer moments, the scenario (hyperparameters included) and
// the replay sampling RNG state. Replay contents are not stored.

#include <filesystem>
#include <string>

#include "uwhunt/config.hpp"
#include "uwhunt/dqn.hpp"

namespace uwh {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  ScenarioConfig config;
  int episodes_done = 0;
  std::vector<int> layer_sizes;
  Eigen::VectorXd online;
  Eigen::VectorXd target;
  long adam_steps = 0;
  Eigen::VectorXd adam_m;
  Eigen::VectorXd adam_v;
  long gradient_steps = 0;
  std::string replay_rng;
};

Checkpoint make_checkpoint(const ScenarioConfig& config, const Learner& learner, int episodes_done);
/// Learner with the stored networks, optimizer and RNG and an empty replay.
Learner restore_learner(const Checkpoint& ckpt);
/// Network with the stored online parameters.
Mlp restore_policy(const Checkpoint& ckpt);

std::string encode_checkpoint(const Checkpoint& ckpt);
/// Throws DomainError on a bad magic, unsupported version or truncated data.
Checkpoint decode_checkpoint(const std::string& bytes);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace uwh
