#pragma once

#include <vector>

namespace uwh {

/// Learning hyperparameters. `epsilon` is the probability of acting greedily.
struct DqnHyperparams {
  double learning_rate = 0.0002;
  int episodes = 5000;
  double discount = 0.9;
  int batch_size = 128;
  int memory_capacity = 10000;
  double epsilon = 0.9;
  int target_sync_interval = 100;  // gradient steps
  std::vector<int> hidden_sizes{64, 64};
  int warmup_slots = 5;  // t0
  int heading_bins = 7;
  double reward_floor = 1e-6;
  double progress_weight = 1.0;  // per metre of closing on the delayed target
  bool epsilon_anneal = false;
  double epsilon_start = 0.0;
  int anneal_episodes = 1000;
  int train_interval = 1;  // slots between gradient steps

  void validate() const;
  /// Greedy probability used in `episode` (constant unless annealing).
  [[nodiscard]] double epsilon_at(int episode) const;
};

}  // namespace uwh
