#pragma once

// Batch kernels with an OpenMP implementation and a serial reference that
// must produce identical results.

#include <vector>

#include "uwhunt/analytic.hpp"
#include "uwhunt/config.hpp"
#include "uwhunt/dqn.hpp"
#include "uwhunt/metrics.hpp"

namespace uwh {

/// Consistency over sliding windows of `window` episodes advanced by
/// `stride`: row k covers episodes [end - window, end) with
/// end = window + k * stride. A series shorter than the window yields one
/// row over the whole series.
std::vector<ConsistencyRow> windowed_consistency_serial(
    const std::vector<std::vector<double>>& series, int window, int stride, bool pair_normalized);
std::vector<ConsistencyRow> windowed_consistency(const std::vector<std::vector<double>>& series,
                                                 int window, int stride, bool pair_normalized);

/// Streams for evaluation episode `index`, disjoint from training streams.
EpisodeStreams evaluation_streams(std::uint64_t seed, int index);

/// Frozen-policy rollouts, one per evaluation index in [0, episodes).
std::vector<EpisodeResult> evaluate_policy_serial(const ScenarioConfig& config, const Mlp& policy,
                                                  int episodes, double epsilon,
                                                  bool record_trajectory = false);
std::vector<EpisodeResult> evaluate_policy(const ScenarioConfig& config, const Mlp& policy,
                                           int episodes, double epsilon,
                                           bool record_trajectory = false);

/// Analytic closed-loop episodes from per-episode placement/disturbance
/// streams.
std::vector<ClosedLoopResult> closed_loop_batch_serial(const ScenarioConfig& config, int episodes,
                                                       const ClosedLoopOptions& options = {});
std::vector<ClosedLoopResult> closed_loop_batch(const ScenarioConfig& config, int episodes,
                                                const ClosedLoopOptions& options = {});

/// Number of OpenMP threads the parallel kernels will use.
int worker_threads();

}  // namespace uwh
