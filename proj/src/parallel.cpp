#include "uwhunt/parallel.hpp"

#include <omp.h>

#include <exception>

#include "uwhunt/errors.hpp"

namespace uwh {

namespace {

std::vector<int> window_ends(std::size_t length, int window, int stride) {
  if (window < 2) throw DomainError("windowed_consistency: window must be >= 2");
  if (stride < 1) throw DomainError("windowed_consistency: stride must be >= 1");
  const int n = static_cast<int>(length);
  std::vector<int> ends;
  if (n < 2) return ends;
  if (n <= window) return {n};
  for (int end = window; end <= n; end += stride) ends.push_back(end);
  return ends;
}

ConsistencyRow consistency_row(const std::vector<std::vector<double>>& series, int end, int window,
                               bool pair_normalized) {
  const int begin = std::max(0, end - window);
  ConsistencyRow row;
  row.window_end = end;
  for (std::size_t i = 0; i < series.size(); ++i)
    for (std::size_t j = i + 1; j < series.size(); ++j)
      row.pairs.push_back(kendall_pair(
          std::span<const double>(series[i]).subspan(begin, end - begin),
          std::span<const double>(series[j]).subspan(begin, end - begin)));
  row.kappa = consistency_from_pairs(row.pairs, static_cast<int>(series.size()), pair_normalized);
  return row;
}

void check_series(const std::vector<std::vector<double>>& series) {
  if (series.size() < 2) throw DomainError("windowed_consistency: need at least two series");
  for (const auto& s : series)
    if (s.size() != series.front().size())
      throw DomainError("windowed_consistency: series lengths differ");
}

// Runs body(i) for i in [0, n) on the OpenMP pool and rethrows the first
// exception on the calling thread.
template <typename Body>
void parallel_for(int n, Body&& body) {
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(uwh_parallel_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<ConsistencyRow> windowed_consistency_serial(
    const std::vector<std::vector<double>>& series, int window, int stride, bool pair_normalized) {
  check_series(series);
  std::vector<ConsistencyRow> rows;
  for (int end : window_ends(series.front().size(), window, stride))
    rows.push_back(consistency_row(series, end, window, pair_normalized));
  return rows;
}

std::vector<ConsistencyRow> windowed_consistency(const std::vector<std::vector<double>>& series,
                                                 int window, int stride, bool pair_normalized) {
  check_series(series);
  const auto ends = window_ends(series.front().size(), window, stride);
  std::vector<ConsistencyRow> rows(ends.size());
  parallel_for(static_cast<int>(ends.size()), [&](int k) {
    rows[k] = consistency_row(series, ends[k], window, pair_normalized);
  });
  return rows;
}

EpisodeStreams evaluation_streams(std::uint64_t seed, int index) {
  const auto base = 3 * static_cast<std::uint64_t>(index);
  return {Rng::stream(seed, Stream::Evaluation, base), Rng::stream(seed, Stream::Evaluation, base + 1),
          Rng::stream(seed, Stream::Evaluation, base + 2)};
}

namespace {

EpisodeResult evaluation_episode(const ScenarioConfig& config, const Mlp& policy, int index,
                                 double epsilon, bool record_trajectory) {
  EpisodeOptions opts;
  opts.learn = false;
  opts.epsilon = epsilon;
  opts.record_trajectory = record_trajectory;
  return run_episode(config, nullptr, policy, evaluation_streams(config.seed, index), opts);
}

ClosedLoopResult closed_loop_one(const ScenarioConfig& config, int index,
                                 const ClosedLoopOptions& options) {
  EpisodeStreams s = evaluation_streams(config.seed, index);
  const World w = place_initial(config, s.placement);
  return closed_loop_episode(config, w, std::move(s.disturbance), options);
}

}  // namespace

std::vector<EpisodeResult> evaluate_policy_serial(const ScenarioConfig& config, const Mlp& policy,
                                                  int episodes, double epsilon,
                                                  bool record_trajectory) {
  std::vector<EpisodeResult> out;
  for (int i = 0; i < episodes; ++i)
    out.push_back(evaluation_episode(config, policy, i, epsilon, record_trajectory));
  return out;
}

std::vector<EpisodeResult> evaluate_policy(const ScenarioConfig& config, const Mlp& policy,
                                           int episodes, double epsilon, bool record_trajectory) {
  std::vector<EpisodeResult> out(static_cast<std::size_t>(std::max(0, episodes)));
  parallel_for(episodes, [&](int i) {
    out[i] = evaluation_episode(config, policy, i, epsilon, record_trajectory);
  });
  return out;
}

std::vector<ClosedLoopResult> closed_loop_batch_serial(const ScenarioConfig& config, int episodes,
                                                       const ClosedLoopOptions& options) {
  std::vector<ClosedLoopResult> out;
  for (int i = 0; i < episodes; ++i) out.push_back(closed_loop_one(config, i, options));
  return out;
}

std::vector<ClosedLoopResult> closed_loop_batch(const ScenarioConfig& config, int episodes,
                                                const ClosedLoopOptions& options) {
  std::vector<ClosedLoopResult> out(static_cast<std::size_t>(std::max(0, episodes)));
  parallel_for(episodes, [&](int i) { out[i] = closed_loop_one(config, i, options); });
  return out;
}

int worker_threads() { return omp_get_max_threads(); }

}  // namespace uwh
