#pragma once

// Team-consistency statistics over per-episode pursuer pay-offs and curve
// smoothing for reporting.

#include <span>
#include <vector>

namespace uwh {

/// (2 / (l (l - 1))) sum_{m<n} sgn(a_m - a_n) sgn(b_m - b_n) with sgn(0) = 0.
/// Throws DomainError on a length mismatch or l < 2.
double kendall_pair(std::span<const double> a, std::span<const double> b);

/// kappa_ij for all i < j in lexicographic order.
std::vector<double> pairwise_kendall(const std::vector<std::vector<double>>& series);

/// (1/M) sum_{i<j} kappa_ij, or the mean over the M(M-1)/2 pairs when
/// `pair_normalized`. Throws DomainError for fewer than two series.
double consistency_index(const std::vector<std::vector<double>>& series,
                         bool pair_normalized = false);

/// Same index from already computed pair values.
double consistency_from_pairs(std::span<const double> pairs, int num_series, bool pair_normalized);

/// Centered moving average; near the ends the window is truncated to the
/// available samples. `window` must be odd and >= 1.
std::vector<double> smooth_curve(std::span<const double> values, int window);

struct ConsistencyRow {
  int window_end = 0;  // exclusive episode index closing the window
  double kappa = 0.0;
  std::vector<double> pairs;
};

}  // namespace uwh
