#include "uwhunt/metrics.hpp"

#include <algorithm>

#include "uwhunt/errors.hpp"

namespace uwh {

namespace {

int sgn(double a, double b) { return (a > b) - (a < b); }

}  // namespace

double kendall_pair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw DomainError("kendall_pair: series lengths differ (" + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()) + ")");
  const std::size_t l = a.size();
  if (l < 2) throw DomainError("kendall_pair: need at least two samples");
  long long sum = 0;
  for (std::size_t m = 0; m < l; ++m)
    for (std::size_t n = m + 1; n < l; ++n) sum += sgn(a[m], a[n]) * sgn(b[m], b[n]);
  return 2.0 * static_cast<double>(sum) / (static_cast<double>(l) * static_cast<double>(l - 1));
}

std::vector<double> pairwise_kendall(const std::vector<std::vector<double>>& series) {
  std::vector<double> out;
  for (std::size_t i = 0; i < series.size(); ++i)
    for (std::size_t j = i + 1; j < series.size(); ++j)
      out.push_back(kendall_pair(series[i], series[j]));
  return out;
}

double consistency_from_pairs(std::span<const double> pairs, int num_series, bool pair_normalized) {
  if (num_series < 2) throw DomainError("consistency_index: need at least two series");
  if (static_cast<int>(pairs.size()) != num_series * (num_series - 1) / 2)
    throw DomainError("consistency_index: pair count does not match the series count");
  double sum = 0.0;
  for (double k : pairs) sum += k;
  return pair_normalized ? sum / static_cast<double>(pairs.size()) : sum / num_series;
}

double consistency_index(const std::vector<std::vector<double>>& series, bool pair_normalized) {
  if (series.size() < 2) throw DomainError("consistency_index: need at least two series");
  return consistency_from_pairs(pairwise_kendall(series), static_cast<int>(series.size()),
                                pair_normalized);
}

std::vector<double> smooth_curve(std::span<const double> values, int window) {
  if (window < 1 || window % 2 == 0)
    throw DomainError("smooth_curve: window must be odd and >= 1, got " + std::to_string(window));
  const auto n = static_cast<long>(values.size());
  const long half = window / 2;
  std::vector<double> out(values.size());
  for (long i = 0; i < n; ++i) {
    const long lo = std::max(0L, i - half);
    const long hi = std::min(n - 1, i + half);
    double sum = 0.0;
    bool flat = true;
    for (long j = lo; j <= hi; ++j) {
      sum += values[j];
      flat = flat && values[j] == values[i];
    }
    out[i] = flat ? values[i] : sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

}  // namespace uwh
