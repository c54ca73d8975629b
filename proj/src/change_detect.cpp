#include "sicmab/change_detect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sicmab/error.hpp"
#include "sicmab/kernels.hpp"

namespace sicmab {

namespace {

// a ln(a / b) with 0 ln 0 = 0
double xlog_ratio(double a, double b) { return a == 0.0 ? 0.0 : a * std::log(a / b); }

double log_binomial(std::int32_t n, std::int32_t k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binomial_term(const WindowStats& stats) {
  // ln C(W, x) only takes W + 1 distinct values
  std::vector<double> table(static_cast<std::size_t>(stats.window_length) + 1);
  for (std::int32_t x = 0; x <= stats.window_length; ++x) {
    table[x] = log_binomial(stats.window_length, x);
  }
  double sum = 0.0;
  for (const std::int32_t x : stats.successes) sum += table[x];
  return sum;
}

void check_counts(const WindowStats& stats) {
  if (stats.window_length < 1) throw DomainError("window length must be positive");
  for (const std::int32_t x : stats.successes) {
    if (x < 0 || x > stats.window_length) throw DomainError("window count outside [0, W]");
  }
}

// f(n) = n ln n for n = 0..size-1, grown on demand per thread.
std::span<const double> xlogx_table(std::size_t size) {
  thread_local std::vector<double> table{0.0};
  if (table.size() < size) {
    std::size_t n = table.size();
    table.resize(std::max(size, 2 * n));
    for (; n < table.size(); ++n) {
      const double v = static_cast<double>(n);
      table[n] = v * std::log(v);
    }
  }
  return table;
}

}  // namespace

std::int64_t WindowStats::total_successes() const {
  return std::accumulate(successes.begin(), successes.end(), std::int64_t{0});
}

AckHistory::AckHistory(std::int32_t window_length, std::int32_t shift_step)
    : window_length_(window_length), shift_step_(shift_step) {
  if (window_length < 1) throw ConfigError("window", "window length must be >= 1");
  if (shift_step < 1 || shift_step > window_length) {
    throw ConfigError("shift", "shift step must satisfy 1 <= F <= W");
  }
}

std::int64_t AckHistory::popcount() const {
  return std::accumulate(bits_.begin(), bits_.end(), std::int64_t{0});
}

std::optional<WindowStats> windowize(std::span<const std::uint8_t> bits, std::int32_t window_length,
                                     std::int32_t shift_step) {
  if (window_length < 1 || shift_step < 1 || shift_step > window_length) {
    throw DomainError("windowing requires 1 <= F <= W");
  }
  const auto l = static_cast<std::int64_t>(bits.size());
  if (l < window_length) return std::nullopt;

  const std::int64_t windows = (l - window_length) / shift_step + 1;
  std::vector<std::int32_t> prefix(bits.size() + 1, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) prefix[i + 1] = prefix[i] + (bits[i] != 0);

  WindowStats stats;
  stats.window_length = window_length;
  stats.successes.resize(static_cast<std::size_t>(windows));
  for (std::int64_t d = 0; d < windows; ++d) {
    const std::int64_t begin = d * shift_step;
    stats.successes[d] = prefix[begin + window_length] - prefix[begin];
  }
  return stats;
}

std::optional<WindowStats> windowize(const AckHistory& history) {
  return windowize(history.bits(), history.window_length(), history.shift_step());
}

double sic_h0(const WindowStats& stats) {
  check_counts(stats);
  const std::size_t d = stats.window_count();
  if (d < 1) throw DomainError("SIC needs at least one window");
  const double x = static_cast<double>(stats.total_successes());
  const double y = static_cast<double>(stats.total_attempts());
  return std::log(static_cast<double>(d)) - 2.0 * binomial_term(stats) -
         2.0 * xlog_ratio(y - x, y) - 2.0 * xlog_ratio(x, y);
}

double sic_h1(const WindowStats& stats, std::size_t split) {
  check_counts(stats);
  const std::size_t d = stats.window_count();
  if (split < 1 || split + 1 > d) throw DomainError("split point must satisfy 1 <= j <= D-1");

  const double x = static_cast<double>(stats.total_successes());
  const double y = static_cast<double>(stats.total_attempts());
  const double xj = static_cast<double>(
      std::accumulate(stats.successes.begin(), stats.successes.begin() + split, std::int64_t{0}));
  const double yj = static_cast<double>(split) * stats.window_length;
  const double xr = x - xj;
  const double yr = y - yj;
  return 2.0 * std::log(static_cast<double>(d)) - 2.0 * binomial_term(stats) -
         2.0 * xlog_ratio(yj - xj, yj) - 2.0 * xlog_ratio(xj, yj) - 2.0 * xlog_ratio(yr - xr, yr) -
         2.0 * xlog_ratio(xr, yr);
}

SicResult detect(const WindowStats& stats, double theta) {
  SicResult result;
  const std::size_t d = stats.window_count();
  if (d < 2) return result;
  check_counts(stats);

  std::vector<std::int32_t> prefix(d + 1, 0);
  for (std::size_t i = 0; i < d; ++i) prefix[i + 1] = prefix[i] + stats.successes[i];
  const std::int32_t total_x = prefix[d];
  const std::int32_t total_y = static_cast<std::int32_t>(d) * stats.window_length;
  const auto f = xlogx_table(static_cast<std::size_t>(total_y) + 1);

  std::vector<double> loglik(d - 1);
  kernels::active().segment_loglik(prefix, stats.window_length, f, loglik);
  const std::size_t best = kernels::argmax_first(loglik);

  const double log_d = std::log(static_cast<double>(d));
  const double binom = binomial_term(stats);
  const double pooled = (f[total_x] + f[total_y - total_x]) - f[total_y];
  result.sic_h0 = log_d - 2.0 * binom - 2.0 * pooled;
  result.sic_h1_min = 2.0 * log_d - 2.0 * binom - 2.0 * loglik[best];
  result.best_split = best + 1;
  // same as sic_h0 - sic_h1_min, without cancelling the binomial sums
  result.statistic = 2.0 * (loglik[best] - pooled) - log_d;
  result.detected = result.statistic > theta;
  return result;
}

SicResult detect(const AckHistory& history, double theta) {
  const auto stats = windowize(history);
  if (!stats) return {};
  return detect(*stats, theta);
}

}  // namespace sicmab
