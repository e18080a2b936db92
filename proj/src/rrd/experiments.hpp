#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rrd/random.hpp"

namespace rrd {

/// Inclusive range of tree sizes.
struct SizeRange {
  std::size_t lo = 0;
  std::size_t hi = 0;

  bool contains(std::size_t n) const noexcept { return lo <= n && n <= hi; }
  bool operator==(const SizeRange&) const = default;
};

/// The size ranges used for the unreduced and reduced distance tables:
/// 10-19 through 90-99, 100-199 through 900-999, quarter-thousands up to
/// 3250-3499, then 3500-3999 and 4000-4500.
std::vector<SizeRange> standard_buckets();

/// Parses "lo:hi,lo:hi,..." or the literal "paper". A bare "n" means n:n.
/// Throws kInvalidArgument.
std::vector<SizeRange> parse_buckets(std::string_view text);

struct PairRecord {
  std::uint64_t stream_index = 0;
  std::size_t raw_size = 0;
  std::size_t reduced_size = 0;
  std::uint64_t distance = 0;

  double ratio_raw() const noexcept {
    return static_cast<double>(distance) / static_cast<double>(raw_size);
  }
  std::optional<double> ratio_reduced() const noexcept {
    if (reduced_size == 0) return std::nullopt;
    return static_cast<double>(distance) / static_cast<double>(reduced_size);
  }
  double reduced_fraction() const noexcept {
    return static_cast<double>(reduced_size) / static_cast<double>(raw_size);
  }

  bool operator==(const PairRecord&) const = default;
};

/// Samples one pair of the given raw size from `seed`, reduces it and
/// measures its distance.
PairRecord measure_pair(std::size_t raw_size, const Seed& seed);

struct BatchConfig {
  /// Each range receives count_per_range pairs; raw sizes are drawn
  /// uniformly from the range (a range with lo == hi is a fixed size).
  std::vector<SizeRange> ranges;
  std::size_t count_per_range = 0;
  std::uint64_t seed = 0;
  /// Worker threads; never affects the output.
  unsigned threads = 1;
};

/// Seed of record `index` in a batch with master seed `seed`.
Seed record_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Raw size for record `index` drawn from `range`.
std::size_t record_raw_size(const SizeRange& range, const Seed& record) noexcept;

/// Streams records to `sink` in stream-index order. Throws kInvalidArgument
/// for empty ranges, sizes below 1 or a zero count.
void run_batch(const BatchConfig& config, const std::function<void(const PairRecord&)>& sink);
std::vector<PairRecord> run_batch(const BatchConfig& config);

enum class AggregateMode {
  kRawSize,      // bucket by generated size, ratio = distance / raw size
  kReducedSize,  // bucket by reduced size, ratio = distance / reduced size
};

struct BucketRow {
  SizeRange range;
  std::size_t count = 0;
  std::optional<double> avg_reduced_fraction;
  std::optional<double> avg_ratio;
  std::optional<double> sd_ratio;
};

/// Buckets must be sorted and disjoint (kInvalidArgument otherwise). In
/// reduced-size mode records with reduced size 0 are skipped.
std::vector<BucketRow> aggregate(std::span<const PairRecord> records,
                                 std::span<const SizeRange> buckets, AggregateMode mode);

struct SummaryStats {
  std::size_t count = 0;
  double mean = 0;
  double sd = 0;        // sample standard deviation (n - 1)
  double skewness = 0;  // sample skewness g1
};

SummaryStats summarize(std::span<const double> values);

struct Histogram {
  std::size_t target_reduced_size = 0;
  std::uint64_t bin_width = 1;
  /// (bin lower edge, count), ascending and contiguous from min to max.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> bins;
  SummaryStats stats;
  /// Pairs generated on the fly to collect the sample (0 when built from
  /// existing records).
  std::uint64_t generated = 0;
};

/// Distance histogram over the records whose reduced size equals `target`.
Histogram histogram_from_records(std::span<const PairRecord> records, std::size_t target,
                                 std::uint64_t bin_width = 1);

struct HistogramSampling {
  std::size_t target_reduced_size = 0;
  std::size_t min_count = 0;
  std::uint64_t seed = 0;
  /// Give up (kBudgetExhausted) after generating this many pairs.
  std::uint64_t max_generated = 50'000'000;
  std::uint64_t bin_width = 1;
  unsigned threads = 1;
};

/// Raw sizes sampled for a reduced-size target: a window around
/// target / 0.928 about one reduced-size standard deviation wide.
SizeRange raw_window_for_reduced(std::size_t target) noexcept;

/// Generates pairs near the needed raw size until `min_count` of them reduce
/// to exactly the target size; the histogram holds the first min_count kept.
Histogram sample_histogram(const HistogramSampling& config);

struct FitPoint {
  double size = 0;
  double distance = 0;
};

struct FitResult {
  double slope = 0;
  double intercept = 0;
  /// max |distance - prediction| / distance over the fitted points.
  double max_relative_residual = 0;
  std::size_t count = 0;

  double predict(double size) const noexcept { return slope * size + intercept; }
};

/// Ordinary least squares. Throws kDegenerate with fewer than two distinct
/// sizes.
FitResult linear_fit(std::span<const FitPoint> points);

/// (size, distance) points by raw size, or by reduced size skipping fully
/// reduced records.
std::vector<FitPoint> fit_points(std::span<const PairRecord> records, AggregateMode mode);

struct DeviationReport {
  std::map<double, double> fraction_beyond;  // threshold -> fraction
  std::map<double, std::size_t> count_beyond;
  double max_relative_deviation = 0;
  std::size_t count = 0;
};

/// Relative deviation |distance - predicted| / predicted of every point.
DeviationReport deviation_report(std::span<const FitPoint> points, const FitResult& fit,
                                 std::span<const double> thresholds);

}  // namespace rrd
