#include "rrd/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iterator>
#include <string>
#include <thread>

#include "rrd/error.hpp"
#include "rrd/metric.hpp"
#include "rrd/transform.hpp"

namespace rrd {

namespace {

// Work is computed in fixed-size blocks so the result never depends on the
// thread count.
constexpr std::size_t kBlock = 4096;

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, count);
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
}

std::size_t parse_size(std::string_view text, std::string_view whole) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::kInvalidArgument,
                "bad bucket specification '" + std::string(whole) + "'");
  }
  return value;
}

void check_buckets(std::span<const SizeRange> buckets) {
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    if (buckets[i].lo > buckets[i].hi) {
      throw Error(ErrorCode::kInvalidArgument, "bucket " + std::to_string(buckets[i].lo) + ":" +
                                                   std::to_string(buckets[i].hi) +
                                                   " is empty");
    }
    if (i > 0 && buckets[i].lo <= buckets[i - 1].hi) {
      throw Error(ErrorCode::kInvalidArgument, "overlapping or unsorted buckets at " +
                                                   std::to_string(buckets[i].lo) + ":" +
                                                   std::to_string(buckets[i].hi));
    }
  }
}

}  // namespace

std::vector<SizeRange> standard_buckets() {
  std::vector<SizeRange> out;
  for (std::size_t lo = 10; lo < 100; lo += 10) out.push_back({lo, lo + 9});
  for (std::size_t lo = 100; lo < 1000; lo += 100) out.push_back({lo, lo + 99});
  for (std::size_t lo = 1000; lo < 3500; lo += 250) out.push_back({lo, lo + 249});
  out.push_back({3500, 3999});
  out.push_back({4000, 4500});
  return out;
}

std::vector<SizeRange> parse_buckets(std::string_view text) {
  if (text == "paper") return standard_buckets();
  std::vector<SizeRange> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? text.npos
                                                                          : comma - start);
    const auto colon = item.find(':');
    SizeRange r;
    if (colon == std::string_view::npos) {
      r.lo = r.hi = parse_size(item, text);
    } else {
      r.lo = parse_size(item.substr(0, colon), text);
      r.hi = parse_size(item.substr(colon + 1), text);
    }
    out.push_back(r);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  check_buckets(out);
  return out;
}

PairRecord measure_pair(std::size_t raw_size, const Seed& seed) {
  const auto reduced = reduce_pair(sample_pair(raw_size, seed));
  const auto d = restricted_distance_reduced(reduced, /*skip_type_pairs=*/true);
  PairRecord rec;
  rec.stream_index = seed.stream_index;
  rec.raw_size = raw_size;
  rec.reduced_size = reduced.size();
  rec.distance = d.distance;
  return rec;
}

Seed record_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return derive_seed(Seed{seed, 0}, index);
}

std::size_t record_raw_size(const SizeRange& range, const Seed& record) noexcept {
  if (range.lo >= range.hi) return range.lo;
  SplitMix64 gen(derive_seed(record, 2));
  return range.lo + static_cast<std::size_t>(gen.below(range.hi - range.lo + 1));
}

void run_batch(const BatchConfig& config, const std::function<void(const PairRecord&)>& sink) {
  if (config.ranges.empty()) throw Error(ErrorCode::kInvalidArgument, "no sizes requested");
  if (config.count_per_range == 0) throw Error(ErrorCode::kInvalidArgument, "count must be >= 1");
  for (const auto& r : config.ranges) {
    if (r.lo < 1 || r.lo > r.hi) {
      throw Error(ErrorCode::kInvalidArgument, "size range " + std::to_string(r.lo) + ":" +
                                                   std::to_string(r.hi) + " is invalid");
    }
  }
  const std::uint64_t total =
      static_cast<std::uint64_t>(config.ranges.size()) * config.count_per_range;
  std::vector<PairRecord> block;
  for (std::uint64_t first = 0; first < total; first += kBlock) {
    const auto len = static_cast<std::size_t>(std::min<std::uint64_t>(kBlock, total - first));
    block.assign(len, PairRecord{});
    parallel_for(len, config.threads, [&](std::size_t k) {
      const std::uint64_t index = first + k;
      const auto& range = config.ranges[index / config.count_per_range];
      const Seed s = record_seed(config.seed, index);
      block[k] = measure_pair(record_raw_size(range, s), s);
    });
    for (const auto& rec : block) sink(rec);
  }
}

std::vector<PairRecord> run_batch(const BatchConfig& config) {
  std::vector<PairRecord> out;
  out.reserve(config.ranges.size() * config.count_per_range);
  run_batch(config, [&out](const PairRecord& r) { out.push_back(r); });
  return out;
}

SummaryStats summarize(std::span<const double> values) {
  SummaryStats s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0;
  for (const double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double m2 = 0;
  double m3 = 0;
  for (const double v : values) {
    const double d = v - s.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  const auto n = static_cast<double>(values.size());
  if (values.size() > 1) s.sd = std::sqrt(m2 / (n - 1));
  if (m2 > 0) s.skewness = (m3 / n) / std::pow(m2 / n, 1.5);
  return s;
}

std::vector<BucketRow> aggregate(std::span<const PairRecord> records,
                                 std::span<const SizeRange> buckets, AggregateMode mode) {
  check_buckets(buckets);
  std::vector<std::vector<double>> ratios(buckets.size());
  std::vector<double> fraction_sum(buckets.size(), 0.0);
  for (const auto& rec : records) {
    const bool by_reduced = mode == AggregateMode::kReducedSize;
    if (by_reduced && rec.reduced_size == 0) continue;
    const std::size_t key = by_reduced ? rec.reduced_size : rec.raw_size;
    const auto it = std::upper_bound(buckets.begin(), buckets.end(), key,
                                     [](std::size_t k, const SizeRange& b) { return k < b.lo; });
    if (it == buckets.begin()) continue;
    const auto b = static_cast<std::size_t>(std::prev(it) - buckets.begin());
    if (!buckets[b].contains(key)) continue;
    ratios[b].push_back(by_reduced ? *rec.ratio_reduced() : rec.ratio_raw());
    fraction_sum[b] += rec.reduced_fraction();
  }

  std::vector<BucketRow> rows;
  rows.reserve(buckets.size());
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    BucketRow row;
    row.range = buckets[b];
    row.count = ratios[b].size();
    if (row.count > 0) {
      const auto stats = summarize(ratios[b]);
      row.avg_reduced_fraction = fraction_sum[b] / static_cast<double>(row.count);
      row.avg_ratio = stats.mean;
      row.sd_ratio = stats.sd;
    }
    rows.push_back(row);
  }
  return rows;
}

namespace {

Histogram build_histogram(std::size_t target, std::uint64_t bin_width,
                          const std::vector<std::uint64_t>& distances) {
  if (bin_width == 0) throw Error(ErrorCode::kInvalidArgument, "bin width must be >= 1");
  Histogram h;
  h.target_reduced_size = target;
  h.bin_width = bin_width;
  std::vector<double> values(distances.begin(), distances.end());
  h.stats = summarize(values);
  if (distances.empty()) return h;
  const auto [lo_it, hi_it] = std::minmax_element(distances.begin(), distances.end());
  const std::uint64_t first = *lo_it / bin_width * bin_width;
  const std::uint64_t nbins = (*hi_it - first) / bin_width + 1;
  std::vector<std::uint64_t> counts(nbins, 0);
  for (const auto d : distances) ++counts[(d - first) / bin_width];
  h.bins.reserve(nbins);
  for (std::uint64_t i = 0; i < nbins; ++i) h.bins.emplace_back(first + i * bin_width, counts[i]);
  return h;
}

}  // namespace

Histogram histogram_from_records(std::span<const PairRecord> records, std::size_t target,
                                 std::uint64_t bin_width) {
  std::vector<std::uint64_t> distances;
  for (const auto& r : records) {
    if (r.reduced_size == target) distances.push_back(r.distance);
  }
  return build_histogram(target, bin_width, distances);
}

SizeRange raw_window_for_reduced(std::size_t target) noexcept {
  const auto center = static_cast<std::size_t>(std::llround(static_cast<double>(target) / 0.928));
  const auto half = static_cast<std::size_t>(
      std::ceil(0.3 * std::sqrt(static_cast<double>(std::max<std::size_t>(center, 1)))));
  return {std::max<std::size_t>(target, center > half ? center - half : 1), center + half};
}

Histogram sample_histogram(const HistogramSampling& config) {
  if (config.target_reduced_size < 1) {
    throw Error(ErrorCode::kInvalidArgument, "target reduced size must be >= 1");
  }
  const SizeRange window = raw_window_for_reduced(config.target_reduced_size);
  std::vector<std::uint64_t> kept;
  kept.reserve(config.min_count);
  std::vector<PairRecord> block;
  std::uint64_t generated = 0;
  while (kept.size() < config.min_count) {
    if (generated >= config.max_generated) {
      throw Error(ErrorCode::kBudgetExhausted,
                  "collected " + std::to_string(kept.size()) + " of " +
                      std::to_string(config.min_count) + " pairs of reduced size " +
                      std::to_string(config.target_reduced_size) + " within " +
                      std::to_string(config.max_generated) + " generated pairs");
    }
    const auto len =
        static_cast<std::size_t>(std::min<std::uint64_t>(kBlock, config.max_generated - generated));
    block.assign(len, PairRecord{});
    parallel_for(len, config.threads, [&](std::size_t k) {
      const Seed s = record_seed(config.seed, generated + k);
      block[k] = measure_pair(record_raw_size(window, s), s);
    });
    generated += len;
    for (const auto& rec : block) {
      if (rec.reduced_size == config.target_reduced_size && kept.size() < config.min_count) {
        kept.push_back(rec.distance);
      }
    }
  }
  auto h = build_histogram(config.target_reduced_size, config.bin_width, kept);
  h.generated = generated;
  return h;
}

FitResult linear_fit(std::span<const FitPoint> points) {
  if (points.size() < 2) throw Error(ErrorCode::kDegenerate, "need at least two points to fit");
  long double mx = 0;
  long double my = 0;
  for (const auto& p : points) {
    mx += p.size;
    my += p.distance;
  }
  const auto n = static_cast<long double>(points.size());
  mx /= n;
  my /= n;
  long double sxx = 0;
  long double sxy = 0;
  for (const auto& p : points) {
    sxx += (p.size - mx) * (p.size - mx);
    sxy += (p.size - mx) * (p.distance - my);
  }
  if (sxx == 0) throw Error(ErrorCode::kDegenerate, "all sizes are equal; slope is undefined");
  FitResult fit;
  fit.slope = static_cast<double>(sxy / sxx);
  fit.intercept = static_cast<double>(my - sxy / sxx * mx);
  fit.count = points.size();
  for (const auto& p : points) {
    if (p.distance == 0) continue;
    fit.max_relative_residual = std::max(
        fit.max_relative_residual, std::abs(p.distance - fit.predict(p.size)) / p.distance);
  }
  return fit;
}

std::vector<FitPoint> fit_points(std::span<const PairRecord> records, AggregateMode mode) {
  std::vector<FitPoint> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (mode == AggregateMode::kReducedSize) {
      if (r.reduced_size == 0) continue;
      out.push_back({static_cast<double>(r.reduced_size), static_cast<double>(r.distance)});
    } else {
      out.push_back({static_cast<double>(r.raw_size), static_cast<double>(r.distance)});
    }
  }
  return out;
}

DeviationReport deviation_report(std::span<const FitPoint> points, const FitResult& fit,
                                 std::span<const double> thresholds) {
  DeviationReport report;
  report.count = points.size();
  for (const double t : thresholds) report.count_beyond[t] = 0;
  for (const auto& p : points) {
    const double predicted = fit.predict(p.size);
    const double dev = std::abs(p.distance - predicted) / predicted;
    report.max_relative_deviation = std::max(report.max_relative_deviation, dev);
    for (const double t : thresholds) {
      if (dev > t) ++report.count_beyond[t];
    }
  }
  for (const auto& [t, c] : report.count_beyond) {
    report.fraction_beyond[t] =
        points.empty() ? 0.0 : static_cast<double>(c) / static_cast<double>(points.size());
  }
  return report;
}

}  // namespace rrd
