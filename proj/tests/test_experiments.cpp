#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "rrd/error.hpp"
#include "rrd/experiments.hpp"
#include "rrd/metric.hpp"
#include "rrd/report.hpp"

using namespace rrd;

namespace {

std::string csv_of(const std::vector<PairRecord>& records) {
  std::ostringstream out;
  write_pair_csv(out, records);
  return out.str();
}

}  // namespace

TEST_CASE("paper buckets") {
  const auto b = standard_buckets();
  CHECK(b.front() == SizeRange{10, 19});
  CHECK(b[9] == SizeRange{100, 199});
  CHECK(b.back() == SizeRange{4000, 4500});
  for (std::size_t i = 0; i + 1 < b.size(); ++i) CHECK(b[i].hi < b[i + 1].lo);
  CHECK(parse_buckets("paper") == b);
}

TEST_CASE("bucket parsing") {
  CHECK(parse_buckets("10:19") == std::vector<SizeRange>{{10, 19}});
  CHECK(parse_buckets("5,10:19,100:199") ==
        std::vector<SizeRange>{{5, 5}, {10, 19}, {100, 199}});
  for (const char* bad : {"", "10:", "a:b", "19:10", "10:19,15:30", "20:29,10:19", ",", "5, 10:19"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_buckets(bad), Error);
  }
}

TEST_CASE("batch records") {
  BatchConfig tiny{{{2, 2}}, 1, 123, 1};
  const auto one = run_batch(tiny);
  REQUIRE(one.size() == 1);
  CHECK(one[0].raw_size == 2);
  CHECK(one[0].distance <= 1);

  BatchConfig config{{{10, 19}, {100, 120}}, 300, 9, 1};
  const auto records = run_batch(config);
  REQUIRE(records.size() == 600);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    CHECK(r.stream_index == i);
    CHECK(config.ranges[i / 300].contains(r.raw_size));
    CHECK(r.reduced_size <= r.raw_size);
    if (r.reduced_size >= 3) {
      CHECK(r.distance + 2 >= r.reduced_size);
      CHECK(r.distance + 8 <= 4 * r.reduced_size);
    }
    CHECK(r == measure_pair(r.raw_size, record_seed(9, i)));
  }
  const auto direct = restricted_distance(sample_pair(records[7].raw_size, record_seed(9, 7)));
  CHECK(direct.distance == records[7].distance);
  CHECK(direct.reduced_size == records[7].reduced_size);
}

TEST_CASE("batch output depends only on the seed") {
  BatchConfig config{{{30, 60}}, 9000, 17, 1};
  const auto serial = csv_of(run_batch(config));
  CHECK(serial == csv_of(run_batch(config)));
  config.threads = 3;
  CHECK(serial == csv_of(run_batch(config)));
  std::vector<std::uint64_t> order;
  run_batch(config, [&](const PairRecord& r) { order.push_back(r.stream_index); });
  CHECK(std::is_sorted(order.begin(), order.end()));
  config.seed = 18;
  CHECK(serial != csv_of(run_batch(config)));

  CHECK_THROWS_AS(run_batch(BatchConfig{{{0, 3}}, 1, 0, 1}), Error);
  CHECK_THROWS_AS(run_batch(BatchConfig{{{3, 3}}, 0, 0, 1}), Error);
}

TEST_CASE("aggregation") {
  const std::vector<PairRecord> records = {
      {0, 10, 8, 20}, {1, 12, 12, 30}, {2, 15, 0, 0}, {3, 40, 30, 90}};
  const std::vector<SizeRange> buckets = {{1, 9}, {10, 19}, {20, 49}};

  const auto raw = aggregate(records, buckets, AggregateMode::kRawSize);
  CHECK(raw[0].count == 0);
  CHECK_FALSE(raw[0].avg_ratio.has_value());
  CHECK(raw[1].count == 3);
  CHECK(*raw[1].avg_reduced_fraction == doctest::Approx((0.8 + 1.0 + 0.0) / 3));
  CHECK(*raw[1].avg_ratio == doctest::Approx((2.0 + 2.5 + 0.0) / 3));
  CHECK(raw[2].count == 1);

  const auto red = aggregate(records, buckets, AggregateMode::kReducedSize);
  CHECK(red[0].count == 1);
  CHECK(*red[0].avg_ratio == doctest::Approx(2.5));
  CHECK(red[1].count == 1);
  CHECK(red[2].count == 1);
  CHECK(*red[2].avg_ratio == doctest::Approx(3.0));
  std::size_t total = 0;
  for (const auto& row : red) total += row.count;
  CHECK(total == 3);  // the fully reduced record has no reduced ratio

  const std::vector<SizeRange> overlapping = {{1, 10}, {10, 20}};
  CHECK_THROWS_AS(aggregate(records, overlapping, AggregateMode::kRawSize), Error);
}

TEST_CASE("summary statistics") {
  const std::vector<double> v = {2, 4, 4, 4, 5, 5, 7, 9};
  const auto s = summarize(v);
  CHECK(s.count == 8);
  CHECK(s.mean == doctest::Approx(5.0));
  CHECK(s.sd == doctest::Approx(std::sqrt(32.0 / 7)));
  const std::vector<double> sym = {1, 2, 3, 4, 5};
  CHECK(summarize(sym).skewness == doctest::Approx(0.0));
  const std::vector<double> right = {0, 0, 0, 10};
  CHECK(summarize(right).skewness > 0);
}

TEST_CASE("linear fit") {
  std::vector<FitPoint> line;
  for (int k = 1; k <= 20; ++k) line.push_back({double(k), 2.0 * k + 1});
  const auto f = linear_fit(line);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.max_relative_residual == doctest::Approx(0.0));
  CHECK(f.count == 20);

  const std::vector<FitPoint> same = {{3, 1}, {3, 2}};
  CHECK_THROWS_AS(linear_fit(same), Error);

  // Residuals are orthogonal to [1, size].
  const auto records = run_batch(BatchConfig{{{10, 400}}, 2000, 3, 1});
  const auto points = fit_points(records, AggregateMode::kReducedSize);
  const auto g = linear_fit(points);
  double r0 = 0, r1 = 0, scale = 0;
  for (const auto& p : points) {
    const double r = p.distance - g.predict(p.size);
    r0 += r;
    r1 += r * p.size;
    scale += p.distance * p.size;
  }
  CHECK(std::abs(r0) / scale < 1e-9);
  CHECK(std::abs(r1) / scale < 1e-9);
  CHECK(fit_points(records, AggregateMode::kRawSize).size() == records.size());
}

TEST_CASE("deviation report") {
  std::vector<FitPoint> on_line;
  for (int k = 10; k < 30; ++k) on_line.push_back({double(k), 3.0 * k - 2});
  const FitResult fit{3.0, -2.0, 0, 0};
  const std::vector<double> thresholds = {0.01, 0.03};
  const auto r = deviation_report(on_line, fit, thresholds);
  CHECK(r.fraction_beyond.at(0.01) == 0.0);
  CHECK(r.max_relative_deviation == doctest::Approx(0.0));

  const std::vector<FitPoint> off = {{10, 28}, {10, 29}, {10, 30}, {10, 31}};
  const auto d = deviation_report(off, fit, thresholds);  // predicted 28
  CHECK(d.count_beyond.at(0.03) == 3);
  CHECK(d.fraction_beyond.at(0.03) == doctest::Approx(0.75));
  CHECK(d.max_relative_deviation == doctest::Approx(3.0 / 28));
}

TEST_CASE("histograms") {
  const std::vector<PairRecord> records = {
      {0, 5, 4, 9}, {1, 5, 4, 11}, {2, 6, 3, 7}, {3, 5, 4, 11}, {4, 5, 4, 14}};
  const auto h = histogram_from_records(records, 4);
  CHECK(h.stats.count == 4);
  CHECK(h.stats.mean == doctest::Approx(11.25));
  REQUIRE(h.bins.size() == 6);
  CHECK(h.bins.front() == std::pair<std::uint64_t, std::uint64_t>{9, 1});
  CHECK(h.bins[2].second == 2);
  std::uint64_t total = 0;
  for (const auto& b : h.bins) total += b.second;
  CHECK(total == h.stats.count);

  const auto wide = histogram_from_records(records, 4, 4);
  CHECK(wide.bins.size() == 2);

  const auto w = raw_window_for_reduced(714);
  CHECK(w.lo <= 769);
  CHECK(w.hi >= 769);
  CHECK(w.lo >= 714);

  HistogramSampling config;
  config.target_reduced_size = 19;
  config.min_count = 300;
  config.seed = 5;
  const auto sampled = sample_histogram(config);
  CHECK(sampled.stats.count == 300);
  CHECK(sampled.generated >= 300);
  config.threads = 2;
  const auto sampled2 = sample_histogram(config);
  CHECK(sampled2.bins == sampled.bins);

  config.max_generated = 10;
  CHECK_THROWS_AS(sample_histogram(config), Error);
}

TEST_CASE("CSV formats") {
  const std::vector<PairRecord> records = {{0, 12, 10, 25}, {1, 3, 0, 0}};
  const auto text = csv_of(records);
  CHECK(text ==
        "stream_index,raw_size,reduced_size,distance,ratio_raw,ratio_reduced\n"
        "0,12,10,25,2.083333,2.500000\n"
        "1,3,0,0,0.000000,\n");
  std::istringstream in(text);
  CHECK(read_pair_csv(in) == records);

  std::istringstream broken("stream_index,raw_size,reduced_size,distance,ratio_raw,ratio_reduced\n"
                            "0,12,x,25,1,1\n");
  try {
    read_pair_csv(broken);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  std::ostringstream buckets;
  std::vector<BucketRow> rows(2);
  rows[0].range = {10, 19};
  rows[1] = {{20, 29}, 4, 0.5, 2.25, 0.125};
  write_bucket_csv(buckets, rows);
  CHECK(buckets.str() ==
        "range_lo,range_hi,count,avg_reduced_fraction,avg_ratio,sd_ratio\n"
        "10,19,0,,,\n"
        "20,29,4,0.500000,2.250000,0.125000\n");

  std::ostringstream hist;
  const auto h = histogram_from_records(records, 10);
  write_histogram_csv(hist, h);
  CHECK(hist.str() == "bin_lo,count\n25,1\n# n=10 mean=25.0000 sd=0.0000 count=1\n");

  std::ostringstream svg;
  write_histogram_svg(svg, h);
  CHECK(svg.str().rfind("<svg", 0) == 0);
  CHECK(svg.str().find("</svg>") != std::string::npos);
}
