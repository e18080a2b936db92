// Acceptance suite: one PASS/FAIL line per criterion, with the measured
// values underneath. Tolerances are fixed here, not taken from the command
// line.
//
//   acceptance                 run every criterion
//   acceptance --criterion N   run criterion N only (repeatable)

#include <boost/math/special_functions/gamma.hpp>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rrd/experiments.hpp"
#include "rrd/metric.hpp"
#include "rrd/oracle.hpp"
#include "rrd/random.hpp"
#include "rrd/transform.hpp"

using namespace rrd;

namespace {

constexpr std::uint64_t kSeed = 7;

struct Check {
  std::string label;
  bool pass;
};

class Report {
 public:
  void check(bool pass, const char* fmt, ...) __attribute__((format(printf, 3, 4))) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    checks_.push_back({buf, pass});
  }

  // Measured `value` must lie within `target` +- `tol`.
  void within(const char* what, double value, double target, double tol) {
    check(std::abs(value - target) <= tol, "%s = %.5f (target %.5f +- %.5f)", what, value, target,
          tol);
  }

  void below(const char* what, double value, double bound) {
    check(value < bound, "%s = %.6f (must be < %.6f)", what, value, bound);
  }

  void note(const char* fmt, ...) __attribute__((format(printf, 2, 3))) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    notes_.emplace_back(buf);
  }

  bool passed() const {
    for (const auto& c : checks_) {
      if (!c.pass) return false;
    }
    return !checks_.empty();
  }

  void print(int number, const char* title) const {
    std::printf("[%s] criterion %d: %s\n", passed() ? "PASS" : "FAIL", number, title);
    for (const auto& c : checks_) std::printf("    %s %s\n", c.pass ? "ok  " : "FAIL", c.label.c_str());
    for (const auto& n : notes_) std::printf("    note %s\n", n.c_str());
    std::fflush(stdout);
  }

 private:
  std::vector<Check> checks_;
  std::vector<std::string> notes_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---- shared runs -----------------------------------------------------------

// Raw buckets for the distance tables. The extra buckets around 10-19 and
// 100-199 supply the pairs that reduce into those sizes from above.
const std::vector<PairRecord>& table_run() {
  static const std::vector<PairRecord> records = [] {
    BatchConfig config;
    config.ranges = {{10, 19}, {20, 29}, {30, 39}, {100, 199}, {200, 299}};
    config.count_per_range = 50000;
    config.seed = kSeed;
    config.threads = 1;
    return run_batch(config);
  }();
  return records;
}

const std::vector<PairRecord>& fit_run() {
  static const std::vector<PairRecord> records = [] {
    BatchConfig config;
    config.ranges = {{10, 1500}};
    config.count_per_range = 20000;
    config.seed = kSeed;
    return run_batch(config);
  }();
  return records;
}

const BucketRow& row_for(const std::vector<BucketRow>& rows, SizeRange range) {
  for (const auto& r : rows) {
    if (r.range == range) return r;
  }
  std::fprintf(stderr, "missing bucket %zu-%zu\n", range.lo, range.hi);
  std::exit(1);
}

// ---- criteria --------------------------------------------------------------

Report criterion_1() {
  Report r;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t n = 2; n <= 7; ++n) {
    const auto v = verify_fordham(n);
    const auto expected = catalan(n) * catalan(n);
    r.check(v.pairs_checked == expected && v.mismatches == 0,
            "n=%zu: %llu pairs (expected %llu), %llu mismatches", n,
            static_cast<unsigned long long>(v.pairs_checked),
            static_cast<unsigned long long>(expected),
            static_cast<unsigned long long>(v.mismatches));
  }
  const double elapsed = seconds_since(start);
  r.check(elapsed < 60.0, "runtime %.2f s (must be < 60 s)", elapsed);
  return r;
}

Report criterion_2() {
  Report r;
  for (std::size_t n = 3; n <= 8; ++n) {
    const auto e = extremal_distances(n);
    r.check(e.min_distance + 1 == n, "n=%zu: min over %llu reduced pairs = %u (required n-1 = %zu)",
            n, static_cast<unsigned long long>(e.reduced_pairs), e.min_distance, n - 1);
    r.check(e.max_distance + 8 <= 4 * n, "n=%zu: max = %u (bound 4n-8 = %zu, %s)", n,
            e.max_distance, 4 * n - 8, e.upper_bound_attained() ? "attained" : "not attained");
    r.check(e.fordham_mismatches == 0, "n=%zu: weight formula agrees with BFS on reduced pairs", n);
    if (e.min_distance + 1 != n) {
      r.note("n=%zu min witness %s %s", n, e.min_witness.first.encoding().c_str(),
             e.min_witness.second.encoding().c_str());
    }
    if (n == 3) r.check(e.max_distance == 4, "n=3: max 4 attained");
  }
  return r;
}

Report criterion_3() {
  Report r;
  const auto& records = table_run();
  const std::vector<SizeRange> buckets = {{10, 19}, {100, 199}};
  const auto rows = aggregate(records, buckets, AggregateMode::kRawSize);
  const auto& big = row_for(rows, {100, 199});
  const auto& small = row_for(rows, {10, 19});
  r.check(big.count >= 50000, "100-199: %zu pairs", big.count);
  r.within("100-199 avg reduced fraction", *big.avg_reduced_fraction, 0.92646, 0.005);
  r.within("100-199 avg raw ratio", *big.avg_ratio, 3.19676, 0.02);
  r.check(small.count >= 50000, "10-19: %zu pairs", small.count);
  r.within("10-19 avg reduced fraction", *small.avg_reduced_fraction, 0.9075, 0.005);
  r.within("10-19 avg raw ratio", *small.avg_ratio, 2.2447, 0.02);
  return r;
}

Report criterion_4() {
  Report r;
  const auto& records = table_run();
  const std::vector<SizeRange> buckets = {{10, 19}, {100, 199}};
  const auto rows = aggregate(records, buckets, AggregateMode::kReducedSize);
  const auto& big = row_for(rows, {100, 199});
  const auto& small = row_for(rows, {10, 19});
  r.note("reduced 100-199: %zu pairs, reduced 10-19: %zu pairs", big.count, small.count);
  r.within("reduced 100-199 avg ratio", *big.avg_ratio, 3.45925, 0.02);
  r.within("reduced 10-19 avg ratio", *small.avg_ratio, 2.609, 0.03);
  return r;
}

Report criterion_5() {
  Report r;
  struct Target {
    std::size_t size, min_count;
    double mean, mean_tol, sd, sd_tol;
  };
  const Target targets[] = {
      {19, 20000, 53.5, 0.5, 4.58, 0.3},
      {120, 5000, 412.6, 1.5, 8.79, 0.6},
      {714, 1000, 2536.4, 3.0, 18.4, 2.0},
  };
  for (const auto& t : targets) {
    HistogramSampling config;
    config.target_reduced_size = t.size;
    config.min_count = t.min_count;
    config.seed = kSeed;
    const auto start = std::chrono::steady_clock::now();
    const auto h = sample_histogram(config);
    char label[64];
    r.check(h.stats.count >= t.min_count, "size %zu: kept %zu of %llu generated in %.1f s", t.size,
            h.stats.count, static_cast<unsigned long long>(h.generated), seconds_since(start));
    std::snprintf(label, sizeof label, "size %zu mean", t.size);
    r.within(label, h.stats.mean, t.mean, t.mean_tol);
    std::snprintf(label, sizeof label, "size %zu sd", t.size);
    r.within(label, h.stats.sd, t.sd, t.sd_tol);
  }
  return r;
}

Report criterion_6() {
  Report r;
  const auto& records = fit_run();
  const auto reduced = linear_fit(fit_points(records, AggregateMode::kReducedSize));
  const auto raw = linear_fit(fit_points(records, AggregateMode::kRawSize));
  r.note("%zu pairs, raw sizes uniform in 10-1500", records.size());
  r.within("reduced-size slope", reduced.slope, 3.57612, 0.02);
  r.within("reduced-size intercept", reduced.intercept, -16.1551, 5.0);
  r.within("raw-size slope", raw.slope, 3.31941, 0.02);
  r.within("raw-size intercept", raw.intercept, -17.0321, 5.0);
  return r;
}

Report criterion_7() {
  Report r;
  const auto model = linear_fit(fit_points(fit_run(), AggregateMode::kReducedSize));
  BatchConfig config;
  config.ranges = {{1000, 1500}};
  config.count_per_range = 50000;
  config.seed = kSeed + 1;
  const auto records = run_batch(config);
  const std::vector<double> thresholds = {0.01, 0.03, 0.06};
  const auto d =
      deviation_report(fit_points(records, AggregateMode::kReducedSize), model, thresholds);
  r.note("%zu pairs with raw size 1000-1500 against d = %.5f n %+.4f", d.count, model.slope,
         model.intercept);
  r.check(d.count >= 50000, "%zu pairs evaluated", d.count);
  r.below("fraction beyond 1%", d.fraction_beyond.at(0.01), 0.20);
  r.below("fraction beyond 3%", d.fraction_beyond.at(0.03), 0.005);
  r.check(d.count_beyond.at(0.06) == 0, "pairs beyond 6%% = %zu (must be 0); max deviation %.4f",
          d.count_beyond.at(0.06), d.max_relative_deviation);
  return r;
}

Report criterion_8() {
  Report r;
  const auto run = [&](std::size_t n, std::uint64_t draws) {
    const auto shapes = enumerate_trees(n);
    std::map<std::string, std::uint64_t> seen;
    for (std::uint64_t i = 0; i < draws; ++i) {
      ++seen[sample_tree(n, derive_seed({kSeed, n}, i)).encoding()];
    }
    const double expected = double(draws) / double(shapes.size());
    double chi2 = 0;
    for (const auto& s : shapes) {
      const double dev = double(seen[s]) - expected;
      chi2 += dev * dev / expected;
    }
    const double df = double(shapes.size() - 1);
    const double p = boost::math::gamma_q(df / 2, chi2 / 2);
    r.check(seen.size() == shapes.size() && p > 0.001,
            "n=%zu: %llu draws over %zu shapes, chi-square %.3f on %.0f df, p = %.4f (> 0.001)", n,
            static_cast<unsigned long long>(draws), shapes.size(), chi2, df, p);
  };
  run(4, 140000);
  run(3, 50000);
  return r;
}

TreePair reduce_in_random_order(TreePair pair, std::mt19937_64& rng) {
  for (;;) {
    const auto common = common_sibling_leaf_pairs(pair);
    if (common.empty()) return pair;
    pair = reduce_at(pair, common[std::uniform_int_distribution<std::size_t>(
                                      0, common.size() - 1)(rng)]);
  }
}

Report criterion_9() {
  Report r;

  std::uint64_t round_trip_bad = 0, round_trips = 0;
  for (std::size_t n = 0; n <= 8; ++n) {
    for (const auto& e : enumerate_trees(n)) {
      ++round_trips;
      round_trip_bad += Tree::parse(e).encoding() != e;
    }
  }
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const Tree t = sample_tree(1 + i % 500, derive_seed({kSeed, 90}, i));
    ++round_trips;
    round_trip_bad += Tree::parse(t.encoding()) != t;
  }
  r.check(round_trip_bad == 0, "encoding round trip: %llu trees, %llu failures",
          static_cast<unsigned long long>(round_trips),
          static_cast<unsigned long long>(round_trip_bad));

  std::uint64_t rotations = 0, rotation_bad = 0;
  for (std::uint64_t i = 0; i < 2000; ++i) {
    const Tree t = sample_tree(2 + i % 100, derive_seed({kSeed, 91}, i));
    for (NodeId n = 0; n < static_cast<NodeId>(t.size()); ++n) {
      const Address a = t.address_of(n);
      if (!is_leaf(t.right(n))) {
        ++rotations;
        rotation_bad += rotate(rotate(t, a, Direction::kLeft), a, Direction::kRight) != t;
      }
      if (!is_leaf(t.left(n))) {
        ++rotations;
        rotation_bad += rotate(rotate(t, a, Direction::kRight), a, Direction::kLeft) != t;
      }
    }
    for (const Move m : applicable_moves(t)) {
      ++rotations;
      rotation_bad += apply_move(apply_move(t, m), inverse(m)) != t;
    }
  }
  r.check(rotation_bad == 0, "rotation inverse law: %llu rotations, %llu failures",
          static_cast<unsigned long long>(rotations),
          static_cast<unsigned long long>(rotation_bad));

  std::uint64_t asymmetric = 0;
  DistanceOptions fast;
  fast.skip_type_pairs = true;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    const auto p = sample_pair(1 + i % 120, derive_seed({kSeed, 92}, i));
    asymmetric += restricted_distance(p, fast).distance !=
                  restricted_distance({p.second, p.first}, fast).distance;
  }
  r.check(asymmetric == 0, "symmetry: 100000 random pairs, %llu asymmetric",
          static_cast<unsigned long long>(asymmetric));

  std::mt19937_64 rng(kSeed);
  std::uint64_t divergent = 0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    auto p = sample_pair(1 + i % 60, derive_seed({kSeed, 93}, i));
    if (i % 2 == 0) {
      // A one-move neighbour shares most sibling pairs, so reduction goes deep.
      p.second = p.first;
      const auto moves = applicable_moves(p.first);
      if (!moves.empty()) p.second = apply_move(p.first, moves[i % moves.size()]);
    }
    const auto linear = reduce_pair(p);
    const auto randomized = reduce_in_random_order(p, rng);
    divergent += linear.first != randomized.first || linear.second != randomized.second;
  }
  r.check(divergent == 0, "confluence: 10000 random pairs in random orders, %llu divergent",
          static_cast<unsigned long long>(divergent));

  // BFS distance of every pair equals BFS distance of its reduction.
  std::vector<RestrictedRotationGraph> graphs;
  std::vector<std::vector<std::vector<std::uint32_t>>> dist;
  for (std::size_t m = 1; m <= 6; ++m) {
    graphs.emplace_back(m);
    auto& table = dist.emplace_back();
    for (std::size_t i = 0; i < graphs.back().vertex_count(); ++i) {
      table.push_back(graphs.back().distances_from(i));
    }
  }
  const auto bfs = [&](const Tree& s, const Tree& t) -> std::uint32_t {
    if (s.size() == 0) return 0;
    const auto& g = graphs[s.size() - 1];
    return dist[s.size() - 1][*g.index_of(s.encoding())][*g.index_of(t.encoding())];
  };
  std::uint64_t invariance_pairs = 0, invariance_bad = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto& g = graphs[n - 1];
    for (std::size_t i = 0; i < g.vertex_count(); ++i) {
      const Tree s = Tree::parse(g.vertex(i));
      for (std::size_t j = 0; j < g.vertex_count(); ++j) {
        const Tree t = Tree::parse(g.vertex(j));
        const auto red = reduce_pair({s, t});
        const auto d = restricted_distance({s, t}, fast).distance;
        ++invariance_pairs;
        invariance_bad += d != dist[n - 1][i][j] || d != bfs(red.first, red.second) ||
                          d != restricted_distance(red.pair(), fast).distance;
      }
    }
  }
  r.check(invariance_bad == 0, "reduction invariance, all pairs n <= 6: %llu pairs, %llu failures",
          static_cast<unsigned long long>(invariance_pairs),
          static_cast<unsigned long long>(invariance_bad));

  for (std::size_t n = 2; n <= 7; ++n) {
    const auto e = extremal_distances(n);
    r.check(e.r0_r0_pairs == 0, "n=%zu: (R0,R0) type pairs over %llu reduced pairs = %llu", n,
            static_cast<unsigned long long>(e.reduced_pairs),
            static_cast<unsigned long long>(e.r0_r0_pairs));
  }
  return r;
}

Report criterion_10() {
  Report r;
  constexpr double kBudget = 0.5;  // "well under one second"

  // Random pair whose reduction lands near 100,000 nodes.
  const auto raw = sample_pair(107760, derive_seed({kSeed, 100}, 0));
  const auto reduced = reduce_pair(raw);
  auto start = std::chrono::steady_clock::now();
  const auto d1 = restricted_distance(reduced.pair());
  double t1 = seconds_since(start);
  r.check(t1 < kBudget, "random reduced pair of size %zu: distance %llu in %.4f s (< %.1f s)",
          reduced.size(), static_cast<unsigned long long>(d1.distance), t1, kBudget);

  // Left comb against right comb: reduced, exactly 100,000 nodes.
  constexpr std::size_t kN = 100000;
  const Tree left = Tree::parse(std::string(kN, '1') + std::string(kN + 1, '0'));
  std::string right_text;
  for (std::size_t i = 0; i < kN; ++i) right_text += "10";
  right_text += '0';
  const Tree right = Tree::parse(right_text);
  DistanceOptions strict;
  strict.strict = true;
  start = std::chrono::steady_clock::now();
  const auto d2 = restricted_distance({left, right}, strict);
  const double t2 = seconds_since(start);
  r.check(d2.reduced_size == kN && t2 < kBudget,
          "left comb vs right comb, size %zu: distance %llu in %.4f s (< %.1f s)", d2.reduced_size,
          static_cast<unsigned long long>(d2.distance), t2, kBudget);
  return r;
}

struct Criterion {
  const char* title;
  std::function<Report()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"oracle equivalence for n = 2..7", criterion_1},
      {"extremal distances over reduced pairs, n = 3..8", criterion_2},
      {"table of raw-size ratios (buckets 100-199, 10-19)", criterion_3},
      {"table of reduced-size ratios (buckets 100-199, 10-19)", criterion_4},
      {"distance histograms at reduced sizes 19, 120, 714", criterion_5},
      {"linear fits over sizes 10-1500", criterion_6},
      {"deviation from the fitted model at sizes >= 1000", criterion_7},
      {"Remy uniformity (chi-square)", criterion_8},
      {"property suites", criterion_9},
      {"linear-time distance at size 100,000", criterion_10},
  };

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      char* end = nullptr;
      const long n = std::strtol(argv[++i], &end, 10);
      if (*end != '\0' || n < 1 || n > static_cast<long>(criteria.size())) {
        std::fprintf(stderr, "acceptance: criterion must be 1..%zu\n", criteria.size());
        return 2;
      }
      selected.insert(static_cast<int>(n));
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion N]...\n");
      return 2;
    }
  }

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i + 1);
    if (!selected.empty() && !selected.count(number)) continue;
    const auto start = std::chrono::steady_clock::now();
    const Report report = criteria[i].run();
    report.print(number, criteria[i].title);
    std::printf("    time %.1f s\n", seconds_since(start));
    failed += !report.passed();
  }
  return failed == 0 ? 0 : 1;
}
