#include "rrd/rrd.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <new>
#include <string>

#include "rrd/error.hpp"
#include "rrd/experiments.hpp"
#include "rrd/metric.hpp"
#include "rrd/oracle.hpp"
#include "rrd/random.hpp"
#include "rrd/report.hpp"
#include "rrd/transform.hpp"
#include "rrd/tree.hpp"

struct rrd_tree {
  rrd::Tree tree;
};

struct rrd_distance_result {
  rrd::DistanceResult result;
};

struct rrd_graph {
  rrd::RestrictedRotationGraph graph;
};

struct rrd_extremal_report {
  rrd::ExtremalReport report;
};

struct rrd_batch {
  std::vector<rrd::PairRecord> records;
};

struct rrd_histogram {
  rrd::Histogram histogram;
};

namespace {

thread_local std::string g_last_error;

rrd_status fail(rrd_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

rrd_status status_of(rrd::ErrorCode code) { return static_cast<rrd_status>(code); }

// Runs `fn`, translating exceptions into status codes.
template <class Fn>
rrd_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return RRD_OK;
  } catch (const rrd::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RRD_ERR_NO_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return fail(RRD_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RRD_ERR_INTERNAL, "unknown exception");
  }
}

rrd_status copy_text(const std::string& text, char* buf, size_t cap, size_t* len) {
  if (len) *len = text.size();
  if (buf && cap > 0) {
    const size_t n = std::min(cap - 1, text.size());
    std::memcpy(buf, text.data(), n);
    buf[n] = '\0';
  }
  return RRD_OK;
}

void require(bool ok, const char* what) {
  if (!ok) throw rrd::Error(rrd::ErrorCode::kInvalidArgument, what);
}

// Opens `path` for writing ("-" is standard output) and passes the stream on.
template <class Fn>
void with_output(const char* path, Fn&& fn) {
  require(path != nullptr, "output path is null");
  if (std::strcmp(path, "-") == 0) {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rrd::Error(rrd::ErrorCode::kIo, std::string("cannot open ") + path);
  fn(out);
  out.flush();
  if (!out) throw rrd::Error(rrd::ErrorCode::kIo, std::string("write failed: ") + path);
}

rrd::AggregateMode to_mode(rrd_aggregate_mode mode) {
  switch (mode) {
    case RRD_BY_RAW_SIZE: return rrd::AggregateMode::kRawSize;
    case RRD_BY_REDUCED_SIZE: return rrd::AggregateMode::kReducedSize;
  }
  throw rrd::Error(rrd::ErrorCode::kInvalidArgument, "unknown aggregate mode");
}

std::vector<rrd::SizeRange> to_ranges(const rrd_size_range* ranges, size_t count) {
  require(ranges != nullptr || count == 0, "ranges is null");
  std::vector<rrd::SizeRange> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) out.push_back({ranges[i].lo, ranges[i].hi});
  return out;
}

rrd_pair_record to_c(const rrd::PairRecord& r) {
  return {r.stream_index, r.raw_size, r.reduced_size, r.distance};
}

}  // namespace

extern "C" {

const char* rrd_last_error(void) { return g_last_error.c_str(); }

const char* rrd_status_name(rrd_status status) {
  switch (status) {
    case RRD_OK: return "ok";
    case RRD_ERR_PARSE: return "parse error";
    case RRD_ERR_SIZE_MISMATCH: return "size mismatch";
    case RRD_ERR_INAPPLICABLE: return "inapplicable";
    case RRD_ERR_BAD_ADDRESS: return "bad address";
    case RRD_ERR_NOT_REDUCED: return "not reduced";
    case RRD_ERR_BOUND: return "size bound exceeded";
    case RRD_ERR_INVALID_ARGUMENT: return "invalid argument";
    case RRD_ERR_IO: return "i/o error";
    case RRD_ERR_BUDGET: return "budget exhausted";
    case RRD_ERR_DEGENERATE: return "degenerate input";
    case RRD_ERR_INTERNAL: return "internal error";
    case RRD_ERR_NO_MEMORY: return "out of memory";
  }
  return "unknown status";
}

const char* rrd_version(void) { return "0.1.0"; }

// ---- trees -----------------------------------------------------------------

rrd_status rrd_tree_parse(const char* text, size_t len, rrd_tree** out, size_t* error_position) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    require(text != nullptr || len == 0, "text is null");
    *out = nullptr;
    try {
      *out = new rrd_tree{rrd::Tree::parse(std::string_view(text ? text : "", len))};
    } catch (const rrd::ParseError& e) {
      if (error_position) *error_position = e.position();
      throw;
    }
  });
}

rrd_tree* rrd_tree_clone(const rrd_tree* tree) {
  if (!tree) return nullptr;
  try {
    return new rrd_tree{tree->tree};
  } catch (...) {
    fail(RRD_ERR_NO_MEMORY, "out of memory");
    return nullptr;
  }
}

void rrd_tree_free(rrd_tree* tree) { delete tree; }

size_t rrd_tree_size(const rrd_tree* tree) { return tree ? tree->tree.size() : 0; }

rrd_status rrd_tree_encoding(const rrd_tree* tree, char* buf, size_t cap, size_t* len) {
  return guarded([&] {
    require(tree != nullptr, "tree is null");
    copy_text(tree->tree.encoding(), buf, cap, len);
  });
}

int rrd_tree_equal(const rrd_tree* a, const rrd_tree* b) {
  return a && b && a->tree == b->tree ? 1 : 0;
}

rrd_status rrd_tree_inorder_address(const rrd_tree* tree, size_t inorder_index, char* buf,
                                    size_t cap, size_t* len) {
  return guarded([&] {
    require(tree != nullptr, "tree is null");
    const auto order = tree->tree.inorder_sequence();
    if (inorder_index >= order.size()) {
      throw rrd::Error(rrd::ErrorCode::kBadAddress, "in-order index out of range");
    }
    copy_text(tree->tree.address_of(order[inorder_index]).bits, buf, cap, len);
  });
}

rrd_status rrd_tree_node_category(const rrd_tree* tree, const char* address,
                                  rrd_node_category* out) {
  return guarded([&] {
    require(tree != nullptr && address != nullptr && out != nullptr, "null argument");
    const auto c = rrd::node_category(tree->tree, rrd::NodeRef{rrd::Address{address}, 0});
    *out = c == rrd::NodeCategory::kLeft    ? RRD_NODE_LEFT
           : c == rrd::NodeCategory::kRight ? RRD_NODE_RIGHT
                                            : RRD_NODE_INTERIOR;
  });
}

rrd_status rrd_common_sibling_leaf_pairs(const rrd_tree* s, const rrd_tree* t, int32_t* out,
                                         size_t cap, size_t* count) {
  return guarded([&] {
    require(s != nullptr && t != nullptr, "tree is null");
    const auto leaves = rrd::common_sibling_leaf_pairs({s->tree, t->tree});
    if (count) *count = leaves.size();
    for (size_t i = 0; out && i < std::min(cap, leaves.size()); ++i) out[i] = leaves[i];
  });
}

// ---- rotations and reduction -----------------------------------------------

const char* rrd_move_name(rrd_move move) {
  if (move < RRD_MOVE_X0 || move > RRD_MOVE_X1I) return "?";
  return rrd::move_name(static_cast<rrd::Move>(move)).data();
}

rrd_status rrd_move_from_name(const char* name, rrd_move* out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "null argument");
    const auto m = rrd::move_from_name(name);
    if (!m) {
      throw rrd::Error(rrd::ErrorCode::kInvalidArgument,
                       std::string("unknown move '") + name + "' (expected x0, x0i, x1, x1i)");
    }
    *out = static_cast<rrd_move>(*m);
  });
}

rrd_status rrd_rotate(const rrd_tree* tree, const char* address, rrd_direction direction,
                      rrd_tree** out) {
  return guarded([&] {
    require(tree != nullptr && address != nullptr && out != nullptr, "null argument");
    require(direction == RRD_LEFT || direction == RRD_RIGHT, "unknown direction");
    *out = nullptr;
    *out = new rrd_tree{rrd::rotate(tree->tree, rrd::Address{address},
                                    direction == RRD_LEFT ? rrd::Direction::kLeft
                                                          : rrd::Direction::kRight)};
  });
}

unsigned rrd_applicable_moves(const rrd_tree* tree) {
  if (!tree) return 0;
  unsigned mask = 0;
  for (const auto m : rrd::applicable_moves(tree->tree)) mask |= 1u << static_cast<unsigned>(m);
  return mask;
}

rrd_status rrd_apply_move(const rrd_tree* tree, rrd_move move, rrd_tree** out) {
  return guarded([&] {
    require(tree != nullptr && out != nullptr, "null argument");
    require(move >= RRD_MOVE_X0 && move <= RRD_MOVE_X1I, "unknown move");
    *out = nullptr;
    *out = new rrd_tree{rrd::apply_move(tree->tree, static_cast<rrd::Move>(move))};
  });
}

rrd_status rrd_reduce_pair(const rrd_tree* s, const rrd_tree* t, rrd_tree** s_out,
                           rrd_tree** t_out) {
  return guarded([&] {
    require(s && t && s_out && t_out, "null argument");
    *s_out = *t_out = nullptr;
    auto reduced = rrd::reduce_pair({s->tree, t->tree});
    auto a = std::make_unique<rrd_tree>(rrd_tree{std::move(reduced.first)});
    auto b = std::make_unique<rrd_tree>(rrd_tree{std::move(reduced.second)});
    *s_out = a.release();
    *t_out = b.release();
  });
}

// ---- distance --------------------------------------------------------------

const char* rrd_caret_type_name(rrd_caret_type type) {
  if (type < RRD_CARET_L0 || type > RRD_CARET_R0) return "?";
  return rrd::caret_type_name(static_cast<rrd::CaretType>(type)).data();
}

rrd_status rrd_classify(const rrd_tree* tree, rrd_caret_type* out, size_t cap, size_t* count) {
  return guarded([&] {
    require(tree != nullptr, "tree is null");
    const auto types = rrd::classify(tree->tree);
    if (count) *count = types.size();
    for (size_t i = 0; out && i < std::min(cap, types.size()); ++i) {
      out[i] = static_cast<rrd_caret_type>(types[i]);
    }
  });
}

rrd_status rrd_pair_weight(rrd_caret_type a, rrd_caret_type b, int* out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    require(a >= RRD_CARET_L0 && a <= RRD_CARET_R0 && b >= RRD_CARET_L0 && b <= RRD_CARET_R0,
            "unknown caret type");
    *out = rrd::pair_weight(static_cast<rrd::CaretType>(a), static_cast<rrd::CaretType>(b));
  });
}

rrd_status rrd_distance(const rrd_tree* s, const rrd_tree* t, unsigned flags,
                        rrd_distance_result** out) {
  return guarded([&] {
    require(s && t && out, "null argument");
    *out = nullptr;
    rrd::DistanceOptions options;
    options.strict = (flags & RRD_DISTANCE_STRICT) != 0;
    *out = new rrd_distance_result{rrd::restricted_distance({s->tree, t->tree}, options)};
  });
}

void rrd_distance_result_free(rrd_distance_result* result) { delete result; }

uint64_t rrd_distance_value(const rrd_distance_result* r) { return r ? r->result.distance : 0; }

size_t rrd_distance_reduced_size(const rrd_distance_result* r) {
  return r ? r->result.reduced_size : 0;
}

size_t rrd_distance_original_size(const rrd_distance_result* r) {
  return r ? r->result.original_size : 0;
}

rrd_status rrd_distance_type_pair(const rrd_distance_result* r, size_t index,
                                  rrd_caret_type* first, rrd_caret_type* second) {
  return guarded([&] {
    require(r && first && second, "null argument");
    if (index >= r->result.type_pairs.size()) {
      throw rrd::Error(rrd::ErrorCode::kInvalidArgument, "type pair index out of range");
    }
    *first = static_cast<rrd_caret_type>(r->result.type_pairs[index].first);
    *second = static_cast<rrd_caret_type>(r->result.type_pairs[index].second);
  });
}

// ---- random trees ----------------------------------------------------------

rrd_status rrd_sample_tree(size_t n, uint64_t seed, uint64_t stream, rrd_tree** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = nullptr;
    *out = new rrd_tree{rrd::sample_tree(n, rrd::derive_seed(rrd::Seed{seed, 0}, stream))};
  });
}

rrd_status rrd_sample_pair(size_t n, uint64_t seed, uint64_t stream, rrd_tree** s_out,
                           rrd_tree** t_out) {
  return guarded([&] {
    require(s_out && t_out, "null argument");
    *s_out = *t_out = nullptr;
    auto pair = rrd::sample_pair(n, rrd::derive_seed(rrd::Seed{seed, 0}, stream));
    auto a = std::make_unique<rrd_tree>(rrd_tree{std::move(pair.first)});
    auto b = std::make_unique<rrd_tree>(rrd_tree{std::move(pair.second)});
    *s_out = a.release();
    *t_out = b.release();
  });
}

uint64_t rrd_derive_seed(uint64_t seed, uint64_t index) {
  return rrd::derive_seed(rrd::Seed{seed, 0}, index).master;
}

// ---- oracle ----------------------------------------------------------------

rrd_status rrd_graph_build(size_t n, rrd_graph** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = nullptr;
    *out = new rrd_graph{rrd::RestrictedRotationGraph(n)};
  });
}

void rrd_graph_free(rrd_graph* graph) { delete graph; }

size_t rrd_graph_vertex_count(const rrd_graph* g) { return g ? g->graph.vertex_count() : 0; }

size_t rrd_graph_edge_count(const rrd_graph* g) { return g ? g->graph.edge_count() : 0; }

int rrd_graph_connected(const rrd_graph* g) { return g && g->graph.connected() ? 1 : 0; }

rrd_status rrd_graph_vertex(const rrd_graph* g, size_t index, char* buf, size_t cap,
                            size_t* len) {
  return guarded([&] {
    require(g != nullptr, "graph is null");
    require(index < g->graph.vertex_count(), "vertex index out of range");
    copy_text(g->graph.vertex(index), buf, cap, len);
  });
}

rrd_status rrd_graph_write_edges(const rrd_graph* g, const char* path) {
  return guarded([&] {
    require(g != nullptr, "graph is null");
    with_output(path, [&](std::ostream& out) { g->graph.write_edge_list(out); });
  });
}

rrd_status rrd_oracle_distance(const rrd_tree* s, const rrd_tree* t, uint32_t* out) {
  return guarded([&] {
    require(s && t && out, "null argument");
    *out = rrd::oracle_distance(s->tree, t->tree);
  });
}

rrd_status rrd_verify_fordham(size_t n, rrd_verify_report* out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    const auto r = rrd::verify_fordham(n);
    *out = {r.n, r.pairs_checked, r.mismatches};
  });
}

rrd_status rrd_extremal(size_t n, rrd_extremal_report** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = nullptr;
    *out = new rrd_extremal_report{rrd::extremal_distances(n)};
  });
}

void rrd_extremal_free(rrd_extremal_report* report) { delete report; }

uint32_t rrd_extremal_min(const rrd_extremal_report* r) { return r ? r->report.min_distance : 0; }

uint32_t rrd_extremal_max(const rrd_extremal_report* r) { return r ? r->report.max_distance : 0; }

uint64_t rrd_extremal_reduced_pairs(const rrd_extremal_report* r) {
  return r ? r->report.reduced_pairs : 0;
}

rrd_status rrd_extremal_witness(const rrd_extremal_report* r, int which, int side, char* buf,
                                size_t cap, size_t* len) {
  return guarded([&] {
    require(r != nullptr, "report is null");
    require((which == 0 || which == 1) && (side == 0 || side == 1), "bad witness selector");
    const auto& pair = which == 0 ? r->report.min_witness : r->report.max_witness;
    copy_text((side == 0 ? pair.first : pair.second).encoding(), buf, cap, len);
  });
}

// ---- experiments -----------------------------------------------------------

rrd_status rrd_parse_buckets(const char* text, rrd_size_range* out, size_t cap, size_t* count) {
  return guarded([&] {
    require(text != nullptr, "text is null");
    const auto ranges = rrd::parse_buckets(text);
    if (count) *count = ranges.size();
    for (size_t i = 0; out && i < std::min(cap, ranges.size()); ++i) {
      out[i] = {ranges[i].lo, ranges[i].hi};
    }
  });
}

rrd_status rrd_batch_run(const rrd_batch_config* config, rrd_batch** out) {
  return guarded([&] {
    require(config && out, "null argument");
    *out = nullptr;
    rrd::BatchConfig c;
    c.ranges = to_ranges(config->ranges, config->range_count);
    c.count_per_range = config->count_per_range;
    c.seed = config->seed;
    c.threads = config->threads;
    *out = new rrd_batch{rrd::run_batch(c)};
  });
}

rrd_status rrd_batch_read_csv(const char* path, rrd_batch** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = nullptr;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw rrd::Error(rrd::ErrorCode::kIo, std::string("cannot open ") + path);
    *out = new rrd_batch{rrd::read_pair_csv(in)};
  });
}

void rrd_batch_free(rrd_batch* batch) { delete batch; }

size_t rrd_batch_size(const rrd_batch* batch) { return batch ? batch->records.size() : 0; }

rrd_status rrd_batch_record(const rrd_batch* batch, size_t index, rrd_pair_record* out) {
  return guarded([&] {
    require(batch && out, "null argument");
    require(index < batch->records.size(), "record index out of range");
    *out = to_c(batch->records[index]);
  });
}

rrd_status rrd_batch_write_csv(const rrd_batch* batch, const char* path) {
  return guarded([&] {
    require(batch != nullptr, "batch is null");
    with_output(path, [&](std::ostream& out) { rrd::write_pair_csv(out, batch->records); });
  });
}

rrd_status rrd_aggregate(const rrd_batch* batch, const rrd_size_range* buckets,
                         size_t bucket_count, rrd_aggregate_mode mode, rrd_bucket_row* out) {
  return guarded([&] {
    require(batch != nullptr && (out != nullptr || bucket_count == 0), "null argument");
    const auto ranges = to_ranges(buckets, bucket_count);
    const auto rows = rrd::aggregate(batch->records, ranges, to_mode(mode));
    for (size_t i = 0; i < rows.size(); ++i) {
      out[i] = {{rows[i].range.lo, rows[i].range.hi},
                rows[i].count,
                rows[i].avg_reduced_fraction.value_or(0.0),
                rows[i].avg_ratio.value_or(0.0),
                rows[i].sd_ratio.value_or(0.0)};
    }
  });
}

rrd_status rrd_write_bucket_csv(const rrd_bucket_row* rows, size_t count, const char* path) {
  return guarded([&] {
    require(rows != nullptr || count == 0, "rows is null");
    std::vector<rrd::BucketRow> converted;
    converted.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      rrd::BucketRow row;
      row.range = {rows[i].range.lo, rows[i].range.hi};
      row.count = rows[i].count;
      if (row.count > 0) {
        row.avg_reduced_fraction = rows[i].avg_reduced_fraction;
        row.avg_ratio = rows[i].avg_ratio;
        row.sd_ratio = rows[i].sd_ratio;
      }
      converted.push_back(row);
    }
    with_output(path, [&](std::ostream& out) { rrd::write_bucket_csv(out, converted); });
  });
}

namespace {

rrd_fit to_c(const rrd::FitResult& f) {
  return {f.slope, f.intercept, f.max_relative_residual, f.count};
}

}  // namespace

rrd_status rrd_fit_points(const double* sizes, const double* distances, size_t count,
                          rrd_fit* out) {
  return guarded([&] {
    require(out != nullptr && ((sizes && distances) || count == 0), "null argument");
    std::vector<rrd::FitPoint> points(count);
    for (size_t i = 0; i < count; ++i) points[i] = {sizes[i], distances[i]};
    *out = to_c(rrd::linear_fit(points));
  });
}

rrd_status rrd_batch_fit(const rrd_batch* batch, rrd_aggregate_mode mode, rrd_fit* out) {
  return guarded([&] {
    require(batch && out, "null argument");
    *out = to_c(rrd::linear_fit(rrd::fit_points(batch->records, to_mode(mode))));
  });
}

rrd_status rrd_batch_deviation(const rrd_batch* batch, rrd_aggregate_mode mode,
                               const rrd_fit* fit, const double* thresholds,
                               size_t threshold_count, double* fractions, double* max_deviation) {
  return guarded([&] {
    require(batch && fit, "null argument");
    require((thresholds && fractions) || threshold_count == 0, "null threshold arrays");
    rrd::FitResult f;
    f.slope = fit->slope;
    f.intercept = fit->intercept;
    const std::vector<double> t(thresholds, thresholds + threshold_count);
    const auto report =
        rrd::deviation_report(rrd::fit_points(batch->records, to_mode(mode)), f, t);
    for (size_t i = 0; i < threshold_count; ++i) fractions[i] = report.fraction_beyond.at(t[i]);
    if (max_deviation) *max_deviation = report.max_relative_deviation;
  });
}

rrd_status rrd_histogram_sample(const rrd_histogram_config* config, rrd_histogram** out) {
  return guarded([&] {
    require(config && out, "null argument");
    *out = nullptr;
    rrd::HistogramSampling c;
    c.target_reduced_size = config->target_reduced_size;
    c.min_count = config->min_count;
    c.seed = config->seed;
    if (config->max_generated) c.max_generated = config->max_generated;
    c.bin_width = config->bin_width ? config->bin_width : 1;
    c.threads = config->threads;
    *out = new rrd_histogram{rrd::sample_histogram(c)};
  });
}

rrd_status rrd_histogram_from_batch(const rrd_batch* batch, size_t target_reduced_size,
                                    uint64_t bin_width, rrd_histogram** out) {
  return guarded([&] {
    require(batch && out, "null argument");
    *out = nullptr;
    *out = new rrd_histogram{rrd::histogram_from_records(batch->records, target_reduced_size,
                                                         bin_width ? bin_width : 1)};
  });
}

void rrd_histogram_free(rrd_histogram* histogram) { delete histogram; }

rrd_status rrd_histogram_get_summary(const rrd_histogram* h, rrd_histogram_summary* out) {
  return guarded([&] {
    require(h && out, "null argument");
    const auto& hist = h->histogram;
    *out = {hist.target_reduced_size, hist.bin_width,   hist.bins.size(),
            hist.stats.count,         hist.generated,   hist.stats.mean,
            hist.stats.sd,            hist.stats.skewness};
  });
}

rrd_status rrd_histogram_bin(const rrd_histogram* h, size_t index, uint64_t* lower_edge,
                             uint64_t* count) {
  return guarded([&] {
    require(h != nullptr, "histogram is null");
    require(index < h->histogram.bins.size(), "bin index out of range");
    if (lower_edge) *lower_edge = h->histogram.bins[index].first;
    if (count) *count = h->histogram.bins[index].second;
  });
}

rrd_status rrd_histogram_write_csv(const rrd_histogram* h, const char* path) {
  return guarded([&] {
    require(h != nullptr, "histogram is null");
    with_output(path, [&](std::ostream& out) { rrd::write_histogram_csv(out, h->histogram); });
  });
}

rrd_status rrd_histogram_write_svg(const rrd_histogram* h, const char* path) {
  return guarded([&] {
    require(h != nullptr, "histogram is null");
    with_output(path, [&](std::ostream& out) { rrd::write_histogram_svg(out, h->histogram); });
  });
}

}  // extern "C"
