/*
 * rrd: restricted rotation distance between rooted ordered binary trees.
 *
 * C interface to the library. Objects are opaque handles created by
 * rrd_*_new/parse/build/run functions and released with the matching
 * rrd_*_free function; freeing NULL is a no-op. Every fallible call returns
 * an rrd_status and, on failure, records a message retrievable with
 * rrd_last_error() on the calling thread.
 *
 * Trees are exchanged as preorder encodings: '1' for an internal node, '0'
 * for a leaf, no whitespace.
 *
 * Text out-parameters follow the snprintf convention: the call writes at
 * most `cap` bytes including the terminating NUL and always reports the
 * full length (excluding the NUL) through `len` when it is non-NULL, so a
 * first call with cap == 0 sizes the buffer.
 */
#ifndef RRD_RRD_H
#define RRD_RRD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RRD_BUILDING_LIBRARY)
#    define RRD_API __declspec(dllexport)
#  else
#    define RRD_API __declspec(dllimport)
#  endif
#else
#  define RRD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rrd_status {
  RRD_OK = 0,
  RRD_ERR_PARSE = 1,
  RRD_ERR_SIZE_MISMATCH = 2,
  RRD_ERR_INAPPLICABLE = 3,
  RRD_ERR_BAD_ADDRESS = 4,
  RRD_ERR_NOT_REDUCED = 5,
  RRD_ERR_BOUND = 6,
  RRD_ERR_INVALID_ARGUMENT = 7,
  RRD_ERR_IO = 8,
  RRD_ERR_BUDGET = 9,
  RRD_ERR_DEGENERATE = 10,
  RRD_ERR_INTERNAL = 11,
  RRD_ERR_NO_MEMORY = 12
} rrd_status;

/* Message for the last failed call on this thread ("" if none). */
RRD_API const char* rrd_last_error(void);
RRD_API const char* rrd_status_name(rrd_status status);
RRD_API const char* rrd_version(void);

/* ---- trees -------------------------------------------------------------- */

typedef struct rrd_tree rrd_tree;

/* `len` is the encoding length; the text need not be NUL-terminated. On a
 * parse failure *error_position (if non-NULL) receives the first offending
 * index. */
RRD_API rrd_status rrd_tree_parse(const char* text, size_t len, rrd_tree** out,
                                  size_t* error_position);
RRD_API rrd_tree* rrd_tree_clone(const rrd_tree* tree);
RRD_API void rrd_tree_free(rrd_tree* tree);

RRD_API size_t rrd_tree_size(const rrd_tree* tree);
RRD_API rrd_status rrd_tree_encoding(const rrd_tree* tree, char* buf, size_t cap, size_t* len);
RRD_API int rrd_tree_equal(const rrd_tree* a, const rrd_tree* b);

typedef enum rrd_node_category {
  RRD_NODE_LEFT = 0,
  RRD_NODE_RIGHT = 1,
  RRD_NODE_INTERIOR = 2
} rrd_node_category;

/* Address ('0' left, '1' right, "" the root) of the internal node with the
 * given in-order index. */
RRD_API rrd_status rrd_tree_inorder_address(const rrd_tree* tree, size_t inorder_index,
                                            char* buf, size_t cap, size_t* len);
RRD_API rrd_status rrd_tree_node_category(const rrd_tree* tree, const char* address,
                                          rrd_node_category* out);

/* Writes up to `cap` leaf numbers i such that leaves i, i+1 are siblings in
 * both trees; *count receives the total. */
RRD_API rrd_status rrd_common_sibling_leaf_pairs(const rrd_tree* s, const rrd_tree* t,
                                                 int32_t* out, size_t cap, size_t* count);

/* ---- rotations and reduction ------------------------------------------- */

typedef enum rrd_direction { RRD_LEFT = 0, RRD_RIGHT = 1 } rrd_direction;

typedef enum rrd_move {
  RRD_MOVE_X0 = 0,  /* right rotation at the root */
  RRD_MOVE_X0I = 1, /* left rotation at the root */
  RRD_MOVE_X1 = 2,  /* right rotation at the right child of the root */
  RRD_MOVE_X1I = 3  /* left rotation at the right child of the root */
} rrd_move;

RRD_API const char* rrd_move_name(rrd_move move);
RRD_API rrd_status rrd_move_from_name(const char* name, rrd_move* out);

RRD_API rrd_status rrd_rotate(const rrd_tree* tree, const char* address, rrd_direction direction,
                              rrd_tree** out);
/* Bit (1 << move) is set for each applicable move. */
RRD_API unsigned rrd_applicable_moves(const rrd_tree* tree);
RRD_API rrd_status rrd_apply_move(const rrd_tree* tree, rrd_move move, rrd_tree** out);

RRD_API rrd_status rrd_reduce_pair(const rrd_tree* s, const rrd_tree* t, rrd_tree** s_out,
                                   rrd_tree** t_out);

/* ---- distance ----------------------------------------------------------- */

typedef enum rrd_caret_type {
  RRD_CARET_L0 = 0,
  RRD_CARET_LL = 1,
  RRD_CARET_I0 = 2,
  RRD_CARET_IR = 3,
  RRD_CARET_RI = 4,
  RRD_CARET_RNI = 5,
  RRD_CARET_R0 = 6
} rrd_caret_type;

RRD_API const char* rrd_caret_type_name(rrd_caret_type type);

/* Caret types by in-order index; *count receives the tree size. */
RRD_API rrd_status rrd_classify(const rrd_tree* tree, rrd_caret_type* out, size_t cap,
                                size_t* count);
RRD_API rrd_status rrd_pair_weight(rrd_caret_type a, rrd_caret_type b, int* out);

typedef struct rrd_distance_result rrd_distance_result;

enum { RRD_DISTANCE_STRICT = 1 };

/* flags: RRD_DISTANCE_STRICT rejects unreduced pairs with RRD_ERR_NOT_REDUCED. */
RRD_API rrd_status rrd_distance(const rrd_tree* s, const rrd_tree* t, unsigned flags,
                                rrd_distance_result** out);
RRD_API void rrd_distance_result_free(rrd_distance_result* result);
RRD_API uint64_t rrd_distance_value(const rrd_distance_result* result);
RRD_API size_t rrd_distance_reduced_size(const rrd_distance_result* result);
RRD_API size_t rrd_distance_original_size(const rrd_distance_result* result);
/* Caret types of the index-th node pair of the reduced trees. */
RRD_API rrd_status rrd_distance_type_pair(const rrd_distance_result* result, size_t index,
                                          rrd_caret_type* first, rrd_caret_type* second);

/* ---- random trees ------------------------------------------------------- */

RRD_API rrd_status rrd_sample_tree(size_t n, uint64_t seed, uint64_t stream, rrd_tree** out);
RRD_API rrd_status rrd_sample_pair(size_t n, uint64_t seed, uint64_t stream, rrd_tree** s_out,
                                   rrd_tree** t_out);
/* Master seed of child stream `index`. */
RRD_API uint64_t rrd_derive_seed(uint64_t seed, uint64_t index);

/* ---- brute-force oracle ------------------------------------------------- */

typedef struct rrd_graph rrd_graph;

RRD_API rrd_status rrd_graph_build(size_t n, rrd_graph** out);
RRD_API void rrd_graph_free(rrd_graph* graph);
RRD_API size_t rrd_graph_vertex_count(const rrd_graph* graph);
RRD_API size_t rrd_graph_edge_count(const rrd_graph* graph);
RRD_API int rrd_graph_connected(const rrd_graph* graph);
RRD_API rrd_status rrd_graph_vertex(const rrd_graph* graph, size_t index, char* buf, size_t cap,
                                    size_t* len);
/* Writes "encodingA encodingB" lines; path "-" means standard output. */
RRD_API rrd_status rrd_graph_write_edges(const rrd_graph* graph, const char* path);
RRD_API rrd_status rrd_oracle_distance(const rrd_tree* s, const rrd_tree* t, uint32_t* out);

typedef struct rrd_verify_report {
  size_t n;
  uint64_t pairs_checked;
  uint64_t mismatches;
} rrd_verify_report;

RRD_API rrd_status rrd_verify_fordham(size_t n, rrd_verify_report* out);

typedef struct rrd_extremal_report rrd_extremal_report;

RRD_API rrd_status rrd_extremal(size_t n, rrd_extremal_report** out);
RRD_API void rrd_extremal_free(rrd_extremal_report* report);
RRD_API uint32_t rrd_extremal_min(const rrd_extremal_report* report);
RRD_API uint32_t rrd_extremal_max(const rrd_extremal_report* report);
RRD_API uint64_t rrd_extremal_reduced_pairs(const rrd_extremal_report* report);
/* which: 0 for the minimum witness, 1 for the maximum; side: 0 or 1. */
RRD_API rrd_status rrd_extremal_witness(const rrd_extremal_report* report, int which, int side,
                                        char* buf, size_t cap, size_t* len);

/* ---- experiments -------------------------------------------------------- */

typedef struct rrd_size_range {
  size_t lo;
  size_t hi;
} rrd_size_range;

/* Parses "lo:hi,..." or "paper". Writes up to `cap` ranges, reports total. */
RRD_API rrd_status rrd_parse_buckets(const char* text, rrd_size_range* out, size_t cap,
                                     size_t* count);

typedef struct rrd_batch_config {
  const rrd_size_range* ranges;
  size_t range_count;
  size_t count_per_range;
  uint64_t seed;
  unsigned threads;
} rrd_batch_config;

typedef struct rrd_pair_record {
  uint64_t stream_index;
  size_t raw_size;
  size_t reduced_size;
  uint64_t distance;
} rrd_pair_record;

typedef struct rrd_batch rrd_batch;

RRD_API rrd_status rrd_batch_run(const rrd_batch_config* config, rrd_batch** out);
/* Loads a per-pair CSV written by rrd_batch_write_csv. */
RRD_API rrd_status rrd_batch_read_csv(const char* path, rrd_batch** out);
RRD_API void rrd_batch_free(rrd_batch* batch);
RRD_API size_t rrd_batch_size(const rrd_batch* batch);
RRD_API rrd_status rrd_batch_record(const rrd_batch* batch, size_t index, rrd_pair_record* out);
RRD_API rrd_status rrd_batch_write_csv(const rrd_batch* batch, const char* path);

typedef enum rrd_aggregate_mode {
  RRD_BY_RAW_SIZE = 0,
  RRD_BY_REDUCED_SIZE = 1
} rrd_aggregate_mode;

typedef struct rrd_bucket_row {
  rrd_size_range range;
  size_t count;
  /* The averages are meaningful only when count > 0. */
  double avg_reduced_fraction;
  double avg_ratio;
  double sd_ratio;
} rrd_bucket_row;

/* `out` must hold bucket_count rows. */
RRD_API rrd_status rrd_aggregate(const rrd_batch* batch, const rrd_size_range* buckets,
                                 size_t bucket_count, rrd_aggregate_mode mode,
                                 rrd_bucket_row* out);
RRD_API rrd_status rrd_write_bucket_csv(const rrd_bucket_row* rows, size_t count,
                                        const char* path);

typedef struct rrd_fit {
  double slope;
  double intercept;
  double max_relative_residual;
  size_t count;
} rrd_fit;

RRD_API rrd_status rrd_fit_points(const double* sizes, const double* distances, size_t count,
                                  rrd_fit* out);
RRD_API rrd_status rrd_batch_fit(const rrd_batch* batch, rrd_aggregate_mode mode, rrd_fit* out);

/* fractions[i] receives the share of records whose relative deviation from
 * the fit exceeds thresholds[i]. */
RRD_API rrd_status rrd_batch_deviation(const rrd_batch* batch, rrd_aggregate_mode mode,
                                       const rrd_fit* fit, const double* thresholds,
                                       size_t threshold_count, double* fractions,
                                       double* max_deviation);

typedef struct rrd_histogram rrd_histogram;

typedef struct rrd_histogram_config {
  size_t target_reduced_size;
  size_t min_count;
  uint64_t seed;
  uint64_t max_generated; /* 0 selects the default budget */
  uint64_t bin_width;     /* 0 selects 1 */
  unsigned threads;
} rrd_histogram_config;

RRD_API rrd_status rrd_histogram_sample(const rrd_histogram_config* config, rrd_histogram** out);
RRD_API rrd_status rrd_histogram_from_batch(const rrd_batch* batch, size_t target_reduced_size,
                                            uint64_t bin_width, rrd_histogram** out);
RRD_API void rrd_histogram_free(rrd_histogram* histogram);

typedef struct rrd_histogram_summary {
  size_t target_reduced_size;
  uint64_t bin_width;
  size_t bin_count;
  size_t sample_count;
  uint64_t generated;
  double mean;
  double sd;
  double skewness;
} rrd_histogram_summary;

RRD_API rrd_status rrd_histogram_get_summary(const rrd_histogram* histogram,
                                             rrd_histogram_summary* out);
RRD_API rrd_status rrd_histogram_bin(const rrd_histogram* histogram, size_t index,
                                     uint64_t* lower_edge, uint64_t* count);
RRD_API rrd_status rrd_histogram_write_csv(const rrd_histogram* histogram, const char* path);
RRD_API rrd_status rrd_histogram_write_svg(const rrd_histogram* histogram, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* RRD_RRD_H */
