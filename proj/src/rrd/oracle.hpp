#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rrd/tree.hpp"

namespace rrd {

inline constexpr std::size_t kMaxOracleSize = 12;
inline constexpr std::size_t kMaxVerifySize = 7;
inline constexpr std::size_t kMaxExtremalSize = 9;

/// All encodings of size n in lexicographic order. Throws kBoundExceeded
/// above kMaxOracleSize.
std::vector<std::string> enumerate_trees(std::size_t n);

/// Catalan number C_n (exact for n <= 35).
std::uint64_t catalan(std::size_t n);

/// Restricted rotation graph: vertices are all trees of one size, edges join
/// trees one root or right-child-of-root rotation apart.
class RestrictedRotationGraph {
 public:
  /// Throws kBoundExceeded outside 1..kMaxOracleSize.
  explicit RestrictedRotationGraph(std::size_t n);

  std::size_t tree_size() const noexcept { return n_; }
  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  const std::string& vertex(std::size_t i) const { return vertices_[i]; }
  const std::vector<std::uint32_t>& neighbors(std::size_t i) const { return adjacency_[i]; }

  /// Index of an encoding, or nullopt if it is not a vertex.
  std::optional<std::size_t> index_of(const std::string& encoding) const;

  /// BFS distances from one vertex to all vertices.
  std::vector<std::uint32_t> distances_from(std::size_t source) const;

  bool connected() const;

  /// One "encodingA encodingB" line per undirected edge, A < B.
  void write_edge_list(std::ostream& out) const;

 private:
  std::size_t n_;
  std::vector<std::string> vertices_;
  std::vector<std::vector<std::uint32_t>> adjacency_;
  std::size_t edge_count_ = 0;
};

RestrictedRotationGraph build_rrg(std::size_t n);

/// BFS distance between two trees of the same size. Builds the graph, so
/// prefer the graph API for repeated queries.
std::uint32_t oracle_distance(const Tree& s, const Tree& t);

struct Mismatch {
  std::string first;
  std::string second;
  std::uint64_t fordham = 0;
  std::uint32_t bfs = 0;
};

struct VerifyReport {
  std::size_t n = 0;
  std::uint64_t pairs_checked = 0;
  std::uint64_t mismatches = 0;
  /// The first few offending pairs.
  std::vector<Mismatch> examples;
};

/// Compares rrd with BFS distance on every ordered pair of size-n trees.
/// Throws kBoundExceeded outside 2..kMaxVerifySize.
VerifyReport verify_fordham(std::size_t n);

struct ExtremalReport {
  std::size_t n = 0;
  std::uint64_t reduced_pairs = 0;
  std::uint32_t min_distance = 0;
  std::uint32_t max_distance = 0;
  TreePair min_witness;
  TreePair max_witness;
  /// Fordham distance != BFS distance on a reduced pair (should stay 0).
  std::uint64_t fordham_mismatches = 0;
  /// Number of (R0, R0) caret pairs seen in reduced pairs.
  std::uint64_t r0_r0_pairs = 0;

  bool lower_bound_attained() const { return min_distance + 1 == n; }
  bool upper_bound_attained() const { return max_distance + 8 == 4 * n; }
};

/// Min/max BFS distance over reduced pairs of size exactly n, with witnesses.
/// Throws kBoundExceeded outside 2..kMaxExtremalSize.
ExtremalReport extremal_distances(std::size_t n);

}  // namespace rrd
