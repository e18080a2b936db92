#include "rrd/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>

#include "rrd/error.hpp"
#include "rrd/metric.hpp"
#include "rrd/transform.hpp"

namespace rrd {

namespace {

__extension__ typedef unsigned __int128 u128;

constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

void check_range(std::size_t n, std::size_t lo, std::size_t hi, const char* what) {
  if (n < lo || n > hi) {
    throw Error(ErrorCode::kBoundExceeded,
                std::string(what) + ": size " + std::to_string(n) + " outside supported range " +
                    std::to_string(lo) + ".." + std::to_string(hi));
  }
}

std::uint32_t sibling_mask(const Tree& t) {
  std::uint32_t mask = 0;
  for (const auto i : t.sibling_leaf_pairs()) mask |= 1u << i;
  return mask;
}

}  // namespace

std::uint64_t catalan(std::size_t n) {
  // C_{k+1} = C_k * 2(2k+1) / (k+2); the product stays exact in 128 bits.
  u128 c = 1;
  for (std::size_t k = 0; k < n; ++k) c = c * (2 * (2 * k + 1)) / (k + 2);
  return static_cast<std::uint64_t>(c);
}

std::vector<std::string> enumerate_trees(std::size_t n) {
  check_range(n, 0, kMaxOracleSize, "enumerate_trees");
  std::vector<std::string> out;
  out.reserve(catalan(n));
  std::string buf;
  buf.reserve(2 * n + 1);
  // `open` is the number of leaves still owed; ones counts internal nodes.
  std::function<void(std::size_t, std::size_t)> extend = [&](std::size_t ones,
                                                             std::size_t open) {
    if (open == 0) {
      out.push_back(buf);
      return;
    }
    // A '0' may close the tree early only once all n internal nodes are used.
    if (open > 1 || ones == n) {
      buf.push_back('0');
      extend(ones, open - 1);
      buf.pop_back();
    }
    if (ones < n) {
      buf.push_back('1');
      extend(ones + 1, open + 1);
      buf.pop_back();
    }
  };
  extend(0, 1);
  return out;
}

RestrictedRotationGraph::RestrictedRotationGraph(std::size_t n) : n_(n) {
  check_range(n, 1, kMaxOracleSize, "restricted rotation graph");
  vertices_ = enumerate_trees(n);
  adjacency_.resize(vertices_.size());
  std::size_t degree_sum = 0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Tree t = Tree::parse(vertices_[i]);
    auto& adj = adjacency_[i];
    for (const Move m : applicable_moves(t)) {
      const auto j = index_of(apply_move(t, m).encoding());
      if (!j) throw Error(ErrorCode::kInternal, "rotation left the vertex set");
      adj.push_back(static_cast<std::uint32_t>(*j));
    }
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    degree_sum += adj.size();
  }
  edge_count_ = degree_sum / 2;
}

std::optional<std::size_t> RestrictedRotationGraph::index_of(const std::string& encoding) const {
  const auto it = std::lower_bound(vertices_.begin(), vertices_.end(), encoding);
  if (it == vertices_.end() || *it != encoding) return std::nullopt;
  return static_cast<std::size_t>(it - vertices_.begin());
}

std::vector<std::uint32_t> RestrictedRotationGraph::distances_from(std::size_t source) const {
  std::vector<std::uint32_t> dist(vertices_.size(), kUnreached);
  std::vector<std::uint32_t> queue;
  queue.reserve(vertices_.size());
  dist[source] = 0;
  queue.push_back(static_cast<std::uint32_t>(source));
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto v = queue[head];
    for (const auto w : adjacency_[v]) {
      if (dist[w] == kUnreached) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

bool RestrictedRotationGraph::connected() const {
  const auto dist = distances_from(0);
  return std::none_of(dist.begin(), dist.end(), [](auto d) { return d == kUnreached; });
}

void RestrictedRotationGraph::write_edge_list(std::ostream& out) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    for (const auto j : adjacency_[i]) {
      if (i < j) out << vertices_[i] << ' ' << vertices_[j] << '\n';
    }
  }
}

RestrictedRotationGraph build_rrg(std::size_t n) { return RestrictedRotationGraph(n); }

std::uint32_t oracle_distance(const Tree& s, const Tree& t) {
  require_same_size({s, t});
  if (s == t) return 0;
  const RestrictedRotationGraph g(s.size());
  const auto d = g.distances_from(*g.index_of(s.encoding()))[*g.index_of(t.encoding())];
  if (d == kUnreached) throw Error(ErrorCode::kInternal, "graph is disconnected");
  return d;
}

VerifyReport verify_fordham(std::size_t n) {
  check_range(n, 2, kMaxVerifySize, "verify_fordham");
  const RestrictedRotationGraph g(n);
  std::vector<Tree> trees;
  trees.reserve(g.vertex_count());
  for (std::size_t i = 0; i < g.vertex_count(); ++i) trees.push_back(Tree::parse(g.vertex(i)));

  VerifyReport report;
  report.n = n;
  DistanceOptions options;
  options.skip_type_pairs = true;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    const auto dist = g.distances_from(i);
    for (std::size_t j = 0; j < trees.size(); ++j) {
      const auto fordham = restricted_distance({trees[i], trees[j]}, options).distance;
      ++report.pairs_checked;
      if (fordham != dist[j]) {
        ++report.mismatches;
        if (report.examples.size() < 16) {
          report.examples.push_back({g.vertex(i), g.vertex(j), fordham, dist[j]});
        }
      }
    }
  }
  return report;
}

ExtremalReport extremal_distances(std::size_t n) {
  check_range(n, 2, kMaxExtremalSize, "extremal_distances");
  const RestrictedRotationGraph g(n);
  const std::size_t count = g.vertex_count();
  std::vector<Tree> trees;
  std::vector<std::uint32_t> masks;
  std::vector<std::vector<CaretType>> types;
  trees.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    trees.push_back(Tree::parse(g.vertex(i)));
    masks.push_back(sibling_mask(trees.back()));
    types.push_back(classify(trees.back()));
  }

  ExtremalReport report;
  report.n = n;
  report.min_distance = kUnreached;
  for (std::size_t i = 0; i < count; ++i) {
    const auto dist = g.distances_from(i);
    for (std::size_t j = 0; j < count; ++j) {
      if ((masks[i] & masks[j]) != 0) continue;
      ++report.reduced_pairs;
      std::uint64_t fordham = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const auto a = types[i][k];
        const auto b = types[j][k];
        fordham += static_cast<std::uint64_t>(pair_weight(a, b));
        if (a == CaretType::kR0 && b == CaretType::kR0) ++report.r0_r0_pairs;
      }
      if (fordham != dist[j]) ++report.fordham_mismatches;
      if (dist[j] < report.min_distance) {
        report.min_distance = dist[j];
        report.min_witness = {trees[i], trees[j]};
      }
      if (dist[j] > report.max_distance) {
        report.max_distance = dist[j];
        report.max_witness = {trees[i], trees[j]};
      }
    }
  }
  return report;
}

}  // namespace rrd
