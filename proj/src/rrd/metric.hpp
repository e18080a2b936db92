#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "rrd/transform.hpp"
#include "rrd/tree.hpp"

namespace rrd {

/// Fordham's caret classes.
enum class CaretType : std::uint8_t {
  kL0,   // first node of the left arm (in-order index 0)
  kLL,   // any other node of the left arm
  kI0,   // interior node whose right child is a leaf
  kIR,   // interior node whose right child is internal
  kRI,   // right node whose in-order successor is interior
  kRNI,  // right node, not RI, with some later interior node
  kR0,   // right node with no later interior node
};

std::string_view caret_type_name(CaretType t) noexcept;
std::optional<CaretType> caret_type_from_name(std::string_view name) noexcept;

/// Caret types indexed by in-order position. Linear time. Throws
/// kInvalidArgument for the empty tree.
std::vector<CaretType> classify(const Tree& t);

/// Weight contributed by a pair of same-index carets. (L0, L0) weighs 0;
/// L0 against anything else throws kInternal.
int pair_weight(CaretType a, CaretType b);

using TypePair = std::pair<CaretType, CaretType>;

struct DistanceResult {
  std::uint64_t distance = 0;
  std::size_t reduced_size = 0;
  std::size_t original_size = 0;
  /// Indexed by in-order position in the reduced pair.
  std::vector<TypePair> type_pairs;
};

struct DistanceOptions {
  /// Reject unreduced input (kNotReduced) instead of reducing it first.
  bool strict = false;
  /// Skip filling DistanceResult::type_pairs.
  bool skip_type_pairs = false;
};

/// Restricted rotation distance: reduces the pair, classifies both trees and
/// sums the caret-pair weights. Throws kSizeMismatch.
DistanceResult restricted_distance(const TreePair& pair, const DistanceOptions& options = {});

/// Same, on a pair already known to be reduced.
DistanceResult restricted_distance_reduced(const ReducedTreePair& reduced, bool skip_type_pairs = false);

}  // namespace rrd
