#include "rrd/metric.hpp"

#include <array>
#include <string>

#include "rrd/error.hpp"

namespace rrd {

namespace {

// Rows and columns ordered R0, RNI, RI, LL, I0, IR.
constexpr std::array<std::array<int, 6>, 6> kWeights = {{
    {0, 2, 2, 1, 1, 3},
    {2, 2, 2, 1, 1, 3},
    {2, 2, 2, 1, 3, 3},
    {1, 1, 1, 2, 2, 2},
    {1, 1, 3, 2, 2, 4},
    {3, 3, 3, 2, 4, 4},
}};

constexpr int table_index(CaretType t) {
  switch (t) {
    case CaretType::kR0: return 0;
    case CaretType::kRNI: return 1;
    case CaretType::kRI: return 2;
    case CaretType::kLL: return 3;
    case CaretType::kI0: return 4;
    case CaretType::kIR: return 5;
    case CaretType::kL0: return -1;
  }
  return -1;
}

constexpr std::array<std::string_view, 7> kNames = {"L0", "LL", "I0", "IR",
                                                    "RI", "RNI", "R0"};

}  // namespace

std::string_view caret_type_name(CaretType t) noexcept {
  return kNames[static_cast<std::size_t>(t)];
}

std::optional<CaretType> caret_type_from_name(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<CaretType>(i);
  }
  return std::nullopt;
}

std::vector<CaretType> classify(const Tree& t) {
  if (t.empty()) throw Error(ErrorCode::kInvalidArgument, "cannot classify the empty tree");
  const auto order = t.inorder_sequence();
  const auto category = t.categories();
  const std::size_t n = order.size();

  std::vector<CaretType> types(n);
  bool interior_after = false;
  for (std::size_t k = n; k-- > 0;) {
    const NodeId node = order[k];
    switch (category[static_cast<std::size_t>(node)]) {
      case NodeCategory::kLeft:
        types[k] = k == 0 ? CaretType::kL0 : CaretType::kLL;
        break;
      case NodeCategory::kInterior:
        types[k] = is_leaf(t.right(node)) ? CaretType::kI0 : CaretType::kIR;
        break;
      case NodeCategory::kRight: {
        const bool next_interior =
            k + 1 < n &&
            category[static_cast<std::size_t>(order[k + 1])] == NodeCategory::kInterior;
        types[k] = next_interior    ? CaretType::kRI
                   : interior_after ? CaretType::kRNI
                                    : CaretType::kR0;
        break;
      }
    }
    if (category[static_cast<std::size_t>(node)] == NodeCategory::kInterior) {
      interior_after = true;
    }
  }
  return types;
}

int pair_weight(CaretType a, CaretType b) {
  const bool a0 = a == CaretType::kL0;
  const bool b0 = b == CaretType::kL0;
  if (a0 && b0) return 0;
  if (a0 || b0) {
    throw Error(ErrorCode::kInternal, "L0 caret paired with " +
                                          std::string(caret_type_name(a0 ? b : a)));
  }
  return kWeights[static_cast<std::size_t>(table_index(a))]
                 [static_cast<std::size_t>(table_index(b))];
}

DistanceResult restricted_distance_reduced(const ReducedTreePair& reduced, bool skip_type_pairs) {
  DistanceResult result;
  result.reduced_size = reduced.size();
  result.original_size = reduced.original_size;
  if (reduced.size() == 0) return result;

  const auto a = classify(reduced.first);
  const auto b = classify(reduced.second);
  if (!skip_type_pairs) result.type_pairs.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    result.distance += static_cast<std::uint64_t>(pair_weight(a[k], b[k]));
    if (!skip_type_pairs) result.type_pairs.emplace_back(a[k], b[k]);
  }
  return result;
}

DistanceResult restricted_distance(const TreePair& pair, const DistanceOptions& options) {
  require_same_size(pair);
  if (options.strict) {
    if (!is_reduced(pair)) {
      throw Error(ErrorCode::kNotReduced, "tree pair is not reduced");
    }
    return restricted_distance_reduced({pair.first, pair.second, pair.first.size()},
                       options.skip_type_pairs);
  }
  return restricted_distance_reduced(reduce_pair(pair), options.skip_type_pairs);
}

}  // namespace rrd
