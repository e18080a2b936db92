#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "rrd/tree.hpp"

namespace rrd {

enum class Direction { kLeft, kRight };

/// The four rotations allowed for restricted rotation distance, with their
/// Thompson's group F generator names.
enum class Move {
  kRightAtRoot,        // x0
  kLeftAtRoot,         // x0^-1
  kRightAtRightChild,  // x1
  kLeftAtRightChild,   // x1^-1
};

inline constexpr std::array<Move, 4> kAllMoves = {
    Move::kRightAtRoot, Move::kLeftAtRoot, Move::kRightAtRightChild,
    Move::kLeftAtRightChild};

Move inverse(Move m) noexcept;

/// CLI/CSV names: x0, x0i, x1, x1i.
std::string_view move_name(Move m) noexcept;
std::optional<Move> move_from_name(std::string_view name) noexcept;

/// Standard rotation at an arbitrary internal node. A left rotation promotes
/// the right child, a right rotation promotes the left child. Throws
/// kBadAddress or kInapplicable.
Tree rotate(const Tree& t, NodeId at, Direction direction);
Tree rotate(const Tree& t, const Address& at, Direction direction);

/// Moves applicable to t, in kAllMoves order.
std::vector<Move> applicable_moves(const Tree& t);

bool is_applicable(const Tree& t, Move m);

/// Throws kInapplicable when m is not applicable to t.
Tree apply_move(const Tree& t, Move m);

struct ReducedTreePair {
  Tree first;
  Tree second;
  std::size_t original_size = 0;

  std::size_t size() const noexcept { return first.size(); }
  TreePair pair() const { return {first, second}; }

  bool operator==(const ReducedTreePair&) const = default;
};

/// Removes one common sibling-leaf pair (leaves `leaf`, `leaf`+1), replacing
/// its parent by a single leaf in both trees. Throws kInapplicable if that
/// pair is not common to both trees.
TreePair reduce_at(const TreePair& pair, std::int32_t leaf);

/// Repeatedly removes common sibling-leaf pairs until none remain. Runs in
/// time linear in the tree size. Throws kSizeMismatch.
ReducedTreePair reduce_pair(const TreePair& pair);

bool is_reduced(const TreePair& pair);

}  // namespace rrd
