#include "rrd/transform.hpp"

#include <string>

#include "rrd/error.hpp"

namespace rrd {

namespace {

std::int32_t leftmost_leaf(const Tree& t, Slot s) {
  while (!is_leaf(s)) s = t.left(s);
  return leaf_number(s);
}

std::int32_t rightmost_leaf(const Tree& t, Slot s) {
  while (!is_leaf(s)) s = t.right(s);
  return leaf_number(s);
}

// Offset of an internal node's first symbol in the encoding: it is preceded
// by the internal nodes before it in preorder and by the leaves to its left.
std::size_t encoding_offset(const Tree& t, NodeId n) {
  return static_cast<std::size_t>(n) + static_cast<std::size_t>(leftmost_leaf(t, n));
}

std::size_t encoding_length(const Tree& t, Slot s) {
  return 2 * static_cast<std::size_t>(rightmost_leaf(t, s) - leftmost_leaf(t, s)) + 1;
}

}  // namespace

Move inverse(Move m) noexcept {
  switch (m) {
    case Move::kRightAtRoot: return Move::kLeftAtRoot;
    case Move::kLeftAtRoot: return Move::kRightAtRoot;
    case Move::kRightAtRightChild: return Move::kLeftAtRightChild;
    case Move::kLeftAtRightChild: return Move::kRightAtRightChild;
  }
  return m;
}

std::string_view move_name(Move m) noexcept {
  switch (m) {
    case Move::kRightAtRoot: return "x0";
    case Move::kLeftAtRoot: return "x0i";
    case Move::kRightAtRightChild: return "x1";
    case Move::kLeftAtRightChild: return "x1i";
  }
  return "?";
}

std::optional<Move> move_from_name(std::string_view name) noexcept {
  for (const Move m : kAllMoves) {
    if (move_name(m) == name) return m;
  }
  return std::nullopt;
}

Tree rotate(const Tree& t, NodeId at, Direction direction) {
  if (at < 0 || static_cast<std::size_t>(at) >= t.size()) {
    throw Error(ErrorCode::kBadAddress, "rotation node out of range");
  }
  // Left rotation rewrites 1 x 1 y z as 1 1 x y z; right rotation is the
  // inverse. Either way exactly one '1' changes position.
  std::string enc = t.encoding();
  const std::size_t at_pos = encoding_offset(t, at);
  if (direction == Direction::kLeft) {
    const Slot x = t.left(at);
    if (is_leaf(t.right(at))) {
      throw Error(ErrorCode::kInapplicable, "left rotation needs an internal right child");
    }
    const std::size_t moved = at_pos + 1 + encoding_length(t, x);
    enc.erase(moved, 1);
    enc.insert(at_pos + 1, 1, '1');
  } else {
    const Slot child = t.left(at);
    if (is_leaf(child)) {
      throw Error(ErrorCode::kInapplicable, "right rotation needs an internal left child");
    }
    const std::size_t x_len = encoding_length(t, t.left(child));
    enc.erase(at_pos + 1, 1);
    enc.insert(at_pos + 1 + x_len, 1, '1');
  }
  return Tree::parse(enc);
}

Tree rotate(const Tree& t, const Address& at, Direction direction) {
  return rotate(t, t.resolve(at), direction);
}

bool is_applicable(const Tree& t, Move m) {
  if (t.empty()) return false;
  const Slot l = t.left(0);
  const Slot r = t.right(0);
  switch (m) {
    case Move::kRightAtRoot: return !is_leaf(l);
    case Move::kLeftAtRoot: return !is_leaf(r);
    case Move::kRightAtRightChild: return !is_leaf(r) && !is_leaf(t.left(r));
    case Move::kLeftAtRightChild: return !is_leaf(r) && !is_leaf(t.right(r));
  }
  return false;
}

std::vector<Move> applicable_moves(const Tree& t) {
  std::vector<Move> out;
  for (const Move m : kAllMoves) {
    if (is_applicable(t, m)) out.push_back(m);
  }
  return out;
}

Tree apply_move(const Tree& t, Move m) {
  if (!is_applicable(t, m)) {
    throw Error(ErrorCode::kInapplicable,
                "move " + std::string(move_name(m)) + " is not applicable to " + t.encoding());
  }
  switch (m) {
    case Move::kRightAtRoot: return rotate(t, 0, Direction::kRight);
    case Move::kLeftAtRoot: return rotate(t, 0, Direction::kLeft);
    case Move::kRightAtRightChild: return rotate(t, t.right(0), Direction::kRight);
    case Move::kLeftAtRightChild: return rotate(t, t.right(0), Direction::kLeft);
  }
  throw Error(ErrorCode::kInternal, "unknown move");
}

TreePair reduce_at(const TreePair& pair, std::int32_t leaf) {
  require_same_size(pair);
  auto collapse = [leaf](const Tree& t) -> std::optional<std::string> {
    for (NodeId n = 0; n < static_cast<NodeId>(t.size()); ++n) {
      if (is_leaf(t.left(n)) && is_leaf(t.right(n)) && leaf_number(t.left(n)) == leaf) {
        // The node's "100" becomes a single "0".
        std::string enc = t.encoding();
        enc.replace(encoding_offset(t, n), 3, "0");
        return enc;
      }
    }
    return std::nullopt;
  };
  auto a = collapse(pair.first);
  auto b = collapse(pair.second);
  if (!a || !b) {
    throw Error(ErrorCode::kInapplicable,
                "leaves " + std::to_string(leaf) + " and " + std::to_string(leaf + 1) +
                    " are not siblings in both trees");
  }
  return {Tree::parse(*a), Tree::parse(*b)};
}

namespace {

// Mutable view of one tree during reduction. Internal nodes keep their ids
// 0..n-1; original leaf j is node n+j.
class Collapsible {
 public:
  explicit Collapsible(const Tree& t) : n_(static_cast<std::int32_t>(t.size())) {
    const auto total = static_cast<std::size_t>(2 * n_ + 1);
    left_.assign(total, -1);
    right_.assign(total, -1);
    parent_.assign(total, -1);
    leaf_.assign(total, 0);
    holder_.resize(static_cast<std::size_t>(n_ + 1));
    for (std::int32_t j = 0; j <= n_; ++j) {
      leaf_[static_cast<std::size_t>(n_ + j)] = 1;
      holder_[static_cast<std::size_t>(j)] = n_ + j;
    }
    auto node_of = [this](Slot s) { return is_leaf(s) ? n_ + leaf_number(s) : s; };
    for (NodeId v = 0; v < n_; ++v) {
      const auto l = node_of(t.left(v));
      const auto r = node_of(t.right(v));
      left_[static_cast<std::size_t>(v)] = l;
      right_[static_cast<std::size_t>(v)] = r;
      parent_[static_cast<std::size_t>(l)] = v;
      parent_[static_cast<std::size_t>(r)] = v;
    }
  }

  // True if the current leaves a and b (adjacent in leaf order) share a parent.
  bool siblings(std::int32_t a, std::int32_t b) const {
    const auto pa = parent_[static_cast<std::size_t>(holder(a))];
    return pa >= 0 && pa == parent_[static_cast<std::size_t>(holder(b))];
  }

  // Replaces the parent of a and b by a leaf that keeps a's identity.
  void collapse(std::int32_t a) {
    const auto p = parent_[static_cast<std::size_t>(holder(a))];
    leaf_[static_cast<std::size_t>(p)] = 1;
    holder_[static_cast<std::size_t>(a)] = p;
  }

  std::string encode() const {
    std::string out;
    out.reserve(static_cast<std::size_t>(2 * n_ + 1));
    std::vector<std::int32_t> stack{0};
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      if (leaf_[static_cast<std::size_t>(v)]) {
        out.push_back('0');
      } else {
        out.push_back('1');
        stack.push_back(right_[static_cast<std::size_t>(v)]);
        stack.push_back(left_[static_cast<std::size_t>(v)]);
      }
    }
    return out;
  }

 private:
  std::int32_t holder(std::int32_t leaf_id) const {
    return holder_[static_cast<std::size_t>(leaf_id)];
  }

  std::int32_t n_;
  std::vector<std::int32_t> left_, right_, parent_;
  std::vector<char> leaf_;
  // Node currently standing for each surviving leaf id.
  std::vector<std::int32_t> holder_;
};

}  // namespace

ReducedTreePair reduce_pair(const TreePair& pair) {
  require_same_size(pair);
  const auto n = static_cast<std::int32_t>(pair.first.size());
  if (n == 0) return {pair.first, pair.second, 0};

  Collapsible a(pair.first);
  Collapsible b(pair.second);
  // Surviving leaf ids form a linked list in left-to-right order.
  std::vector<std::int32_t> next(static_cast<std::size_t>(n + 1));
  std::vector<std::int32_t> prev(static_cast<std::size_t>(n + 1));
  std::vector<char> alive(static_cast<std::size_t>(n + 1), 1);
  for (std::int32_t j = 0; j <= n; ++j) {
    next[static_cast<std::size_t>(j)] = j < n ? j + 1 : -1;
    prev[static_cast<std::size_t>(j)] = j - 1;
  }

  std::vector<std::int32_t> work = common_sibling_leaf_pairs(pair);
  std::size_t removed = 0;
  while (!work.empty()) {
    const auto i = work.back();
    work.pop_back();
    if (i < 0 || !alive[static_cast<std::size_t>(i)]) continue;
    const auto j = next[static_cast<std::size_t>(i)];
    if (j < 0 || !a.siblings(i, j) || !b.siblings(i, j)) continue;
    a.collapse(i);
    b.collapse(i);
    alive[static_cast<std::size_t>(j)] = 0;
    const auto after = next[static_cast<std::size_t>(j)];
    next[static_cast<std::size_t>(i)] = after;
    if (after >= 0) prev[static_cast<std::size_t>(after)] = i;
    ++removed;
    // Only the merged leaf's parent can have gained a sibling-leaf pair.
    work.push_back(i);
    work.push_back(prev[static_cast<std::size_t>(i)]);
  }
  if (removed == 0) return {pair.first, pair.second, static_cast<std::size_t>(n)};
  return {Tree::parse(a.encode()), Tree::parse(b.encode()), static_cast<std::size_t>(n)};
}

bool is_reduced(const TreePair& pair) { return common_sibling_leaf_pairs(pair).empty(); }

}  // namespace rrd
