#include "rrd/tree.hpp"

#include <algorithm>
#include <iterator>

#include "rrd/error.hpp"

namespace rrd {

namespace {

std::string describe(char c) {
  if (c >= 0x20 && c < 0x7f) return std::string("'") + c + "'";
  return "byte " + std::to_string(static_cast<unsigned char>(c));
}

}  // namespace

Tree::Tree() : encoding_("0") {}

Tree Tree::parse(std::string_view encoding) {
  if (encoding.empty()) throw ParseError(0, "empty encoding");
  // `open` counts leaves still owed by the prefix read so far. It starts at
  // one (the root) and the encoding ends exactly when it reaches zero.
  std::size_t open = 1;
  for (std::size_t i = 0; i < encoding.size(); ++i) {
    const char c = encoding[i];
    if (c != '0' && c != '1') {
      throw ParseError(i, "invalid character " + describe(c) +
                              " at position " + std::to_string(i));
    }
    if (open == 0) {
      throw ParseError(i, "trailing characters after complete tree at position " +
                              std::to_string(i));
    }
    if (c == '1') {
      ++open;
    } else {
      --open;
    }
  }
  if (open != 0) {
    throw ParseError(encoding.size(),
                     "incomplete encoding: " + std::to_string(open) +
                         " more leaf symbol(s) expected at position " +
                         std::to_string(encoding.size()));
  }
  return from_valid(std::string(encoding));
}

Tree Tree::from_valid(std::string encoding) {
  Tree t;
  t.encoding_ = std::move(encoding);
  const std::size_t n = (t.encoding_.size() - 1) / 2;
  t.left_.assign(n, 0);
  t.right_.assign(n, 0);
  if (n == 0) return t;

  // Internal nodes still waiting for a child.
  struct Pending {
    NodeId node;
    bool left_filled;
  };
  std::vector<Pending> stack;
  stack.reserve(n);
  NodeId next_node = 0;
  std::int32_t next_leaf = 0;
  auto attach = [&](Slot child) {
    Pending& top = stack.back();
    if (!top.left_filled) {
      t.left_[static_cast<std::size_t>(top.node)] = child;
      top.left_filled = true;
    } else {
      t.right_[static_cast<std::size_t>(top.node)] = child;
      stack.pop_back();
    }
  };
  for (const char c : t.encoding_) {
    if (c == '1') {
      const NodeId id = next_node++;
      if (!stack.empty()) attach(id);
      stack.push_back({id, false});
    } else {
      attach(leaf_slot(next_leaf++));
    }
  }
  return t;
}

Tree Tree::join(const Tree& left, const Tree& right) {
  std::string enc;
  enc.reserve(left.encoding_.size() + right.encoding_.size() + 1);
  enc.push_back('1');
  enc += left.encoding_;
  enc += right.encoding_;
  return from_valid(std::move(enc));
}

std::vector<NodeId> Tree::parents() const {
  std::vector<NodeId> parent(size(), -1);
  for (NodeId n = 0; n < static_cast<NodeId>(size()); ++n) {
    if (!is_leaf(left(n))) parent[static_cast<std::size_t>(left(n))] = n;
    if (!is_leaf(right(n))) parent[static_cast<std::size_t>(right(n))] = n;
  }
  return parent;
}

std::vector<NodeId> Tree::inorder_sequence() const {
  std::vector<NodeId> order;
  order.reserve(size());
  std::vector<NodeId> stack;
  Slot cur = root();
  while (!is_leaf(cur) || !stack.empty()) {
    while (!is_leaf(cur)) {
      stack.push_back(cur);
      cur = left(cur);
    }
    const NodeId n = stack.back();
    stack.pop_back();
    order.push_back(n);
    cur = right(n);
  }
  return order;
}

std::vector<std::size_t> Tree::inorder_ranks() const {
  std::vector<std::size_t> rank(size());
  const auto order = inorder_sequence();
  for (std::size_t k = 0; k < order.size(); ++k) {
    rank[static_cast<std::size_t>(order[k])] = k;
  }
  return rank;
}

std::vector<NodeCategory> Tree::categories() const {
  std::vector<NodeCategory> cat(size(), NodeCategory::kInterior);
  if (empty()) return cat;
  cat[0] = NodeCategory::kLeft;
  // Parents precede children in preorder, so one forward pass suffices.
  for (NodeId n = 0; n < static_cast<NodeId>(size()); ++n) {
    const NodeCategory c = cat[static_cast<std::size_t>(n)];
    if (const Slot l = left(n); !is_leaf(l)) {
      cat[static_cast<std::size_t>(l)] =
          c == NodeCategory::kLeft ? NodeCategory::kLeft : NodeCategory::kInterior;
    }
    if (const Slot r = right(n); !is_leaf(r)) {
      const bool right_arm = (n == 0) || c == NodeCategory::kRight;
      cat[static_cast<std::size_t>(r)] =
          right_arm ? NodeCategory::kRight : NodeCategory::kInterior;
    }
  }
  return cat;
}

std::vector<std::int32_t> Tree::sibling_leaf_pairs() const {
  std::vector<std::int32_t> out;
  for (NodeId n = 0; n < static_cast<NodeId>(size()); ++n) {
    if (is_leaf(left(n)) && is_leaf(right(n))) out.push_back(leaf_number(left(n)));
  }
  // Preorder visits leaves left to right, so `out` is already ascending.
  return out;
}

NodeId Tree::resolve(const Address& address) const {
  Slot cur = root();
  for (std::size_t i = 0; i < address.bits.size(); ++i) {
    const char b = address.bits[i];
    if (b != '0' && b != '1') {
      throw Error(ErrorCode::kBadAddress,
                  "address '" + address.bits + "' has invalid character at position " +
                      std::to_string(i));
    }
    if (is_leaf(cur)) break;
    cur = b == '0' ? left(cur) : right(cur);
  }
  if (is_leaf(cur)) {
    throw Error(ErrorCode::kBadAddress,
                "address '" + address.bits + "' does not name an internal node");
  }
  return cur;
}

Address Tree::address_of(NodeId node) const {
  if (node < 0 || static_cast<std::size_t>(node) >= size()) {
    throw Error(ErrorCode::kBadAddress, "node id out of range");
  }
  const auto parent = parents();
  std::string bits;
  for (NodeId cur = node; parent[static_cast<std::size_t>(cur)] >= 0;
       cur = parent[static_cast<std::size_t>(cur)]) {
    const NodeId p = parent[static_cast<std::size_t>(cur)];
    bits.push_back(left(p) == cur ? '0' : '1');
  }
  std::reverse(bits.begin(), bits.end());
  return Address{std::move(bits)};
}

std::vector<NodeRef> inorder_internal_nodes(const Tree& t) {
  std::vector<NodeRef> out;
  out.reserve(t.size());
  // Addresses are produced by a single DFS rather than per-node parent walks.
  std::vector<std::string> address(t.size());
  for (NodeId n = 0; n < static_cast<NodeId>(t.size()); ++n) {
    const auto& a = address[static_cast<std::size_t>(n)];
    if (!is_leaf(t.left(n))) address[static_cast<std::size_t>(t.left(n))] = a + '0';
    if (!is_leaf(t.right(n))) address[static_cast<std::size_t>(t.right(n))] = a + '1';
  }
  const auto order = t.inorder_sequence();
  for (std::size_t k = 0; k < order.size(); ++k) {
    out.push_back(NodeRef{Address{address[static_cast<std::size_t>(order[k])]}, k});
  }
  return out;
}

NodeCategory node_category(const Tree& t, const NodeRef& node) {
  t.resolve(node.address);
  const auto& bits = node.address.bits;
  if (std::all_of(bits.begin(), bits.end(), [](char b) { return b == '0'; })) {
    return NodeCategory::kLeft;
  }
  if (std::all_of(bits.begin(), bits.end(), [](char b) { return b == '1'; })) {
    return NodeCategory::kRight;
  }
  return NodeCategory::kInterior;
}

std::string_view category_name(NodeCategory c) {
  switch (c) {
    case NodeCategory::kLeft: return "left";
    case NodeCategory::kRight: return "right";
    case NodeCategory::kInterior: return "interior";
  }
  return "?";
}

void require_same_size(const TreePair& pair) {
  if (pair.first.size() != pair.second.size()) {
    throw Error(ErrorCode::kSizeMismatch,
                "tree sizes differ: " + std::to_string(pair.first.size()) + " vs " +
                    std::to_string(pair.second.size()));
  }
}

std::vector<std::int32_t> common_sibling_leaf_pairs(const TreePair& pair) {
  require_same_size(pair);
  const auto a = pair.first.sibling_leaf_pairs();
  const auto b = pair.second.sibling_leaf_pairs();
  std::vector<std::int32_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace rrd
