#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace rrd {

// Internal nodes are identified by their preorder rank among internal nodes.
using NodeId = std::int32_t;

// A child slot holds either an internal NodeId (>= 0) or a leaf, stored as
// the bitwise complement of its left-to-right leaf number.
using Slot = std::int32_t;

constexpr bool is_leaf(Slot s) noexcept { return s < 0; }
constexpr std::int32_t leaf_number(Slot s) noexcept { return ~s; }
constexpr Slot leaf_slot(std::int32_t leaf) noexcept { return ~leaf; }

// Root-path address: '0' steps to the left child, '1' to the right child.
struct Address {
  std::string bits;

  bool operator==(const Address&) const = default;
};

enum class NodeCategory { kLeft, kRight, kInterior };

struct NodeRef {
  Address address;
  std::size_t inorder_index = 0;

  bool operator==(const NodeRef&) const = default;
};

/// Rooted ordered full binary tree.
///
/// The representation is canonical: internal nodes are stored in preorder,
/// so two trees are structurally equal iff their encodings are equal. Leaves
/// are numbered implicitly from 0 to size() in left-to-right order.
class Tree {
 public:
  /// The empty tree (a single leaf).
  Tree();

  /// Parses a preorder encoding ('1' internal node, '0' leaf). Throws
  /// ParseError naming the earliest offending position.
  static Tree parse(std::string_view encoding);

  static Tree join(const Tree& left, const Tree& right);

  std::size_t size() const noexcept { return left_.size(); }
  bool empty() const noexcept { return left_.empty(); }
  const std::string& encoding() const noexcept { return encoding_; }

  /// Slot of the root: a leaf for the empty tree, otherwise node 0.
  Slot root() const noexcept { return empty() ? leaf_slot(0) : 0; }
  Slot left(NodeId n) const { return left_[static_cast<std::size_t>(n)]; }
  Slot right(NodeId n) const { return right_[static_cast<std::size_t>(n)]; }

  /// Parent of each internal node (-1 for the root), indexed by NodeId.
  std::vector<NodeId> parents() const;

  /// In-order position of each internal node, indexed by NodeId.
  std::vector<std::size_t> inorder_ranks() const;

  /// Internal nodes in in-order.
  std::vector<NodeId> inorder_sequence() const;

  /// Left/right/interior category of each internal node, indexed by NodeId.
  std::vector<NodeCategory> categories() const;

  /// Leaf numbers i such that some internal node has exactly the leaves i
  /// and i+1 as its children, ascending.
  std::vector<std::int32_t> sibling_leaf_pairs() const;

  NodeId resolve(const Address& address) const;
  Address address_of(NodeId node) const;

  friend bool operator==(const Tree& a, const Tree& b) {
    return a.encoding_ == b.encoding_;
  }
  friend std::strong_ordering operator<=>(const Tree& a, const Tree& b) {
    return a.encoding_ <=> b.encoding_;
  }

 private:
  // Builds from an encoding already known to be valid.
  static Tree from_valid(std::string encoding);

  std::string encoding_;
  std::vector<Slot> left_;
  std::vector<Slot> right_;
};

/// Serialized preorder encoding; parse(serialize(t)) == t.
inline const std::string& serialize(const Tree& t) { return t.encoding(); }

inline Tree parse_encoding(std::string_view text) { return Tree::parse(text); }

/// All internal nodes in in-order with their addresses. Addresses are as
/// long as the node depth, so this is intended for small trees.
std::vector<NodeRef> inorder_internal_nodes(const Tree& t);

NodeCategory node_category(const Tree& t, const NodeRef& node);

std::string_view category_name(NodeCategory c);

/// Two trees of the same size. Construction does not check sizes; every
/// operation taking a pair does.
struct TreePair {
  Tree first;
  Tree second;

  bool operator==(const TreePair&) const = default;
};

/// Leaf numbers i for which leaves i and i+1 are siblings in both trees.
/// Throws kSizeMismatch for trees of different sizes.
std::vector<std::int32_t> common_sibling_leaf_pairs(const TreePair& pair);

void require_same_size(const TreePair& pair);

}  // namespace rrd

template <>
struct std::hash<rrd::Tree> {
  std::size_t operator()(const rrd::Tree& t) const noexcept {
    return std::hash<std::string>{}(t.encoding());
  }
};
