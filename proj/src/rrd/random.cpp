#include "rrd/random.hpp"

#include <string>
#include <vector>

namespace rrd {

namespace {
__extension__ typedef unsigned __int128 u128;
}  // namespace

std::uint64_t SplitMix64::below(std::uint64_t bound) noexcept {
  if (bound <= 1) return 0;
  u128 m = static_cast<u128>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>((*this)()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

Tree sample_tree(std::size_t n, const Seed& seed) {
  if (n == 0) return Tree{};
  SplitMix64 gen(seed);

  // Nodes are numbered in creation order; node 0 is the initial leaf.
  const std::size_t total = 2 * n + 1;
  constexpr std::int32_t kNone = -1;
  std::vector<std::int32_t> left(total, kNone);
  std::vector<std::int32_t> right(total, kNone);
  std::vector<std::int32_t> parent(total, kNone);
  std::int32_t root = 0;

  for (std::size_t k = 0; k < n; ++k) {
    // One draw picks both the node (among 2k+1) and the side for the new leaf.
    const std::uint64_t r = gen.below(4 * k + 2);
    const auto x = static_cast<std::int32_t>(r >> 1);
    const bool leaf_on_right = (r & 1) != 0;
    const auto inner = static_cast<std::int32_t>(2 * k + 1);
    const auto leaf = static_cast<std::int32_t>(2 * k + 2);

    const std::int32_t p = parent[static_cast<std::size_t>(x)];
    if (p == kNone) {
      root = inner;
    } else if (left[static_cast<std::size_t>(p)] == x) {
      left[static_cast<std::size_t>(p)] = inner;
    } else {
      right[static_cast<std::size_t>(p)] = inner;
    }
    parent[static_cast<std::size_t>(inner)] = p;
    left[static_cast<std::size_t>(inner)] = leaf_on_right ? x : leaf;
    right[static_cast<std::size_t>(inner)] = leaf_on_right ? leaf : x;
    parent[static_cast<std::size_t>(x)] = inner;
    parent[static_cast<std::size_t>(leaf)] = inner;
  }

  std::string enc;
  enc.reserve(total);
  std::vector<std::int32_t> stack{root};
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    if (left[static_cast<std::size_t>(v)] == kNone) {
      enc.push_back('0');
    } else {
      enc.push_back('1');
      stack.push_back(right[static_cast<std::size_t>(v)]);
      stack.push_back(left[static_cast<std::size_t>(v)]);
    }
  }
  return Tree::parse(enc);
}

TreePair sample_pair(std::size_t n, const Seed& seed) {
  return {sample_tree(n, derive_seed(seed, 0)), sample_tree(n, derive_seed(seed, 1))};
}

}  // namespace rrd
