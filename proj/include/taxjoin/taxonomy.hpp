#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "taxjoin/error.hpp"

namespace taxjoin {

/// Dense node identifier; labels are remapped to [0, node_count) at load.
using NodeId = std::uint32_t;

/// Rooted concept tree with O(1) lowest-common-ancestor queries.
///
/// Depths are 1-based: the root has depth 1 and each child is one deeper
/// than its parent. A node counts as its own ancestor. Instances are
/// immutable after construction and safe to query from any thread.
class Taxonomy {
 public:
  /// Builds a taxonomy from (child-label, parent-label) edges.
  ///
  /// Exactly one label must never appear on the child side; it becomes the
  /// root. Repeating an identical edge is tolerated; listing a child under
  /// two different parents is not.
  static Taxonomy from_edges(
      const std::vector<std::pair<std::string, std::string>>& edges);

  std::size_t node_count() const noexcept { return parent_.size(); }
  NodeId root() const noexcept { return root_; }

  NodeId parent(NodeId u) const;        // the root is its own parent
  std::uint32_t depth(NodeId u) const;  // root depth = 1
  const std::string& label(NodeId u) const;
  std::optional<NodeId> find(std::string_view label) const;

  /// Deepest node that is an ancestor-or-self of both u and v.
  NodeId lca(NodeId u, NodeId v) const;

  /// Ancestors-or-self of u with depth >= min_depth, deepest first.
  /// min_depth is real-valued; no rounding is applied.
  std::vector<NodeId> ancestors_at_or_deeper(NodeId u, double min_depth) const;

 private:
  Taxonomy() = default;
  void check(NodeId u) const;
  void build_lca_index(const std::vector<std::vector<NodeId>>& children);

  std::vector<NodeId> parent_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::string> label_;
  std::unordered_map<std::string, NodeId> by_label_;
  NodeId root_ = 0;

  // Euler tour + sparse table over tour depths (range minimum).
  std::vector<NodeId> euler_;
  std::vector<std::uint32_t> first_;
  std::vector<std::uint32_t> log2_;
  std::vector<std::vector<std::uint32_t>> rmq_;  // positions into euler_
};

}  // namespace taxjoin
