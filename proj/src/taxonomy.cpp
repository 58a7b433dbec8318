#include "taxjoin/taxonomy.hpp"

#include <algorithm>
#include <bit>
#include <deque>

namespace taxjoin {

const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::empty_input: return "empty_input";
    case errc::multiple_roots: return "multiple_roots";
    case errc::cycle_detected: return "cycle_detected";
    case errc::duplicate_child: return "duplicate_child";
    case errc::invalid_node_id: return "invalid_node_id";
    case errc::empty_matrix: return "empty_matrix";
    case errc::empty_set: return "empty_set";
    case errc::set_too_large: return "set_too_large";
    case errc::tau_exceeds_set_size: return "tau_exceeds_set_size";
    case errc::instance_too_large: return "instance_too_large";
    case errc::insufficient_iterations: return "insufficient_iterations";
    case errc::parse_error: return "parse_error";
    case errc::invalid_config: return "invalid_config";
  }
  return "unknown";
}

namespace {
constexpr NodeId kNoParent = static_cast<NodeId>(-1);
}

Taxonomy Taxonomy::from_edges(
    const std::vector<std::pair<std::string, std::string>>& edges) {
  if (edges.empty()) fail(errc::empty_input, "taxonomy edge list is empty");

  Taxonomy tax;
  auto intern = [&tax](const std::string& name) -> NodeId {
    if (name.empty()) fail(errc::parse_error, "empty node label");
    auto [it, inserted] =
        tax.by_label_.try_emplace(name, static_cast<NodeId>(tax.label_.size()));
    if (inserted) tax.label_.push_back(name);
    return it->second;
  };

  std::vector<NodeId> parent_of;
  for (const auto& [child, parent] : edges) {
    NodeId c = intern(child);
    NodeId p = intern(parent);
    parent_of.resize(tax.label_.size(), kNoParent);
    if (parent_of[c] != kNoParent && parent_of[c] != p) {
      fail(errc::duplicate_child,
           "node '" + child + "' is listed under two different parents");
    }
    if (c == p) fail(errc::cycle_detected, "node '" + child + "' is its own parent");
    parent_of[c] = p;
  }
  parent_of.resize(tax.label_.size(), kNoParent);

  const std::size_t n = tax.label_.size();
  std::vector<NodeId> roots;
  for (NodeId u = 0; u < n; ++u) {
    if (parent_of[u] == kNoParent) roots.push_back(u);
  }
  if (roots.empty()) {
    fail(errc::cycle_detected, "every node has a parent; the edges contain a cycle");
  }
  if (roots.size() > 1) {
    std::string msg = "multiple parentless nodes:";
    for (NodeId r : roots) msg += " '" + tax.label_[r] + "'";
    fail(errc::multiple_roots, msg);
  }
  tax.root_ = roots.front();

  std::vector<std::vector<NodeId>> children(n);
  for (NodeId u = 0; u < n; ++u) {
    if (u != tax.root_) children[parent_of[u]].push_back(u);
  }

  tax.parent_ = std::move(parent_of);
  tax.parent_[tax.root_] = tax.root_;
  tax.depth_.assign(n, 0);
  tax.depth_[tax.root_] = 1;

  std::deque<NodeId> queue{tax.root_};
  std::size_t visited = 0;
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    ++visited;
    for (NodeId v : children[u]) {
      tax.depth_[v] = tax.depth_[u] + 1;
      queue.push_back(v);
    }
  }
  if (visited != n) {
    fail(errc::cycle_detected,
         "some nodes are not reachable from the root; the edges contain a cycle");
  }

  tax.build_lca_index(children);
  return tax;
}

void Taxonomy::build_lca_index(const std::vector<std::vector<NodeId>>& children) {
  const std::size_t n = parent_.size();
  euler_.reserve(2 * n - 1);
  first_.assign(n, 0);

  // Iterative Euler tour; deep chains must not overflow the call stack.
  struct Frame {
    NodeId node;
    std::size_t next_child;
  };
  std::vector<Frame> stack;
  stack.push_back({root_, 0});
  first_[root_] = 0;
  euler_.push_back(root_);
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next_child < children[f.node].size()) {
      NodeId c = children[f.node][f.next_child++];
      first_[c] = static_cast<std::uint32_t>(euler_.size());
      euler_.push_back(c);
      stack.push_back({c, 0});
    } else {
      stack.pop_back();
      if (!stack.empty()) euler_.push_back(stack.back().node);
    }
  }

  const std::size_t m = euler_.size();
  log2_.assign(m + 1, 0);
  for (std::size_t i = 2; i <= m; ++i) log2_[i] = log2_[i / 2] + 1;

  const std::uint32_t levels = log2_[m] + 1;
  rmq_.assign(levels, std::vector<std::uint32_t>(m));
  for (std::size_t i = 0; i < m; ++i) rmq_[0][i] = static_cast<std::uint32_t>(i);
  for (std::uint32_t k = 1; k < levels; ++k) {
    const std::size_t span = std::size_t{1} << k;
    for (std::size_t i = 0; i + span <= m; ++i) {
      std::uint32_t a = rmq_[k - 1][i];
      std::uint32_t b = rmq_[k - 1][i + span / 2];
      rmq_[k][i] = depth_[euler_[a]] <= depth_[euler_[b]] ? a : b;
    }
  }
}

void Taxonomy::check(NodeId u) const {
  if (u >= parent_.size()) {
    fail(errc::invalid_node_id, "node id " + std::to_string(u) + " out of range");
  }
}

NodeId Taxonomy::parent(NodeId u) const {
  check(u);
  return parent_[u];
}

std::uint32_t Taxonomy::depth(NodeId u) const {
  check(u);
  return depth_[u];
}

const std::string& Taxonomy::label(NodeId u) const {
  check(u);
  return label_[u];
}

std::optional<NodeId> Taxonomy::find(std::string_view label) const {
  auto it = by_label_.find(std::string(label));
  if (it == by_label_.end()) return std::nullopt;
  return it->second;
}

NodeId Taxonomy::lca(NodeId u, NodeId v) const {
  check(u);
  check(v);
  std::uint32_t l = first_[u], r = first_[v];
  if (l > r) std::swap(l, r);
  const std::uint32_t k = log2_[r - l + 1];
  const std::uint32_t a = rmq_[k][l];
  const std::uint32_t b = rmq_[k][r - (std::uint32_t{1} << k) + 1];
  return depth_[euler_[a]] <= depth_[euler_[b]] ? euler_[a] : euler_[b];
}

std::vector<NodeId> Taxonomy::ancestors_at_or_deeper(NodeId u, double min_depth) const {
  check(u);
  std::vector<NodeId> out;
  NodeId cur = u;
  while (static_cast<double>(depth_[cur]) >= min_depth) {
    out.push_back(cur);
    if (cur == root_) break;
    cur = parent_[cur];
  }
  return out;
}

}  // namespace taxjoin
