#pragma once

#include <string>
#include <utility>
#include <vector>

#include "taxjoin/rng.hpp"
#include "taxjoin/similarity.hpp"
#include "taxjoin/taxonomy.hpp"

namespace taxjoin::test {

/// The worked-example toy taxonomy: two city nodes, two drink nodes and
/// two venue nodes hanging off separate depth-2 branches.
///
///   root -> location -> Turin -> streets of Turin -> Via Nizza
///   root -> establishment -> public house -> {coffeehouse, bar}
///   root -> food and drink -> beverage -> coffee -> {latte, espresso}
inline std::vector<std::pair<std::string, std::string>> toy_edges() {
  return {
      {"location", "root"},
      {"Turin", "location"},
      {"streets of Turin", "Turin"},
      {"Via Nizza", "streets of Turin"},
      {"establishment", "root"},
      {"public house", "establishment"},
      {"coffeehouse", "public house"},
      {"bar", "public house"},
      {"food and drink", "root"},
      {"beverage", "food and drink"},
      {"coffee", "beverage"},
      {"latte", "coffee"},
      {"espresso", "coffee"},
  };
}

inline Taxonomy toy_taxonomy() { return Taxonomy::from_edges(toy_edges()); }

inline Record toy_record(const Taxonomy& tax, std::string id,
                         const std::vector<std::string>& labels) {
  Record rec;
  rec.id = std::move(id);
  for (const auto& label : labels) rec.nodes.push_back(*tax.find(label));
  return rec;
}

/// Random tree over n nodes: node i attaches to a uniform node below it.
/// Includes chains and stars; labels are v0..v{n-1} with v0 the root.
inline std::vector<std::pair<std::string, std::string>> random_tree_edges(
    SplitMix64& rng, std::size_t n) {
  std::vector<std::pair<std::string, std::string>> edges;
  edges.reserve(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t parent = rng.below(i);
    edges.emplace_back("v" + std::to_string(i), "v" + std::to_string(parent));
  }
  return edges;
}

/// Parent-climbing reference for the sparse-table index.
inline NodeId naive_lca(const Taxonomy& tax, NodeId u, NodeId v) {
  while (tax.depth(u) > tax.depth(v)) u = tax.parent(u);
  while (tax.depth(v) > tax.depth(u)) v = tax.parent(v);
  while (u != v) {
    u = tax.parent(u);
    v = tax.parent(v);
  }
  return u;
}

/// Exhaustive assignment maximum over all column permutations of the
/// zero-padded square matrix. Independent of the potentials-based solver.
double permutation_assignment_max(const WeightMatrix& wm);

/// Uniform random record over the taxonomy (no locality bias).
inline Record random_record(SplitMix64& rng, const Taxonomy& tax, std::string id,
                            std::size_t set_min, std::size_t set_max) {
  Record rec;
  rec.id = std::move(id);
  const std::size_t want = set_min + rng.below(set_max - set_min + 1);
  while (rec.nodes.size() < want) {
    const NodeId pick = static_cast<NodeId>(rng.below(tax.node_count()));
    if (std::find(rec.nodes.begin(), rec.nodes.end(), pick) == rec.nodes.end()) {
      rec.nodes.push_back(pick);
    }
  }
  std::sort(rec.nodes.begin(), rec.nodes.end());
  return rec;
}

}  // namespace taxjoin::test
