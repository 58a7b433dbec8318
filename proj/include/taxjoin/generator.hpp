#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "taxjoin/similarity.hpp"
#include "taxjoin/taxonomy.hpp"

namespace taxjoin {

/// Synthetic taxonomy shape: roughly `fanout` children per internal node
/// and height approximately `depth` (exact when enough nodes are given).
struct TaxonomyGenParams {
  int nodes = 1000;
  int fanout = 4;
  int depth = 8;
  std::uint64_t seed = 1;
};

std::vector<std::pair<std::string, std::string>> generate_taxonomy_edges(
    const TaxonomyGenParams& params);

/// Synthetic records with subtree locality.
///
/// Background records mix a couple of small communities (subtrees around
/// random anchors) with uniform noise, so unrelated records collide on a
/// few similar nodes at most. A `dup_rate` fraction of records are noisy
/// copies of records from a shared template pool; copies of the same
/// template are the high-similarity pairs a join at moderate thresholds
/// should return. Collections built with the same `template_seed` (and
/// equal record counts, or an explicit `templates`) share the pool.
struct RecordGenParams {
  int records = 1000;
  int set_min = 2;
  int set_max = 8;
  double locality = 0.85;   // community draw probability for background nodes
  double dup_rate = 0.25;   // fraction of records cloned from templates
  double mutation = 0.15;   // per-node chance a clone swaps in a sibling/cousin
  int templates = 0;        // 0: derived from records * dup_rate
  int anchor_min_depth = 3; // deeper anchors give smaller, sparser communities
  int community_depth = 0;  // 0: two levels above the anchor; else a fixed depth
  // Topic sharding: with buckets > 0 only communities hashing into
  // `community_bucket` are used, so corpora built from several buckets keep
  // a size-independent collision density (batches cover disjoint topics).
  int community_buckets = 0;
  int community_bucket = 0;
  // Popularity hubs: with hub_count > 0, a shared pool of deep nodes is
  // drawn from the template seed and each background record contains one
  // hub with probability hub_rate. Hubs mimic popular concepts that many
  // otherwise-unrelated records mention.
  int hub_count = 0;
  double hub_rate = 0.0;
  std::uint64_t seed = 1;
  std::uint64_t template_seed = 1;
  std::string id_prefix = "r";
};

std::vector<Record> generate_records(const Taxonomy& tax, const RecordGenParams& params);

}  // namespace taxjoin
