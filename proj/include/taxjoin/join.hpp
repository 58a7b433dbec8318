#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "taxjoin/similarity.hpp"
#include "taxjoin/taxonomy.hpp"

namespace taxjoin {

/// How distinct similar node pairs are counted during filtering.
/// greedy: each node is consumed by the first co-occurrence that reaches it.
/// exact: a maximum bipartite matching over the collected evidence edges;
/// this restores the filter guarantee and is the default.
enum class CountMode { greedy, exact };

const char* count_mode_name(CountMode mode) noexcept;

struct JoinParams {
  double theta = 0.8;
  int tau = 1;
  CountMode count_mode = CountMode::exact;
  int threads = 1;
  bool quiet = false;  // suppress advisory warnings on stderr
};

/// Node-level similarity cutoff for indexing a set of the given size:
/// (theta * n - tau + 1) / (n - tau + 1), clamped below at 0.
double phi_threshold(double theta, std::size_t set_size, int tau);

struct Posting {
  std::uint32_t set;  // index into the collection
  NodeId node;        // the member node that produced this ancestor
};

/// Per-collection ancestor index. A set contributes postings only when it
/// has at least tau nodes; each of its nodes posts every ancestor-or-self
/// whose depth reaches phi * depth(node).
struct InvertedIndex {
  std::unordered_map<NodeId, std::vector<Posting>> postings;
  std::vector<double> phi;  // per set; -1 when the set is skipped
  std::uint64_t posting_count = 0;
};

InvertedIndex build_index(const Taxonomy& tax, std::span<const Record> collection,
                          const JoinParams& params);

/// Distinctness bookkeeping for one (S, T) pair during filtering.
struct CandidateTally {
  std::vector<std::pair<NodeId, NodeId>> edges;  // de-duplicated, discovery order
  std::vector<NodeId> used_s, used_t;            // greedy bookkeeping
  std::uint32_t greedy_count = 0;

  /// Registers one co-occurrence event. Greedy mode counts it only when
  /// both nodes are fresh and then marks them used; exact mode records the
  /// evidence edge (one edge per node pair). Returns whether the event was
  /// counted (greedy) or the edge was new (exact).
  bool count_occurrence(NodeId s, NodeId t, CountMode mode);

  /// Occurrence count under the given mode: greedy replay of the evidence
  /// edges in discovery order, or the maximum bipartite matching size.
  std::uint32_t occurrences(CountMode mode) const;
};

/// Maximum bipartite matching size of a small edge list.
std::uint32_t max_bipartite_matching(std::span<const std::pair<NodeId, NodeId>> edges);

struct JoinStats {
  std::uint64_t f_tau = 0;           // posting cross-product events examined
  std::uint64_t distinct_pairs = 0;  // distinct (S,T) pairs tallied
  std::uint64_t v_tau = 0;           // candidates verified
  std::uint64_t result_count = 0;
  std::uint64_t postings_s = 0;
  std::uint64_t postings_t = 0;
  // Work counters behind the verification stage, used by the tuner's
  // deterministic cost basis.
  std::uint64_t verify_cells = 0;  // weight-matrix cells filled
  std::uint64_t verify_cubes = 0;  // assignment steps, max(|S|,|T|)^3
  double time_index_ms = 0;
  double time_filter_ms = 0;
  double time_verify_ms = 0;
};

struct MatchPair {
  std::uint32_t s_index = 0, t_index = 0;
  double gts = 0.0;
};

struct JoinResult {
  std::vector<MatchPair> pairs;  // sorted by (s record id, t record id)
  JoinStats stats;
};

/// Filter-and-verify join: all cross-collection pairs with gts >= theta.
/// Results are identical for any thread count.
JoinResult overlap_join(const Taxonomy& tax, std::span<const Record> s_coll,
                        std::span<const Record> t_coll, const JoinParams& params);

/// All-pairs reference join; guarded against large inputs.
JoinResult naive_join(const Taxonomy& tax, std::span<const Record> s_coll,
                      std::span<const Record> t_coll, double theta, int threads = 1);

}  // namespace taxjoin
