#include "taxjoin/join.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <tuple>

#include "taxjoin/parallel.hpp"

namespace taxjoin {

namespace {

// Guards real-valued cutoffs against floating-point round-off. Being a hair
// permissive only admits extra work, never loses a genuine pair.
constexpr double kCutoffEps = 1e-9;

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void validate(const JoinParams& params) {
  if (!(params.theta > 0.0) || params.theta > 1.0) {
    fail(errc::invalid_config, "theta must be in (0, 1]");
  }
  if (params.tau < 1) fail(errc::invalid_config, "tau must be >= 1");
  if (params.threads < 1) fail(errc::invalid_config, "threads must be >= 1");
}

void warn_if_tau_exceeds_median(std::span<const Record> s_coll,
                                std::span<const Record> t_coll, int tau) {
  std::vector<std::uint32_t> sizes;
  sizes.reserve(s_coll.size() + t_coll.size());
  for (const Record& r : s_coll) sizes.push_back(static_cast<std::uint32_t>(r.nodes.size()));
  for (const Record& r : t_coll) sizes.push_back(static_cast<std::uint32_t>(r.nodes.size()));
  auto mid = sizes.begin() + sizes.size() / 2;
  std::nth_element(sizes.begin(), mid, sizes.end());
  if (static_cast<std::uint32_t>(tau) > *mid) {
    std::cerr << "warning: tau=" << tau << " exceeds the median set size (" << *mid
              << "); records smaller than tau can never be reported\n";
  }
}

std::uint64_t pair_key(std::uint32_t s, std::uint32_t t) {
  return (static_cast<std::uint64_t>(s) << 32) | t;
}

}  // namespace

const char* count_mode_name(CountMode mode) noexcept {
  return mode == CountMode::greedy ? "greedy" : "exact";
}

double phi_threshold(double theta, std::size_t set_size, int tau) {
  if (!(theta > 0.0) || theta > 1.0) {
    fail(errc::invalid_config, "theta must be in (0, 1]");
  }
  if (tau < 1) fail(errc::invalid_config, "tau must be >= 1");
  if (static_cast<std::size_t>(tau) > set_size) {
    fail(errc::tau_exceeds_set_size,
         "tau=" + std::to_string(tau) + " exceeds set size " + std::to_string(set_size));
  }
  const double n = static_cast<double>(set_size);
  const double phi = (theta * n - tau + 1.0) / (n - tau + 1.0);
  return std::max(0.0, phi);
}

InvertedIndex build_index(const Taxonomy& tax, std::span<const Record> collection,
                          const JoinParams& params) {
  validate(params);
  if (collection.empty()) fail(errc::empty_input, "collection is empty");

  InvertedIndex index;
  index.phi.assign(collection.size(), -1.0);
  for (std::uint32_t i = 0; i < collection.size(); ++i) {
    const Record& rec = collection[i];
    if (rec.nodes.size() < static_cast<std::size_t>(params.tau)) continue;
    const double phi = phi_threshold(params.theta, rec.nodes.size(), params.tau);
    index.phi[i] = phi;
    for (NodeId node : rec.nodes) {
      const double cutoff = phi * static_cast<double>(tax.depth(node)) - kCutoffEps;
      NodeId cur = node;
      while (static_cast<double>(tax.depth(cur)) >= cutoff) {
        index.postings[cur].push_back(Posting{i, node});
        ++index.posting_count;
        if (cur == tax.root()) break;
        cur = tax.parent(cur);
      }
    }
  }
  return index;
}

bool CandidateTally::count_occurrence(NodeId s, NodeId t, CountMode mode) {
  if (mode == CountMode::greedy) {
    if (std::find(used_s.begin(), used_s.end(), s) != used_s.end()) return false;
    if (std::find(used_t.begin(), used_t.end(), t) != used_t.end()) return false;
    used_s.push_back(s);
    used_t.push_back(t);
    ++greedy_count;
    return true;
  }
  const auto edge = std::pair(s, t);
  if (std::find(edges.begin(), edges.end(), edge) != edges.end()) return false;
  edges.push_back(edge);
  return true;
}

std::uint32_t CandidateTally::occurrences(CountMode mode) const {
  if (mode == CountMode::exact) return max_bipartite_matching(edges);
  CandidateTally replay;
  for (const auto& [s, t] : edges) replay.count_occurrence(s, t, CountMode::greedy);
  return replay.greedy_count;
}

std::uint32_t max_bipartite_matching(std::span<const std::pair<NodeId, NodeId>> edges) {
  if (edges.empty()) return 0;

  std::unordered_map<NodeId, int> left, right;
  std::vector<std::vector<int>> adj;
  for (const auto& [s, t] : edges) {
    auto [ls, s_new] = left.try_emplace(s, static_cast<int>(left.size()));
    if (s_new) adj.emplace_back();
    auto [rt, t_new] = right.try_emplace(t, static_cast<int>(right.size()));
    (void)t_new;
    adj[ls->second].push_back(rt->second);
  }

  std::vector<int> match_r(right.size(), -1);
  std::vector<char> seen;
  auto augment = [&](auto&& self, int u) -> bool {
    for (int v : adj[u]) {
      if (seen[v]) continue;
      seen[v] = 1;
      if (match_r[v] < 0 || self(self, match_r[v])) {
        match_r[v] = u;
        return true;
      }
    }
    return false;
  };

  std::uint32_t size = 0;
  for (int u = 0; u < static_cast<int>(adj.size()); ++u) {
    seen.assign(right.size(), 0);
    if (augment(augment, u)) ++size;
  }
  return size;
}

JoinResult overlap_join(const Taxonomy& tax, std::span<const Record> s_coll,
                        std::span<const Record> t_coll, const JoinParams& params) {
  validate(params);
  if (s_coll.empty() || t_coll.empty()) {
    fail(errc::empty_input, "join requires nonempty collections");
  }
  if (!params.quiet) warn_if_tau_exceeds_median(s_coll, t_coll, params.tau);

  JoinResult result;
  const auto t_index0 = Clock::now();
  const InvertedIndex index_s = build_index(tax, s_coll, params);
  const InvertedIndex index_t = build_index(tax, t_coll, params);
  result.stats.postings_s = index_s.posting_count;
  result.stats.postings_t = index_t.posting_count;
  result.stats.time_index_ms = ms_since(t_index0);

  const auto t_filter0 = Clock::now();

  // Overlapped keys: walk the smaller index, probe the larger.
  std::vector<NodeId> keys;
  {
    const bool s_smaller = index_s.postings.size() <= index_t.postings.size();
    const auto& small = s_smaller ? index_s.postings : index_t.postings;
    const auto& large = s_smaller ? index_t.postings : index_s.postings;
    keys.reserve(small.size());
    for (const auto& [key, postings] : small) {
      (void)postings;
      if (large.contains(key)) keys.push_back(key);
    }
    std::sort(keys.begin(), keys.end());
  }

  std::vector<std::uint32_t> s_size(s_coll.size()), t_size(t_coll.size());
  for (std::size_t i = 0; i < s_coll.size(); ++i)
    s_size[i] = static_cast<std::uint32_t>(s_coll[i].nodes.size());
  for (std::size_t i = 0; i < t_coll.size(); ++i)
    t_size[i] = static_cast<std::uint32_t>(t_coll[i].nodes.size());

  // Filtering runs in two passes over the overlapped keys. The first pass
  // only counts co-occurrence events per (S,T) pair; the event count bounds
  // the distinct-overlap count from above, so pairs below tau are settled
  // without ever materializing their evidence. The second pass collects
  // evidence edges for the few surviving pairs and applies the
  // distinctness bookkeeping. Workers own disjoint slices of the sorted
  // key list; merges happen in worker order, which reproduces the
  // single-threaded discovery order exactly.
  const double theta = params.theta;
  const auto tau = static_cast<std::uint32_t>(params.tau);

  struct CountShard {
    std::unordered_map<std::uint64_t, std::uint32_t> events_per_pair;
    std::uint64_t events = 0;
  };
  std::vector<CountShard> count_shards(static_cast<std::size_t>(params.threads));
  parallel_chunks(0, keys.size(), params.threads,
                  [&](std::size_t lo, std::size_t hi, std::size_t w) {
    CountShard& shard = count_shards[w];
    for (std::size_t ki = lo; ki < hi; ++ki) {
      const auto& list_s = index_s.postings.at(keys[ki]);
      const auto& list_t = index_t.postings.at(keys[ki]);
      for (const Posting& ps : list_s) {
        const std::uint32_t ssz = s_size[ps.set];
        for (const Posting& pt : list_t) {
          ++shard.events;
          const std::uint32_t tsz = t_size[pt.set];
          const std::uint32_t small = std::min(ssz, tsz);
          const std::uint32_t big = std::max(ssz, tsz);
          if (static_cast<double>(small) < theta * big - kCutoffEps) {
            continue;  // length filter
          }
          ++shard.events_per_pair[pair_key(ps.set, pt.set)];
        }
      }
    }
  });

  std::unordered_map<std::uint64_t, std::uint32_t> event_counts;
  for (CountShard& shard : count_shards) {
    result.stats.f_tau += shard.events;
    if (event_counts.empty()) {
      event_counts = std::move(shard.events_per_pair);
      continue;
    }
    for (const auto& [key, count] : shard.events_per_pair) {
      event_counts[key] += count;
    }
  }
  count_shards.clear();
  result.stats.distinct_pairs = event_counts.size();

  std::vector<std::uint64_t> survivors;
  for (const auto& [key, count] : event_counts) {
    if (count >= tau) survivors.push_back(key);
  }
  event_counts.clear();
  std::sort(survivors.begin(), survivors.end());

  std::vector<std::uint64_t> candidates;
  if (tau <= 1) {
    // one event is one evidence edge; every tallied pair qualifies
    candidates = std::move(survivors);
  } else if (!survivors.empty()) {
    struct EvidenceShard {
      std::unordered_map<std::uint64_t, CandidateTally> tallies;
    };
    std::vector<EvidenceShard> shards(static_cast<std::size_t>(params.threads));
    parallel_chunks(0, keys.size(), params.threads,
                    [&](std::size_t lo, std::size_t hi, std::size_t w) {
      EvidenceShard& shard = shards[w];
      for (std::size_t ki = lo; ki < hi; ++ki) {
        const auto& list_s = index_s.postings.at(keys[ki]);
        const auto& list_t = index_t.postings.at(keys[ki]);
        for (const Posting& ps : list_s) {
          const std::uint32_t ssz = s_size[ps.set];
          for (const Posting& pt : list_t) {
            const std::uint32_t tsz = t_size[pt.set];
            const std::uint32_t small = std::min(ssz, tsz);
            const std::uint32_t big = std::max(ssz, tsz);
            if (static_cast<double>(small) < theta * big - kCutoffEps) continue;
            const std::uint64_t key = pair_key(ps.set, pt.set);
            if (!std::binary_search(survivors.begin(), survivors.end(), key)) continue;
            shard.tallies[key].count_occurrence(ps.node, pt.node, CountMode::exact);
          }
        }
      }
    });

    std::unordered_map<std::uint64_t, CandidateTally> tallies;
    tallies.reserve(survivors.size());
    for (EvidenceShard& shard : shards) {
      for (auto& [key, tally] : shard.tallies) {
        auto [it, inserted] = tallies.try_emplace(key, std::move(tally));
        if (!inserted) {
          for (const auto& [s, t] : tally.edges) {
            it->second.count_occurrence(s, t, CountMode::exact);
          }
        }
      }
    }
    shards.clear();

    std::vector<char> is_candidate(survivors.size(), 0);
    parallel_chunks(0, survivors.size(), params.threads,
                    [&](std::size_t lo, std::size_t hi, std::size_t) {
      for (std::size_t i = lo; i < hi; ++i) {
        const CandidateTally& tally = tallies.at(survivors[i]);
        if (tally.edges.size() >= tau && tally.occurrences(params.count_mode) >= tau) {
          is_candidate[i] = 1;
        }
      }
    });
    for (std::size_t i = 0; i < survivors.size(); ++i) {
      if (is_candidate[i]) candidates.push_back(survivors[i]);
    }
  }
  result.stats.time_filter_ms = ms_since(t_filter0);

  // Verification.
  const auto t_verify0 = Clock::now();
  result.stats.v_tau = candidates.size();
  std::vector<double> value(candidates.size());
  std::vector<std::uint64_t> cells(static_cast<std::size_t>(params.threads), 0);
  std::vector<std::uint64_t> cubes(static_cast<std::size_t>(params.threads), 0);
  parallel_chunks(0, candidates.size(), params.threads,
                  [&](std::size_t lo, std::size_t hi, std::size_t w) {
    for (std::size_t i = lo; i < hi; ++i) {
      const auto s_idx = static_cast<std::uint32_t>(candidates[i] >> 32);
      const auto t_idx = static_cast<std::uint32_t>(candidates[i]);
      value[i] = gts(tax, s_coll[s_idx], t_coll[t_idx]);
      const std::uint64_t rows = s_size[s_idx], colsn = t_size[t_idx];
      const std::uint64_t big = std::max(rows, colsn);
      cells[w] += rows * colsn;
      cubes[w] += big * big * big;
    }
  });
  for (std::size_t w = 0; w < cells.size(); ++w) {
    result.stats.verify_cells += cells[w];
    result.stats.verify_cubes += cubes[w];
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (value[i] >= theta) {
      result.pairs.push_back(MatchPair{static_cast<std::uint32_t>(candidates[i] >> 32),
                                       static_cast<std::uint32_t>(candidates[i]),
                                       value[i]});
    }
  }
  result.stats.result_count = result.pairs.size();

  std::sort(result.pairs.begin(), result.pairs.end(),
            [&](const MatchPair& a, const MatchPair& b) {
    return std::tie(s_coll[a.s_index].id, t_coll[a.t_index].id, a.s_index, a.t_index) <
           std::tie(s_coll[b.s_index].id, t_coll[b.t_index].id, b.s_index, b.t_index);
  });
  result.stats.time_verify_ms = ms_since(t_verify0);
  return result;
}

JoinResult naive_join(const Taxonomy& tax, std::span<const Record> s_coll,
                      std::span<const Record> t_coll, double theta, int threads) {
  if (!(theta > 0.0) || theta > 1.0) fail(errc::invalid_config, "theta must be in (0, 1]");
  if (threads < 1) fail(errc::invalid_config, "threads must be >= 1");
  if (s_coll.empty() || t_coll.empty()) {
    fail(errc::empty_input, "join requires nonempty collections");
  }
  const std::uint64_t cross = static_cast<std::uint64_t>(s_coll.size()) * t_coll.size();
  if (cross > 1'000'000) {
    fail(errc::instance_too_large,
         "naive join refuses " + std::to_string(cross) + " pairs (limit 10^6)");
  }

  JoinResult result;
  const auto t0 = Clock::now();
  std::vector<std::vector<MatchPair>> found(static_cast<std::size_t>(threads));
  parallel_chunks(0, s_coll.size(), threads,
                  [&](std::size_t lo, std::size_t hi, std::size_t w) {
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t j = 0; j < t_coll.size(); ++j) {
        const double g = gts(tax, s_coll[i], t_coll[j]);
        if (g >= theta) {
          found[w].push_back(MatchPair{static_cast<std::uint32_t>(i),
                                       static_cast<std::uint32_t>(j), g});
        }
      }
    }
  });
  for (const auto& part : found) {
    result.pairs.insert(result.pairs.end(), part.begin(), part.end());
  }
  std::sort(result.pairs.begin(), result.pairs.end(),
            [&](const MatchPair& a, const MatchPair& b) {
    return std::tie(s_coll[a.s_index].id, t_coll[a.t_index].id, a.s_index, a.t_index) <
           std::tie(s_coll[b.s_index].id, t_coll[b.t_index].id, b.s_index, b.t_index);
  });
  result.stats.v_tau = cross;
  result.stats.result_count = result.pairs.size();
  result.stats.time_verify_ms = ms_since(t0);
  return result;
}

}  // namespace taxjoin
