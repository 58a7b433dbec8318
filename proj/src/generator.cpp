#include "taxjoin/generator.hpp"

#include <algorithm>

#include "taxjoin/rng.hpp"

namespace taxjoin {

std::vector<std::pair<std::string, std::string>> generate_taxonomy_edges(
    const TaxonomyGenParams& params) {
  if (params.nodes < 2) fail(errc::invalid_config, "taxonomy needs at least 2 nodes");
  if (params.fanout < 1) fail(errc::invalid_config, "fanout must be >= 1");
  if (params.depth < 2) fail(errc::invalid_config, "depth must be >= 2");

  SplitMix64 rng(mix_seed(params.seed, 0));
  auto name = [](int i) { return "n" + std::to_string(i); };

  // Fill level by level: each node gets a uniform parent one level up, so
  // branching tracks the fanout and the height tracks the depth budget.
  std::vector<std::vector<int>> levels(1, std::vector<int>{0});
  std::vector<std::pair<std::string, std::string>> edges;
  edges.reserve(static_cast<std::size_t>(params.nodes) - 1);
  int next_id = 1;
  int remaining = params.nodes - 1;
  for (int d = 1; d < params.depth && remaining > 0; ++d) {
    const std::uint64_t capacity =
        static_cast<std::uint64_t>(levels[d - 1].size()) * params.fanout;
    const int take = static_cast<int>(
        std::min<std::uint64_t>(capacity, static_cast<std::uint64_t>(remaining)));
    levels.emplace_back();
    levels[d].reserve(take);
    for (int i = 0; i < take; ++i) {
      const int parent = levels[d - 1][rng.below(levels[d - 1].size())];
      levels[d].push_back(next_id);
      edges.emplace_back(name(next_id), name(parent));
      ++next_id;
      --remaining;
    }
  }
  // Leftovers (more nodes than the fanout/depth budget allows): hang them
  // off random non-bottom nodes.
  if (remaining > 0) {
    std::vector<int> eligible;
    for (std::size_t d = 0; d + 1 < static_cast<std::size_t>(params.depth); ++d) {
      if (d < levels.size()) {
        eligible.insert(eligible.end(), levels[d].begin(), levels[d].end());
      }
    }
    while (remaining > 0) {
      const int parent = eligible[rng.below(eligible.size())];
      edges.emplace_back(name(next_id), name(parent));
      ++next_id;
      --remaining;
    }
  }
  return edges;
}

namespace {

/// Entry/exit orders for O(1) uniform sampling inside any subtree.
struct SubtreeSampler {
  std::vector<std::uint32_t> tin, tout;
  std::vector<NodeId> order;

  explicit SubtreeSampler(const Taxonomy& tax) {
    const std::size_t n = tax.node_count();
    std::vector<std::vector<NodeId>> children(n);
    for (NodeId u = 0; u < n; ++u) {
      if (u != tax.root()) children[tax.parent(u)].push_back(u);
    }
    tin.resize(n);
    tout.resize(n);
    order.reserve(n);
    struct Frame {
      NodeId node;
      std::size_t next_child;
    };
    std::vector<Frame> stack{{tax.root(), 0}};
    tin[tax.root()] = 0;
    order.push_back(tax.root());
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next_child < children[f.node].size()) {
        NodeId c = children[f.node][f.next_child++];
        tin[c] = static_cast<std::uint32_t>(order.size());
        order.push_back(c);
        stack.push_back({c, 0});
      } else {
        tout[f.node] = static_cast<std::uint32_t>(order.size());
        stack.pop_back();
      }
    }
  }

  NodeId sample(SplitMix64& rng, NodeId subtree_root) const {
    const std::uint32_t lo = tin[subtree_root], hi = tout[subtree_root];
    return order[lo + rng.below(hi - lo)];
  }
};

class RecordFactory {
 public:
  RecordFactory(const Taxonomy& tax, const RecordGenParams& params)
      : tax_(tax), params_(params), sampler_(tax) {
    const auto min_depth = static_cast<std::uint32_t>(std::max(1, params.anchor_min_depth));
    for (NodeId u = 0; u < tax.node_count(); ++u) {
      if (tax.depth(u) < min_depth) continue;
      if (params.community_buckets > 0) {
        const std::uint64_t h = mix_seed(0x5eedc0de, community(u));
        if (h % static_cast<std::uint64_t>(params.community_buckets) !=
            static_cast<std::uint64_t>(params.community_bucket)) {
          continue;
        }
      }
      anchors_.push_back(u);
    }
    if (anchors_.empty()) {
      for (NodeId u = 0; u < tax.node_count(); ++u) {
        if (u != tax.root()) anchors_.push_back(u);
      }
    }
    draw_hubs();
  }

  /// Background record: members come from up to two communities, the rest
  /// is uniform noise; optionally one popularity hub.
  std::vector<NodeId> background(SplitMix64& rng, std::size_t want) const {
    const NodeId community_a = community(anchors_[rng.below(anchors_.size())]);
    const NodeId community_b = community(anchors_[rng.below(anchors_.size())]);
    std::vector<NodeId> nodes;
    if (!hubs_.empty() && rng.uniform() < params_.hub_rate) {
      nodes.push_back(hubs_[rng.below(hubs_.size())]);
    }
    int misses = 0;
    while (nodes.size() < want) {
      NodeId pick;
      if (misses < 16 && rng.uniform() < params_.locality) {
        const NodeId home = rng.uniform() < 0.5 ? community_a : community_b;
        pick = sampler_.sample(rng, home);
      } else {
        pick = static_cast<NodeId>(rng.below(tax_.node_count()));
      }
      if (std::find(nodes.begin(), nodes.end(), pick) != nodes.end()) {
        ++misses;
        continue;
      }
      nodes.push_back(pick);
    }
    return nodes;
  }

  void draw_hubs() {
    if (params_.hub_count <= 0) return;
    SplitMix64 rng(mix_seed(params_.template_seed, 9));
    std::vector<NodeId> deep;
    for (NodeId u = 0; u < tax_.node_count(); ++u) {
      if (tax_.depth(u) >= 6) deep.push_back(u);
    }
    if (deep.empty()) deep = anchors_;
    while (hubs_.size() < static_cast<std::size_t>(params_.hub_count)) {
      hubs_.push_back(deep[rng.below(deep.size())]);
    }
  }

  /// Noisy copy: each node may be swapped for one of its siblings or
  /// cousins, which keeps the pairwise similarity to the original high.
  std::vector<NodeId> mutate(SplitMix64& rng, const std::vector<NodeId>& base) const {
    std::vector<NodeId> nodes = base;
    for (NodeId& node : nodes) {
      if (rng.uniform() >= params_.mutation) continue;
      NodeId hood = tax_.parent(node);
      if (rng.uniform() < 0.3 && hood != tax_.root()) hood = tax_.parent(hood);
      for (int attempt = 0; attempt < 4; ++attempt) {
        const NodeId swap = sampler_.sample(rng, hood);
        if (std::find(nodes.begin(), nodes.end(), swap) == nodes.end()) {
          node = swap;
          break;
        }
      }
    }
    return nodes;
  }

  std::size_t size_from(SplitMix64& rng) const {
    return params_.set_min + rng.below(params_.set_max - params_.set_min + 1);
  }

 private:
  NodeId community(NodeId anchor) const {
    // The community is the subtree two levels above the anchor (or at a
    // fixed configured depth), clamped so it never degenerates to the
    // whole tree.
    std::uint32_t target_depth;
    if (params_.community_depth > 0) {
      target_depth = static_cast<std::uint32_t>(params_.community_depth);
    } else {
      target_depth =
          std::max<std::uint32_t>(2, tax_.depth(anchor) >= 2 ? tax_.depth(anchor) - 2 : 2);
    }
    if (target_depth < 2) target_depth = 2;
    NodeId c = anchor;
    while (tax_.depth(c) > target_depth) c = tax_.parent(c);
    return c;
  }

  const Taxonomy& tax_;
  const RecordGenParams& params_;
  SubtreeSampler sampler_;
  std::vector<NodeId> anchors_;
  std::vector<NodeId> hubs_;
};

}  // namespace

std::vector<Record> generate_records(const Taxonomy& tax, const RecordGenParams& params) {
  if (params.records < 1) fail(errc::invalid_config, "record count must be >= 1");
  if (params.set_min < 1 || params.set_max < params.set_min) {
    fail(errc::invalid_config, "invalid set size range");
  }
  if (static_cast<std::size_t>(params.set_max) >= tax.node_count()) {
    fail(errc::invalid_config, "set sizes must be below the taxonomy node count");
  }
  if (!(params.locality >= 0.0) || params.locality > 1.0 ||
      !(params.dup_rate >= 0.0) || params.dup_rate > 1.0 ||
      !(params.mutation >= 0.0) || params.mutation > 1.0 ||
      !(params.hub_rate >= 0.0) || params.hub_rate > 1.0) {
    fail(errc::invalid_config, "probabilities must be in [0, 1]");
  }

  const RecordFactory factory(tax, params);

  // Shared template pool; clones of one template are the similar pairs.
  int template_count = params.templates;
  if (template_count <= 0) {
    template_count = std::max(
        1, static_cast<int>(static_cast<double>(params.records) * params.dup_rate / 4.0));
  }
  std::vector<std::vector<NodeId>> pool;
  pool.reserve(static_cast<std::size_t>(template_count));
  {
    SplitMix64 rng(mix_seed(params.template_seed, 7));
    for (int i = 0; i < template_count; ++i) {
      pool.push_back(factory.background(rng, factory.size_from(rng)));
    }
  }

  SplitMix64 rng(mix_seed(params.seed, 1));
  std::vector<Record> records;
  records.reserve(static_cast<std::size_t>(params.records));
  for (int r = 0; r < params.records; ++r) {
    Record rec;
    rec.id = params.id_prefix + std::to_string(r);
    if (rng.uniform() < params.dup_rate) {
      rec.nodes = factory.mutate(rng, pool[rng.below(pool.size())]);
    } else {
      rec.nodes = factory.background(rng, factory.size_from(rng));
    }
    std::sort(rec.nodes.begin(), rec.nodes.end());
    rec.nodes.erase(std::unique(rec.nodes.begin(), rec.nodes.end()), rec.nodes.end());
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace taxjoin
