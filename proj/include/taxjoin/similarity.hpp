#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "taxjoin/taxonomy.hpp"

namespace taxjoin {

/// One record: an external identifier plus its set of taxonomy nodes.
/// Node lists are sorted and de-duplicated at ingest.
struct Record {
  std::string id;
  std::vector<NodeId> nodes;
};

/// Dense row-major matrix of pairwise node similarities in [0, 1].
struct WeightMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> w;

  WeightMatrix() = default;
  WeightMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), w(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return w[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return w[r * cols + c]; }
};

struct Assignment {
  double total = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> matching;  // (row, col)
};

/// Node-pair similarity: depth of the lowest common ancestor over the
/// depth of the deeper node.
double ts(const Taxonomy& tax, NodeId s, NodeId t);

/// Maximum-weight assignment where each row and column is used at most
/// once. Rectangular inputs are zero-padded to square internally; padded
/// matches are excluded from the returned matching.
Assignment assignment_max(const WeightMatrix& w);

/// Pairwise node similarities between two records.
WeightMatrix ts_matrix(const Taxonomy& tax, const Record& s, const Record& t);

/// Set-pair similarity: optimal assignment total over the larger set size.
double gts(const Taxonomy& tax, const Record& s, const Record& t);

/// Exhaustive-matching reference for gts. Enumerates injective partial
/// matchings directly; inputs are limited to 8 nodes per side.
double gts_brute(const Taxonomy& tax, const Record& s, const Record& t);

}  // namespace taxjoin
