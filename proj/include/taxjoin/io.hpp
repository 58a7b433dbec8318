#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "taxjoin/join.hpp"
#include "taxjoin/similarity.hpp"
#include "taxjoin/taxonomy.hpp"

namespace taxjoin {

/// Taxonomy file: one `child<TAB>parent` edge per line, `#` comments.
Taxonomy load_taxonomy_file(const std::filesystem::path& path);

/// Records file: one `record_id<TAB>label[,label...]` per line. Unknown
/// labels raise a parse error naming the file and line. Node lists are
/// sorted and de-duplicated.
std::vector<Record> load_records_file(const std::filesystem::path& path,
                                      const Taxonomy& tax);

void write_taxonomy_file(const std::filesystem::path& path,
                         const std::vector<std::pair<std::string, std::string>>& edges);

void write_records_file(const std::filesystem::path& path,
                        std::span<const Record> records, const Taxonomy& tax);

/// Results CSV: header `s_id,t_id,gts`, similarity printed to 6 decimals.
void write_results_csv(std::ostream& out, std::span<const MatchPair> pairs,
                       std::span<const Record> s_coll, std::span<const Record> t_coll);

}  // namespace taxjoin
