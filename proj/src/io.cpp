#include "taxjoin/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace taxjoin {

namespace {

[[noreturn]] void fail_at(const std::filesystem::path& path, std::size_t line,
                          const std::string& what) {
  fail(errc::parse_error, path.string() + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(errc::parse_error, "cannot open " + path.string());
  return in;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

Taxonomy load_taxonomy_file(const std::filesystem::path& path) {
  std::ifstream in = open_text(path);
  std::vector<std::pair<std::string, std::string>> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) fail_at(path, lineno, "expected child<TAB>parent");
    std::string child = line.substr(0, tab);
    std::string parent = line.substr(tab + 1);
    if (child.empty() || parent.empty()) fail_at(path, lineno, "empty node label");
    edges.emplace_back(std::move(child), std::move(parent));
  }
  if (edges.empty()) fail(errc::empty_input, path.string() + ": no edges found");
  return Taxonomy::from_edges(edges);
}

std::vector<Record> load_records_file(const std::filesystem::path& path,
                                      const Taxonomy& tax) {
  std::ifstream in = open_text(path);
  std::vector<Record> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      fail_at(path, lineno, "expected record_id<TAB>label[,label...]");
    }
    Record rec;
    rec.id = line.substr(0, tab);
    if (rec.id.empty()) fail_at(path, lineno, "empty record id");

    std::size_t pos = tab + 1;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      const std::string label = line.substr(pos, comma - pos);
      if (label.empty()) fail_at(path, lineno, "empty node label");
      const auto node = tax.find(label);
      if (!node) fail_at(path, lineno, "unknown taxonomy label '" + label + "'");
      rec.nodes.push_back(*node);
      pos = comma + 1;
    }
    if (rec.nodes.empty()) fail_at(path, lineno, "record has no nodes");
    std::sort(rec.nodes.begin(), rec.nodes.end());
    rec.nodes.erase(std::unique(rec.nodes.begin(), rec.nodes.end()), rec.nodes.end());
    records.push_back(std::move(rec));
  }
  if (records.empty()) fail(errc::empty_input, path.string() + ": no records found");
  return records;
}

void write_taxonomy_file(const std::filesystem::path& path,
                         const std::vector<std::pair<std::string, std::string>>& edges) {
  std::ofstream out(path);
  if (!out) fail(errc::parse_error, "cannot write " + path.string());
  for (const auto& [child, parent] : edges) {
    out << child << '\t' << parent << '\n';
  }
}

void write_records_file(const std::filesystem::path& path,
                        std::span<const Record> records, const Taxonomy& tax) {
  std::ofstream out(path);
  if (!out) fail(errc::parse_error, "cannot write " + path.string());
  for (const Record& rec : records) {
    out << rec.id << '\t';
    for (std::size_t i = 0; i < rec.nodes.size(); ++i) {
      if (i > 0) out << ',';
      out << tax.label(rec.nodes[i]);
    }
    out << '\n';
  }
}

void write_results_csv(std::ostream& out, std::span<const MatchPair> pairs,
                       std::span<const Record> s_coll, std::span<const Record> t_coll) {
  out << "s_id,t_id,gts\n";
  char buf[32];
  for (const MatchPair& p : pairs) {
    std::snprintf(buf, sizeof(buf), "%.6f", p.gts);
    out << s_coll[p.s_index].id << ',' << t_coll[p.t_index].id << ',' << buf << '\n';
  }
}

}  // namespace taxjoin
