#include "taxjoin/similarity.hpp"

#include <algorithm>
#include <limits>

namespace taxjoin {

double ts(const Taxonomy& tax, NodeId s, NodeId t) {
  const double lca_depth = tax.depth(tax.lca(s, t));
  const double max_depth = std::max(tax.depth(s), tax.depth(t));
  return lca_depth / max_depth;
}

Assignment assignment_max(const WeightMatrix& wm) {
  if (wm.rows == 0 || wm.cols == 0) {
    fail(errc::empty_matrix, "assignment requires at least one row and column");
  }

  const std::size_t n = std::max(wm.rows, wm.cols);
  double wmax = 0.0;
  for (double x : wm.w) wmax = std::max(wmax, x);

  // Hungarian algorithm with row/column potentials on the equivalent
  // minimization problem cost = wmax - w; padded cells carry weight 0.
  auto cost = [&](std::size_t r, std::size_t c) -> double {
    if (r < wm.rows && c < wm.cols) return wmax - wm.at(r, c);
    return wmax;
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment result;
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t r = match[j] - 1, c = j - 1;
    if (r < wm.rows && c < wm.cols) {
      result.total += wm.at(r, c);
      result.matching.emplace_back(r, c);
    }
  }
  return result;
}

WeightMatrix ts_matrix(const Taxonomy& tax, const Record& s, const Record& t) {
  WeightMatrix wm(s.nodes.size(), t.nodes.size());
  for (std::size_t p = 0; p < s.nodes.size(); ++p) {
    for (std::size_t q = 0; q < t.nodes.size(); ++q) {
      wm.at(p, q) = ts(tax, s.nodes[p], t.nodes[q]);
    }
  }
  return wm;
}

double gts(const Taxonomy& tax, const Record& s, const Record& t) {
  if (s.nodes.empty() || t.nodes.empty()) {
    fail(errc::empty_set, "gts requires nonempty node sets");
  }
  const Assignment a = assignment_max(ts_matrix(tax, s, t));
  return a.total / static_cast<double>(std::max(s.nodes.size(), t.nodes.size()));
}

double gts_brute(const Taxonomy& tax, const Record& s, const Record& t) {
  if (s.nodes.empty() || t.nodes.empty()) {
    fail(errc::empty_set, "gts_brute requires nonempty node sets");
  }
  if (s.nodes.size() > 8 || t.nodes.size() > 8) {
    fail(errc::set_too_large, "gts_brute is limited to 8 nodes per side");
  }

  const WeightMatrix wm = ts_matrix(tax, s, t);
  const std::size_t rows = wm.rows, cols = wm.cols;

  // dp over (next row, used-column mask); each row may match a free column
  // or stay unmatched.
  std::vector<double> memo((rows + 1) << cols, -1.0);
  auto solve = [&](auto&& self, std::size_t r, unsigned mask) -> double {
    if (r == rows) return 0.0;
    double& slot = memo[(r << cols) | mask];
    if (slot >= 0.0) return slot;
    double best = self(self, r + 1, mask);
    for (std::size_t c = 0; c < cols; ++c) {
      if (mask & (1u << c)) continue;
      best = std::max(best, wm.at(r, c) + self(self, r + 1, mask | (1u << c)));
    }
    return slot = best;
  };
  const double total = solve(solve, 0, 0);
  return total / static_cast<double>(std::max(rows, cols));
}

}  // namespace taxjoin
