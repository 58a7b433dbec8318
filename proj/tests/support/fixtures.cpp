#include "support/fixtures.hpp"

#include <algorithm>
#include <numeric>

namespace taxjoin::test {

double permutation_assignment_max(const WeightMatrix& wm) {
  const std::size_t n = std::max(wm.rows, wm.cols);
  std::vector<std::size_t> cols(n);
  std::iota(cols.begin(), cols.end(), 0);
  double best = 0.0;
  do {
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      if (r < wm.rows && cols[r] < wm.cols) total += wm.at(r, cols[r]);
    }
    best = std::max(best, total);
  } while (std::next_permutation(cols.begin(), cols.end()));
  return best;
}

}  // namespace taxjoin::test
