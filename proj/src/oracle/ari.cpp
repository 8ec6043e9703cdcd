#include "agenda/oracle/ari.hpp"

#include <map>
#include <stdexcept>
#include <utility>

namespace agenda::oracle {

namespace {
double choose2(double n) { return n * (n - 1.0) / 2.0; }
}  // namespace

double recovery_score(const std::vector<int>& truth,
                      const std::vector<int>& inferred) {
  if (truth.size() != inferred.size()) {
    throw std::invalid_argument("partitions cover different document sets");
  }
  const double n = static_cast<double>(truth.size());
  if (truth.empty()) return 1.0;

  std::map<std::pair<int, int>, double> contingency;
  std::map<int, double> row_sums;
  std::map<int, double> col_sums;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    contingency[{truth[i], inferred[i]}] += 1.0;
    row_sums[truth[i]] += 1.0;
    col_sums[inferred[i]] += 1.0;
  }

  double sum_cells = 0.0;
  for (const auto& [key, count] : contingency) sum_cells += choose2(count);
  double sum_rows = 0.0;
  for (const auto& [key, count] : row_sums) sum_rows += choose2(count);
  double sum_cols = 0.0;
  for (const auto& [key, count] : col_sums) sum_cols += choose2(count);

  const double expected = sum_rows * sum_cols / choose2(n);
  const double maximum = 0.5 * (sum_rows + sum_cols);
  if (maximum == expected) {
    // Both partitions trivial in the same way; identical iff the contingency
    // table is a (partial) permutation matrix.
    return contingency.size() == row_sums.size() &&
                   contingency.size() == col_sums.size()
               ? 1.0
               : 0.0;
  }
  return (sum_cells - expected) / (maximum - expected);
}

}  // namespace agenda::oracle
