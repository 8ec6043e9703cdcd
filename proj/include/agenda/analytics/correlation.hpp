#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace agenda::analytics {

struct SalienceTable;  // salience.hpp

struct SpearmanResult {
  double rho = 0.0;
  double p_value = 1.0;  // two-sided, t approximation with n-2 df
  std::size_t n = 0;
  bool defined = true;  // false when either vector is constant
};

// Average ranks for ties, Pearson correlation of the ranks. Requires equal
// lengths >= 3 (DataError otherwise). A constant input leaves rho undefined,
// flagged rather than silently zero.
SpearmanResult spearman_rho(std::span<const double> x,
                            std::span<const double> y);

// Exact two-sided permutation p-value P(|rho_perm| >= |rho_observed|);
// n <= 10 (enumerates n! permutations).
double spearman_exact_p(std::span<const double> x, std::span<const double> y);

struct CorrelationCell {
  double rho = 1.0;
  double p_value = 0.0;
  std::size_t n = 0;
  int stars = 0;
  bool defined = true;
};

struct CorrelationMatrix {
  std::vector<std::string> corpora;
  // full symmetric matrix, diagonal rho = 1 reported for completeness
  std::vector<std::vector<CorrelationCell>> cells;
};

// Rank correlations of topic salience between corpora. Pairs that include
// the labeled corpus compare seed topics only; pairs among unlabeled corpora
// use every retained topic.
CorrelationMatrix rank_correlation_matrix(const SalienceTable& salience);

}  // namespace agenda::analytics
