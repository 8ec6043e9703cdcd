#include "agenda/analytics/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "agenda/analytics/salience.hpp"
#include "agenda/analytics/stats.hpp"
#include "agenda/core/errors.hpp"

namespace agenda::analytics {

namespace {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double average = (static_cast<double>(i) + static_cast<double>(j)) /
                               2.0 +
                           1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = average;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y,
               bool* defined) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    *defined = false;
    return std::numeric_limits<double>::quiet_NaN();
  }
  *defined = true;
  return sxy / std::sqrt(sxx * syy);
}

double rho_of(std::span<const double> x, std::span<const double> y,
              bool* defined) {
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  return pearson(rx, ry, defined);
}

}  // namespace

SpearmanResult spearman_rho(std::span<const double> x,
                            std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DataError("spearman_rho needs vectors of equal length");
  }
  if (x.size() < 3) {
    throw DataError("spearman_rho needs at least 3 observations");
  }
  SpearmanResult result;
  result.n = x.size();
  result.rho = rho_of(x, y, &result.defined);
  if (!result.defined) {
    result.p_value = std::numeric_limits<double>::quiet_NaN();
    return result;
  }
  const double df = static_cast<double>(result.n) - 2.0;
  if (std::abs(result.rho) >= 1.0) {
    result.p_value = 0.0;
  } else {
    const double t = result.rho *
                     std::sqrt(df / (1.0 - result.rho * result.rho));
    result.p_value = student_t_two_sided_p(t, df);
  }
  return result;
}

double spearman_exact_p(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3 || x.size() > 10) {
    throw DataError("exact permutation p-values cover 3 <= n <= 10");
  }
  bool defined = true;
  const double observed = std::abs(rho_of(x, y, &defined));
  if (!defined) return std::numeric_limits<double>::quiet_NaN();

  std::vector<double> permuted(y.begin(), y.end());
  std::sort(permuted.begin(), permuted.end());
  std::size_t hits = 0;
  std::size_t total = 0;
  do {
    ++total;
    bool perm_defined = true;
    const double rho = std::abs(rho_of(x, permuted, &perm_defined));
    if (perm_defined && rho >= observed - 1e-12) ++hits;
  } while (std::next_permutation(permuted.begin(), permuted.end()));
  return static_cast<double>(hits) / static_cast<double>(total);
}

CorrelationMatrix rank_correlation_matrix(const SalienceTable& salience) {
  CorrelationMatrix matrix;
  matrix.corpora = salience.corpora;
  const std::size_t corpora = salience.corpora.size();
  matrix.cells.assign(corpora, std::vector<CorrelationCell>(corpora));

  for (std::size_t a = 0; a < corpora; ++a) {
    for (std::size_t b = 0; b < corpora; ++b) {
      CorrelationCell& cell = matrix.cells[a][b];
      if (a == b) {
        cell.rho = 1.0;
        cell.p_value = 0.0;
        cell.n = salience.topic_ids.size();
        cell.stars = 3;
        continue;
      }
      const bool with_labeled =
          static_cast<std::int32_t>(a) == salience.labeled_corpus ||
          static_cast<std::int32_t>(b) == salience.labeled_corpus;
      std::vector<double> va, vb;
      for (std::size_t row = 0; row < salience.topic_ids.size(); ++row) {
        const bool seed = salience.topic_ids[row] <= salience.seed_topic_count;
        if (with_labeled && !seed) continue;
        va.push_back(salience.cells[row][a].percent);
        vb.push_back(salience.cells[row][b].percent);
      }
      cell.n = va.size();
      bool has_nan = false;
      for (double v : va) has_nan = has_nan || std::isnan(v);
      for (double v : vb) has_nan = has_nan || std::isnan(v);
      if (va.size() < 3 || has_nan) {
        // too few topics, or an empty (flagged) corpus column: not fatal
        cell.defined = false;
        cell.rho = std::numeric_limits<double>::quiet_NaN();
        cell.p_value = std::numeric_limits<double>::quiet_NaN();
        cell.stars = 0;
        continue;
      }
      const SpearmanResult r = spearman_rho(va, vb);
      cell.rho = r.rho;
      cell.p_value = r.p_value;
      cell.defined = r.defined;
      cell.stars = r.defined ? significance_stars(r.p_value) : 0;
    }
  }
  return matrix;
}

}  // namespace agenda::analytics
