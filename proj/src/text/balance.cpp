#include "agenda/text/balance.hpp"

#include <algorithm>

#include "agenda/core/rng.hpp"

namespace agenda::text {

std::vector<TokenDocument> stratified_balance(
    const std::vector<TokenDocument>& target,
    const std::vector<TokenDocument>& pool, std::uint64_t rng_seed,
    BalanceReport* report) {
  BalanceReport local;
  BalanceReport& rep = report ? *report : local;

  std::map<std::string, std::size_t> target_counts;
  for (const TokenDocument& doc : target) {
    if (!doc.stratum) {
      ++rep.skipped_missing_stratum_target;
      continue;
    }
    target_counts[*doc.stratum] += 1;
  }

  std::map<std::string, std::vector<std::size_t>> pool_indices;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (!pool[i].stratum) {
      ++rep.skipped_missing_stratum_pool;
      continue;
    }
    pool_indices[*pool[i].stratum].push_back(i);
  }
  if (rep.skipped_missing_stratum_target > 0) {
    rep.warnings.push_back(
        std::to_string(rep.skipped_missing_stratum_target) +
        " target document(s) without stratum skipped");
  }
  if (rep.skipped_missing_stratum_pool > 0) {
    rep.warnings.push_back(std::to_string(rep.skipped_missing_stratum_pool) +
                           " pool document(s) without stratum skipped");
  }

  // One sequential stream over strata in sorted order keeps the whole draw
  // reproducible from a single seed.
  Rng rng(rng_seed);
  std::vector<std::size_t> selected;
  for (const auto& [stratum, want] : target_counts) {
    auto& line = rep.strata[stratum];
    line.target = want;
    auto it = pool_indices.find(stratum);
    if (it == pool_indices.end() || it->second.empty()) {
      rep.warnings.push_back("stratum '" + stratum +
                             "': pool is empty, wanted " +
                             std::to_string(want));
      continue;
    }
    std::vector<std::size_t>& candidates = it->second;
    line.pool = candidates.size();
    if (candidates.size() <= want) {
      if (candidates.size() < want) {
        rep.warnings.push_back(
            "stratum '" + stratum + "': pool has " +
            std::to_string(candidates.size()) + " < " + std::to_string(want) +
            " target documents, taking all");
      }
      line.sampled = candidates.size();
      selected.insert(selected.end(), candidates.begin(), candidates.end());
      continue;
    }
    // Partial Fisher-Yates: the first `want` positions become the sample.
    for (std::size_t j = 0; j < want; ++j) {
      const std::size_t k =
          j + static_cast<std::size_t>(rng.uniform_below(candidates.size() - j));
      std::swap(candidates[j], candidates[k]);
    }
    line.sampled = want;
    selected.insert(selected.end(), candidates.begin(),
                    candidates.begin() + static_cast<std::ptrdiff_t>(want));
  }

  // Record empty strata in the report even when pool-only.
  for (const auto& [stratum, indices] : pool_indices) {
    if (!rep.strata.count(stratum)) {
      auto& line = rep.strata[stratum];
      line.pool = indices.size();
    }
  }

  std::sort(selected.begin(), selected.end());
  std::vector<TokenDocument> sampled;
  sampled.reserve(selected.size());
  for (std::size_t i : selected) {
    sampled.push_back(pool[i]);
  }
  return sampled;
}

}  // namespace agenda::text
