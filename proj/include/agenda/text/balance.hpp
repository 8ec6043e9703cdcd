#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "agenda/text/records.hpp"

namespace agenda::text {

struct BalanceReport {
  // stratum -> (target count, pool count, sampled count)
  struct StratumLine {
    std::size_t target = 0;
    std::size_t pool = 0;
    std::size_t sampled = 0;
  };
  std::map<std::string, StratumLine> strata;
  std::vector<std::string> warnings;
  std::size_t skipped_missing_stratum_target = 0;
  std::size_t skipped_missing_stratum_pool = 0;

  bool shortfall() const {
    for (const auto& [name, line] : strata) {
      if (line.sampled < line.target) return true;
    }
    return false;
  }
};

// Per stratum, samples from `pool` without replacement exactly as many
// documents as `target` holds in that stratum; when the pool stratum is
// smaller, takes all of it and records a shortfall warning. Deterministic
// under a fixed seed. Output preserves pool order. Documents without a
// stratum value are skipped with a warning.
std::vector<TokenDocument> stratified_balance(
    const std::vector<TokenDocument>& target,
    const std::vector<TokenDocument>& pool, std::uint64_t rng_seed,
    BalanceReport* report = nullptr);

}  // namespace agenda::text
