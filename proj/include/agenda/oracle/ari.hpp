#pragma once

#include <vector>

namespace agenda::oracle {

// Adjusted Rand index between two labelings of the same documents: 1.0 for
// identical partitions (up to relabeling), ~0 for independent ones, negative
// for worse-than-chance agreement.
double recovery_score(const std::vector<int>& truth,
                      const std::vector<int>& inferred);

}  // namespace agenda::oracle
