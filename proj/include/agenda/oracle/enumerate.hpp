#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "agenda/model/params.hpp"
#include "agenda/text/records.hpp"

namespace agenda::oracle {

// Exact posterior over full assignment vectors of the unlabeled documents,
// computed by brute-force normalization of the collapsed joint. Assignments
// are canonical: seed topics keep their ids, new topics are renumbered by
// first appearance as seed_count+1, seed_count+2, ...
//
// The joint here is evaluated directly from the closed-form
// Dirichlet-multinomial and Chinese-restaurant expressions (lgamma based),
// independent of the sampler's incremental count ratios — it is the reference
// the sampler is tested against.
struct EnumeratedPosterior {
  std::map<std::vector<int>, double> probabilities;
  int seed_topic_count = 0;

  std::size_t support_size() const { return probabilities.size(); }
  // Probability of an assignment vector given in any labeling; canonicalized
  // before lookup. Vectors outside the support have probability 0.
  double probability_of(const std::vector<int>& assignment) const;
};

// Renumbers non-seed topic ids by first appearance.
std::vector<int> canonicalize_assignment(std::vector<int> assignment,
                                         int seed_topic_count);

// Number of canonical assignment vectors for the instance size; used for the
// tractability refusal below.
double count_canonical_assignments(int seed_topic_count, int unlabeled_docs);

// Throws DataError (with the counted size) when the canonical support would
// exceed max_support.
EnumeratedPosterior enumerate_exact_posterior(
    const std::vector<text::TokenDocument>& docs,
    const model::ModelParams& params, std::uint32_t vocab_size,
    int seed_topic_count, double max_support = 1e6);

}  // namespace agenda::oracle
