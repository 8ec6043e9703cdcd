#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "agenda/model/state.hpp"
#include "agenda/text/vocabulary.hpp"

namespace agenda::analytics {

struct RankedTerm {
  std::uint32_t term = 0;
  std::string text;
  double weight = 0.0;  // combined smoothed count n^G + n^M + beta
};

// Terms of a topic ranked by combined smoothed weight, ties broken
// lexicographically by term string. Asking for more terms than the
// vocabulary holds returns all of them.
std::vector<RankedTerm> top_words(const model::ModelState& state, int topic_id,
                                  std::size_t n,
                                  const text::VocabularyIndex& vocabulary);

}  // namespace agenda::analytics
