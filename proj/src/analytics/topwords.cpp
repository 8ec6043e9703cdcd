#include "agenda/analytics/topwords.hpp"

#include <algorithm>

#include "agenda/core/errors.hpp"

namespace agenda::analytics {

std::vector<RankedTerm> top_words(const model::ModelState& state, int topic_id,
                                  std::size_t n,
                                  const text::VocabularyIndex& vocabulary) {
  if (!state.topic_live(topic_id)) {
    throw DataError("top_words: topic " + std::to_string(topic_id) +
                    " is not live");
  }
  if (vocabulary.size() != state.vocab_size()) {
    throw DataError("top_words: vocabulary size does not match the state");
  }
  const std::size_t limit = std::min<std::size_t>(n, vocabulary.size());
  if (limit == 0) return {};

  const double beta = state.params().beta;
  std::vector<RankedTerm> present;
  for (std::uint32_t w = 0; w < state.vocab_size(); ++w) {
    for (const model::TermTopicEntry& entry : state.term_row(w)) {
      if (entry.topic_id != topic_id) continue;
      present.push_back(RankedTerm{
          w, vocabulary.term(w),
          static_cast<double>(entry.labeled + entry.unlabeled) + beta});
      break;
    }
  }
  auto by_weight_then_text = [](const RankedTerm& a, const RankedTerm& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.text < b.text;
  };
  std::sort(present.begin(), present.end(), by_weight_then_text);
  if (present.size() >= limit) {
    present.resize(limit);
    return present;
  }

  // Pad with absent terms (weight beta), lexicographically. Any present term
  // outranks them, so only the tail is filled here.
  std::vector<RankedTerm> absent;
  std::vector<bool> in_topic(state.vocab_size(), false);
  for (const RankedTerm& t : present) in_topic[t.term] = true;
  for (std::uint32_t w = 0; w < state.vocab_size(); ++w) {
    if (!in_topic[w]) absent.push_back(RankedTerm{w, vocabulary.term(w), beta});
  }
  std::sort(absent.begin(), absent.end(),
            [](const RankedTerm& a, const RankedTerm& b) { return a.text < b.text; });
  for (const RankedTerm& t : absent) {
    if (present.size() == limit) break;
    present.push_back(t);
  }
  return present;
}

}  // namespace agenda::analytics
