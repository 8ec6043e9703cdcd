#include "agenda/analytics/salience.hpp"

#include <algorithm>
#include <limits>

#include "agenda/core/errors.hpp"

namespace agenda::analytics {

using model::ModelState;
using model::TopicCounts;

PruneResult prune_topics(const ModelState& state) {
  PruneResult result;
  const std::int32_t labeled = state.labeled_corpus();
  if (labeled < 0) {
    throw DataError("pruning needs a labeled corpus to define the threshold");
  }

  result.threshold = std::numeric_limits<std::int64_t>::max();
  for (const TopicCounts& topic : state.topics()) {
    if (!topic.is_seed) continue;
    result.threshold = std::min(
        result.threshold,
        topic.per_corpus_docs[static_cast<std::size_t>(labeled)]);
  }

  for (const TopicCounts& topic : state.topics()) {
    std::int64_t unlabeled_docs = 0;
    for (std::size_t c = 0; c < state.corpus_tags().size(); ++c) {
      if (static_cast<std::int32_t>(c) == labeled) continue;
      unlabeled_docs += topic.per_corpus_docs[c];
    }
    if (!topic.is_seed) result.unlabeled_documents += unlabeled_docs;
    if (topic.is_seed || unlabeled_docs >= result.threshold) {
      result.retained.push_back(topic.id);
    } else {
      result.dropped.push_back({topic.id, unlabeled_docs});
      result.dropped_documents += unlabeled_docs;
    }
  }
  std::sort(result.retained.begin(), result.retained.end());
  return result;
}

std::size_t SalienceTable::topic_row(int topic_id) const {
  for (std::size_t i = 0; i < topic_ids.size(); ++i) {
    if (topic_ids[i] == topic_id) return i;
  }
  throw DataError("topic " + std::to_string(topic_id) +
                  " is not in the salience table");
}

SalienceTable topic_salience(const ModelState& state,
                             const std::vector<int>& retained_topics) {
  SalienceTable table;
  table.topic_ids = retained_topics;
  std::sort(table.topic_ids.begin(), table.topic_ids.end());
  table.seed_topic_count = state.seed_topic_count();
  table.corpora = state.corpus_tags();
  table.labeled_corpus = state.labeled_corpus();

  const std::size_t corpora = table.corpora.size();
  table.corpus_totals.assign(corpora, 0);
  table.corpus_undefined.assign(corpora, false);
  table.cells.assign(table.topic_ids.size(),
                     std::vector<SalienceTable::Cell>(corpora));

  for (int topic_id : table.topic_ids) {
    if (!state.topic_live(topic_id)) {
      throw DataError("retained topic " + std::to_string(topic_id) +
                      " is not live");
    }
    const TopicCounts& topic = state.topic(topic_id);
    for (std::size_t c = 0; c < corpora; ++c) {
      table.corpus_totals[c] += topic.per_corpus_docs[c];
    }
  }

  for (std::size_t row = 0; row < table.topic_ids.size(); ++row) {
    const TopicCounts& topic = state.topic(table.topic_ids[row]);
    for (std::size_t c = 0; c < corpora; ++c) {
      SalienceTable::Cell& cell = table.cells[row][c];
      cell.documents = topic.per_corpus_docs[c];
      cell.blank = !topic.is_seed &&
                   static_cast<std::int32_t>(c) == table.labeled_corpus;
      if (table.corpus_totals[c] == 0) {
        table.corpus_undefined[c] = true;
        cell.percent = std::numeric_limits<double>::quiet_NaN();
      } else {
        cell.percent = 100.0 * static_cast<double>(cell.documents) /
                       static_cast<double>(table.corpus_totals[c]);
      }
    }
  }
  return table;
}

}  // namespace agenda::analytics
