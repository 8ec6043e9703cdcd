#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "agenda/model/state.hpp"

namespace agenda::analytics {

struct PruneResult {
  // Smallest seed-topic document count in the labeled corpus.
  std::int64_t threshold = 0;
  // Retained topic ids: every seed, then surviving new topics by id.
  std::vector<int> retained;
  struct DroppedTopic {
    int topic_id = 0;
    std::int64_t unlabeled_docs = 0;
  };
  std::vector<DroppedTopic> dropped;
  std::int64_t dropped_documents = 0;
  std::int64_t unlabeled_documents = 0;
};

// Drops every new topic whose document total over the unlabeled corpora is
// strictly below the smallest seed topic (measured in the labeled corpus).
// A new topic exactly at the threshold is retained.
PruneResult prune_topics(const model::ModelState& state);

struct SalienceTable {
  struct Cell {
    double percent = 0.0;
    std::int64_t documents = 0;
    // Structurally empty: the labeled corpus cannot appear in a new topic.
    bool blank = false;
  };
  std::vector<int> topic_ids;          // seeds first, then new topics
  int seed_topic_count = 0;
  std::vector<std::string> corpora;    // state corpus order
  std::int32_t labeled_corpus = -1;    // index into corpora, -1 if none
  std::vector<std::vector<Cell>> cells;  // [topic][corpus]
  std::vector<std::int64_t> corpus_totals;  // docs in retained topics
  std::vector<bool> corpus_undefined;  // empty corpus: column flagged

  std::size_t topic_row(int topic_id) const;  // throws if not in the table
};

// Percent of each corpus's documents per retained topic; columns sum to 100
// over the retained set. Empty corpora are flagged, not silently zeroed.
SalienceTable topic_salience(const model::ModelState& state,
                             const std::vector<int>& retained_topics);

}  // namespace agenda::analytics
