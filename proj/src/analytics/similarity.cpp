#include "agenda/analytics/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "agenda/core/errors.hpp"

namespace agenda::analytics {

using model::ModelState;

TopicMeta::Type topic_type_from_string(std::string_view name) {
  if (name == "policy") return TopicMeta::Type::policy;
  if (name == "politics") return TopicMeta::Type::politics;
  if (name == "polity") return TopicMeta::Type::polity;
  throw ConfigError("unknown topic type: " + std::string(name) +
                    " (expected policy|politics|polity)");
}

const char* to_string(TopicMeta::Type type) {
  switch (type) {
    case TopicMeta::Type::policy: return "policy";
    case TopicMeta::Type::politics: return "politics";
    case TopicMeta::Type::polity: return "polity";
  }
  return "policy";
}

SparseCounts corpus_topic_vector(const ModelState& state,
                                 std::int32_t corpus_index, int topic_id) {
  std::map<std::uint32_t, std::int64_t> counts;
  for (std::size_t i = 0; i < state.document_count(); ++i) {
    if (state.assignment(i) != topic_id) continue;
    const model::Document& doc = state.document(i);
    if (doc.corpus != corpus_index) continue;
    for (const auto& [term, count] : doc.term_counts) {
      counts[term] += count;
    }
  }
  return SparseCounts(counts.begin(), counts.end());
}

double cosine(const SparseCounts& a, const SparseCounts& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first == b[j].first) {
      dot += static_cast<double>(a[i].second) * static_cast<double>(b[j].second);
      ++i;
      ++j;
    } else if (a[i].first < b[j].first) {
      ++i;
    } else {
      ++j;
    }
  }
  for (const auto& [term, count] : a) na += static_cast<double>(count) * count;
  for (const auto& [term, count] : b) nb += static_cast<double>(count) * count;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

SimilarityGrid cosine_similarity_grid(
    const ModelState& state, const std::vector<CorpusAttributes>& corpora,
    const std::vector<int>& retained_topics, const TopicMetaMap& meta) {
  SimilarityGrid grid;

  struct CorpusSlot {
    CorpusAttributes attributes;
    std::int32_t index = -1;
  };
  std::vector<CorpusSlot> slots;
  for (const CorpusAttributes& attributes : corpora) {
    const std::int32_t index = state.corpus_index(attributes.tag);
    if (index < 0) {
      throw DataError("corpus '" + attributes.tag + "' has no documents");
    }
    slots.push_back({attributes, index});
  }

  struct TopicCells {
    int topic_id = 0;
    double mean_cosine = 0.0;
    std::vector<SimilarityCell> cells;
  };
  std::vector<TopicCells> per_topic;

  for (int topic_id : retained_topics) {
    const bool is_new = topic_id > state.seed_topic_count();
    auto meta_it = meta.find(topic_id);
    const bool is_politics =
        meta_it != meta.end() && meta_it->second.type == TopicMeta::Type::politics;

    std::vector<SparseCounts> vectors;
    std::vector<std::int64_t> totals;
    for (const CorpusSlot& slot : slots) {
      vectors.push_back(corpus_topic_vector(state, slot.index, topic_id));
      std::int64_t total = 0;
      for (const auto& [term, count] : vectors.back()) total += count;
      totals.push_back(total);
    }

    TopicCells bucket;
    bucket.topic_id = topic_id;
    double cosine_sum = 0.0;
    for (std::size_t a = 0; a < slots.size(); ++a) {
      for (std::size_t b = a + 1; b < slots.size(); ++b) {
        const CorpusAttributes& ca = slots[a].attributes;
        const CorpusAttributes& cb = slots[b].attributes;
        if (is_new && (ca.labeled || cb.labeled)) {
          // the labeled corpus cannot populate a new topic
          grid.omitted.push_back(
              {topic_id, ca.tag, cb.tag, "labeled-corpus-new-topic"});
          continue;
        }
        if (totals[a] == 0 || totals[b] == 0) {
          grid.omitted.push_back({topic_id, ca.tag, cb.tag,
                                  std::string("zero-vector:") +
                                      (totals[a] == 0 ? ca.tag : cb.tag)});
          continue;
        }
        SimilarityCell cell;
        cell.topic_id = topic_id;
        cell.corpus_a = ca.tag;
        cell.corpus_b = cb.tag;
        cell.cosine = cosine(vectors[a], vectors[b]);
        cell.token_total = totals[a] + totals[b];
        auto in_pair = [&](const std::string& medium, const std::string& actor) {
          return (ca.medium == medium && ca.actor == actor) ||
                 (cb.medium == medium && cb.actor == actor);
        };
        cell.survey_in_pair = ca.labeled || cb.labeled;
        cell.fb_politicians_in_pair = in_pair("facebook", "politicians");
        cell.tw_politicians_in_pair = in_pair("twitter", "politicians");
        cell.tw_audience_in_pair = in_pair("twitter", "audience");
        cell.fb_audience_in_pair = in_pair("facebook", "audience");
        cell.same_medium = ca.medium == cb.medium && ca.medium != "none";
        cell.same_actor = ca.actor == cb.actor;
        cell.topic_is_politics = is_politics;
        cell.topic_is_new = is_new;
        cosine_sum += cell.cosine;
        bucket.cells.push_back(std::move(cell));
      }
    }
    if (!bucket.cells.empty()) {
      bucket.mean_cosine = cosine_sum / static_cast<double>(bucket.cells.size());
      per_topic.push_back(std::move(bucket));
    }
  }

  std::stable_sort(per_topic.begin(), per_topic.end(),
                   [](const TopicCells& a, const TopicCells& b) {
                     if (a.mean_cosine != b.mean_cosine) {
                       return a.mean_cosine > b.mean_cosine;
                     }
                     return a.topic_id < b.topic_id;
                   });
  for (TopicCells& bucket : per_topic) {
    for (SimilarityCell& cell : bucket.cells) {
      grid.cells.push_back(std::move(cell));
    }
  }
  return grid;
}

}  // namespace agenda::analytics
