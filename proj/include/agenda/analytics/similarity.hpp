#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "agenda/model/state.hpp"

namespace agenda::analytics {

// Human-supplied topic metadata. Seed topics carry their scheme labels; new
// topics are labeled (and typed) after inspecting their documents.
struct TopicMeta {
  int topic_id = 0;
  std::string label;
  enum class Origin { seed, from_data } origin = Origin::seed;
  enum class Type { policy, politics, polity } type = Type::policy;
};
using TopicMetaMap = std::map<int, TopicMeta>;

TopicMeta::Type topic_type_from_string(std::string_view name);
const char* to_string(TopicMeta::Type type);

// How a corpus participates in pair covariates. `medium` is "facebook",
// "twitter" or "none"; `actor` is "politicians", "audience" or "survey".
struct CorpusAttributes {
  std::string tag;
  std::string medium = "none";
  std::string actor;
  bool labeled = false;
};

// Unsmoothed term counts over tokens of `corpus` documents assigned to
// `topic`; sparse, sorted by term id. Recounted from the documents.
using SparseCounts = std::vector<std::pair<std::uint32_t, std::int64_t>>;
SparseCounts corpus_topic_vector(const model::ModelState& state,
                                 std::int32_t corpus_index, int topic_id);

double cosine(const SparseCounts& a, const SparseCounts& b);

// One (topic, corpus-pair) observation with its regression covariates.
struct SimilarityCell {
  int topic_id = 0;
  std::string corpus_a, corpus_b;  // unordered pair in configured order
  double cosine = 0.0;
  std::int64_t token_total = 0;  // combined token count of the pair in topic
  bool survey_in_pair = false;
  bool fb_politicians_in_pair = false;
  bool tw_politicians_in_pair = false;
  bool tw_audience_in_pair = false;
  bool fb_audience_in_pair = false;
  bool same_medium = false;
  bool same_actor = false;
  bool topic_is_politics = false;
  bool topic_is_new = false;
};

struct SimilarityGrid {
  // Topics ordered by decreasing mean cosine; pairs in configured corpus
  // order within each topic.
  std::vector<SimilarityCell> cells;
  struct OmittedCell {
    int topic_id = 0;
    std::string corpus_a, corpus_b;
    std::string reason;
  };
  std::vector<OmittedCell> omitted;
};

// Cosine similarities of corpus-topic vectors for every unordered corpus pair
// and retained topic. Pairs of the labeled corpus with a new topic are
// structurally absent; zero vectors omit the cell with a reason.
SimilarityGrid cosine_similarity_grid(
    const model::ModelState& state,
    const std::vector<CorpusAttributes>& corpora,
    const std::vector<int>& retained_topics, const TopicMetaMap& meta);

}  // namespace agenda::analytics
