#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agenda/model/params.hpp"
#include "agenda/text/records.hpp"

namespace agenda::model {

// Compact per-document view used by the sampler: distinct terms with counts,
// sorted by term id.
struct Document {
  std::vector<std::pair<std::uint32_t, std::int32_t>> term_counts;
  std::int32_t token_count = 0;
  std::int32_t corpus = 0;     // interned corpus index
  std::int32_t seed_topic = 0; // 0 = unlabeled, else 1..K seed id
  bool labeled() const { return seed_topic > 0; }
};

// Per-topic sufficient statistics. Term counts live in the term-major rows of
// ModelState; this struct carries the scalar tallies plus the caches the
// scorer reads on every visit.
struct TopicCounts {
  std::int32_t id = 0;
  bool is_seed = false;
  std::int64_t doc_count = 0;              // n_k, labeled + unlabeled
  std::int64_t token_total_labeled = 0;    // n^G_k.
  std::int64_t token_total_unlabeled = 0;  // n^M_k.
  std::vector<std::int64_t> per_corpus_docs;

  double log_doc_count = 0.0;        // log(n_k), -inf when empty
  double log_token_denominator = 0;  // log(n^G_k. + n^M_k. + V*beta)

  std::int64_t token_total() const {
    return token_total_labeled + token_total_unlabeled;
  }
};

// One (topic, term) cell, stored in the row of its term. log_smoothed caches
// log(labeled + unlabeled + beta) so a sweep's scoring loop is add-only.
struct TermTopicEntry {
  std::int32_t topic_id = 0;
  std::int32_t labeled = 0;    // n^G_kw
  std::int32_t unlabeled = 0;  // n^M_kw
  double log_smoothed = 0.0;
};

using TermRow = std::vector<TermTopicEntry>;

// Term counts of one topic, split as the model splits them.
struct TopicTermCounts {
  std::map<std::uint32_t, std::int64_t> labeled;
  std::map<std::uint32_t, std::int64_t> unlabeled;
};

// All sampler state: documents, assignments and incrementally maintained
// count tables. Seed topics (ids 1..K) exist from construction and are never
// removed; new topics get fresh ids and die as soon as they empty. The
// canonical mutation surface is remove_document / place_document; everything
// else is read-only.
class ModelState {
 public:
  ModelState(std::vector<text::TokenDocument> docs, ModelParams params,
             std::uint32_t vocab_size, int seed_topic_count);

  const ModelParams& params() const { return params_; }
  std::uint32_t vocab_size() const { return vocab_size_; }
  int seed_topic_count() const { return seed_topic_count_; }

  std::size_t document_count() const { return docs_.size(); }
  const Document& document(std::size_t index) const { return compact_[index]; }
  const text::TokenDocument& token_document(std::size_t index) const {
    return docs_[index];
  }
  const std::vector<text::TokenDocument>& token_documents() const {
    return docs_;
  }
  const std::vector<std::size_t>& unlabeled_documents() const {
    return unlabeled_order_;
  }

  // Topic id assigned to a document; 0 while unassigned.
  int assignment(std::size_t index) const { return assignment_[index]; }
  std::size_t assigned_count() const { return assigned_count_; }

  // Live topics: seed topics first, then new topics in creation order.
  const std::vector<TopicCounts>& topics() const { return topics_; }
  int live_topic_count() const { return static_cast<int>(topics_.size()); }
  int topic_slot(int topic_id) const;  // -1 when dead/unknown
  const TopicCounts& topic(int topic_id) const;
  bool topic_live(int topic_id) const { return topic_slot(topic_id) >= 0; }

  // Next unused topic id (what a new-topic draw would create).
  int next_topic_id() const { return next_topic_id_; }

  const TermRow& term_row(std::uint32_t term) const {
    return term_rows_[term];
  }
  // Combined count of term w in topic (labeled + unlabeled); 0 when absent.
  std::int64_t term_count(int topic_id, std::uint32_t term) const;
  TopicTermCounts term_counts(int topic_id) const;

  const std::vector<std::string>& corpus_tags() const { return corpus_tags_; }
  std::int32_t corpus_index(std::string_view tag) const;  // -1 when unknown
  // Corpus of the labeled documents; -1 when the run has none.
  std::int32_t labeled_corpus() const { return labeled_corpus_; }

  std::int64_t total_tokens() const { return total_tokens_; }

  double log_beta() const { return log_beta_; }
  double log_vocab_beta() const { return log_vocab_beta_; }  // log(V*beta)
  double log_vocab() const { return log_vocab_; }            // log(V)
  double log_alpha() const { return log_alpha_; }

  // Removes an assigned document from its topic; a non-seed topic emptied by
  // this is deleted immediately. Labeled documents cannot be removed.
  void remove_document(std::size_t index);

  // Adds an unassigned document to `topic_id`. Ids >= next_topic_id() create
  // the topic (the sampler always passes exactly next_topic_id(); replay may
  // skip over ids of topics that died). Ids below next_topic_id() must be
  // live; dead ids are never reused.
  void place_document(std::size_t index, int topic_id);

  // Restores the id counter after replaying a persisted run, so a resumed
  // chain hands out the same fresh ids an uninterrupted one would.
  void restore_next_topic_id(int id);

  // Full recount of every table from (documents, assignments); returns the
  // first discrepancy as text, or nullopt when everything matches exactly.
  std::optional<std::string> verify_consistency() const;

  // Bytes held by the sparse count structures (rows + topic tallies);
  // the memory-budget check of the validate suite reads this.
  std::size_t count_table_bytes() const;
  std::size_t count_nonzero_entries() const;

 private:
  void refresh_topic_caches(TopicCounts& topic);
  TopicCounts& create_topic(int topic_id, bool is_seed);
  void erase_topic(int topic_id);

  std::vector<text::TokenDocument> docs_;
  std::vector<Document> compact_;
  std::vector<std::size_t> unlabeled_order_;
  ModelParams params_;
  std::uint32_t vocab_size_ = 0;
  int seed_topic_count_ = 0;

  std::vector<std::string> corpus_tags_;
  std::int32_t labeled_corpus_ = -1;

  std::vector<int> assignment_;
  std::size_t assigned_count_ = 0;
  std::int64_t total_tokens_ = 0;

  std::vector<TopicCounts> topics_;
  std::vector<std::int32_t> id_to_slot_;
  std::vector<TermRow> term_rows_;
  int next_topic_id_ = 1;

  double log_beta_ = 0, log_vocab_beta_ = 0, log_vocab_ = 0, log_alpha_ = 0;
};

}  // namespace agenda::model
