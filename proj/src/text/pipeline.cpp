#include "agenda/text/pipeline.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "agenda/core/errors.hpp"

namespace agenda::text {

namespace {

// Intermediate: tokenized docs keep term strings until balancing is done,
// because the vocabulary must be built over the balanced corpora.
struct StagedDoc {
  PendingDoc doc;
  std::size_t record_index = 0;
};

TokenDocument to_token_placeholder(const PendingDoc& doc) {
  // Balancing only looks at corpus/stratum/id; token ids are not needed yet.
  TokenDocument t;
  t.id = doc.id;
  t.corpus = doc.corpus;
  t.seed_topic = doc.seed_topic;
  t.timestamp = doc.timestamp;
  t.stratum = doc.stratum;
  return t;
}

}  // namespace

PipelineResult run_pipeline(const std::vector<RawRecord>& records,
                            const PipelineOptions& options) {
  options.preprocess.validate();
  if (!options.labeled_corpus.empty() && options.scheme == nullptr) {
    throw ConfigError("labeled corpus configured but no seed scheme given");
  }

  PipelineResult result;
  PipelineStats& stats = result.stats;

  std::unordered_set<std::string> seen_ids;
  std::vector<StagedDoc> staged;
  staged.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const RawRecord& record = records[i];
    auto& line = stats.corpora[record.corpus];
    ++line.records_in;
    if (!seen_ids.insert(record.id).second) {
      throw DataError("duplicate record id: " + record.id);
    }

    const bool is_labeled_corpus = record.corpus == options.labeled_corpus;
    if (is_labeled_corpus != record.seed_code.has_value()) {
      throw DataError("record " + record.id +
                      (is_labeled_corpus
                           ? ": labeled-corpus record lacks a seed code"
                           : ": seed code on a non-labeled corpus"));
    }

    std::optional<int> seed_topic;
    if (is_labeled_corpus) {
      seed_topic = options.scheme->match(*record.seed_code);
      if (!seed_topic) {
        ++line.excluded_unmatched_code;
        continue;
      }
    }

    const std::string normalized = normalize_text(record.text, options.preprocess);
    TokenizeResult tokens = tokenize_and_filter(
        normalized, options.preprocess,
        is_labeled_corpus ? DocRole::labeled : DocRole::unlabeled);
    if (!tokens.ok()) {
      if (tokens.rejected == RejectReason::too_short) {
        ++line.rejected_too_short;
      } else {
        ++line.rejected_empty;
      }
      continue;
    }

    StagedDoc s;
    s.record_index = i;
    s.doc.id = record.id;
    s.doc.corpus = record.corpus;
    s.doc.terms = std::move(tokens.terms);
    s.doc.seed_topic = seed_topic;
    s.doc.timestamp = record.timestamp;
    s.doc.stratum = record.stratum;
    staged.push_back(std::move(s));
  }

  // Stratified balancing: pool corpora are reduced to a sampled id set.
  std::unordered_set<std::string> drop_ids;
  for (const auto& [target_tag, pool_tag] : options.balance_pairs) {
    std::vector<TokenDocument> target;
    std::vector<TokenDocument> pool;
    for (const StagedDoc& s : staged) {
      if (s.doc.corpus == target_tag) target.push_back(to_token_placeholder(s.doc));
      if (s.doc.corpus == pool_tag) pool.push_back(to_token_placeholder(s.doc));
    }
    BalanceReport report;
    std::vector<TokenDocument> sampled =
        stratified_balance(target, pool, options.balance_seed, &report);
    std::unordered_set<std::string> keep;
    keep.reserve(sampled.size());
    for (const TokenDocument& doc : sampled) keep.insert(doc.id);
    for (const TokenDocument& doc : pool) {
      if (!keep.count(doc.id)) drop_ids.insert(doc.id);
    }
    stats.balance[pool_tag] = std::move(report);
  }
  if (!drop_ids.empty()) {
    std::erase_if(staged, [&](const StagedDoc& s) {
      return drop_ids.count(s.doc.id) > 0;
    });
  }

  std::vector<PendingDoc> pending;
  pending.reserve(staged.size());
  for (StagedDoc& s : staged) pending.push_back(std::move(s.doc));

  VocabularyBuildResult built =
      build_vocabulary(std::move(pending), options.preprocess);
  stats.vocabulary_terms_seen = built.terms_seen;
  stats.vocabulary_dropped_rare = built.terms_dropped_rare;
  stats.vocabulary_dropped_frequent = built.terms_dropped_frequent;
  stats.docs_rejected_by_vocabulary = built.docs_rejected;

  for (const TokenDocument& doc : built.documents) {
    auto& line = stats.corpora[doc.corpus];
    ++line.documents_out;
    line.tokens_out += doc.tokens.size();
  }

  result.vocabulary = std::move(built.vocabulary);
  result.documents = std::move(built.documents);
  return result;
}

}  // namespace agenda::text
