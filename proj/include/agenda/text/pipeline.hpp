#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "agenda/text/balance.hpp"
#include "agenda/text/normalize.hpp"
#include "agenda/text/records.hpp"
#include "agenda/text/seed_scheme.hpp"
#include "agenda/text/vocabulary.hpp"

namespace agenda::text {

struct PipelineOptions {
  PreprocessConfig preprocess;
  std::string labeled_corpus;
  const SeedScheme* scheme = nullptr;  // required when labeled_corpus is set
  // (target corpus, pool corpus): pool is downsampled to mirror target,
  // stratified by the records' stratum field.
  std::vector<std::pair<std::string, std::string>> balance_pairs;
  std::uint64_t balance_seed = 0;
};

struct PipelineStats {
  struct CorpusLine {
    std::size_t records_in = 0;
    std::size_t rejected_too_short = 0;
    std::size_t rejected_empty = 0;
    std::size_t excluded_unmatched_code = 0;
    std::size_t documents_out = 0;  // after balancing and vocabulary filters
    std::size_t tokens_out = 0;
  };
  std::map<std::string, CorpusLine> corpora;
  std::map<std::string, BalanceReport> balance;  // keyed by pool corpus
  std::size_t vocabulary_terms_seen = 0;
  std::size_t vocabulary_dropped_rare = 0;
  std::size_t vocabulary_dropped_frequent = 0;
  std::size_t docs_rejected_by_vocabulary = 0;
};

struct PipelineResult {
  VocabularyIndex vocabulary;
  std::vector<TokenDocument> documents;
  PipelineStats stats;
};

// The whole ingestion path: seed-code matching for the labeled corpus,
// normalization and token filtering per role, stratified balancing of the
// configured corpus pairs, then joint vocabulary construction over all
// surviving documents. Deterministic for fixed inputs, options and seed.
PipelineResult run_pipeline(const std::vector<RawRecord>& records,
                            const PipelineOptions& options);

}  // namespace agenda::text
