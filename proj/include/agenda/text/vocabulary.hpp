#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "agenda/core/jsonl.hpp"
#include "agenda/text/normalize.hpp"
#include "agenda/text/records.hpp"

namespace agenda::text {

// Dense bijection term string <-> term id. Construction order is part of the
// contract: ids are assigned by first occurrence in the document stream, ties
// within a document broken lexicographically.
class VocabularyIndex {
 public:
  VocabularyIndex() = default;
  static VocabularyIndex from_terms(std::vector<std::string> terms);

  std::uint32_t size() const { return static_cast<std::uint32_t>(terms_.size()); }
  const std::string& term(std::uint32_t id) const { return terms_.at(id); }
  std::optional<std::uint32_t> id_of(std::string_view term) const;

  // Order-sensitive fingerprint of the term list.
  std::uint64_t content_hash() const;

  void save(const std::string& path, const FileHeader& header) const;
  static VocabularyIndex load(const std::string& path,
                              std::optional<FileHeader>* header = nullptr);

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

// A tokenized document that has not been mapped to term ids yet.
struct PendingDoc {
  std::string id;
  std::string corpus;
  std::vector<std::string> terms;
  std::optional<int> seed_topic;
  std::optional<std::string> timestamp;
  std::optional<std::string> stratum;

  bool labeled() const { return seed_topic.has_value(); }
};

struct VocabularyBuildResult {
  VocabularyIndex vocabulary;
  std::vector<TokenDocument> documents;
  std::size_t terms_seen = 0;
  std::size_t terms_dropped_rare = 0;
  std::size_t terms_dropped_frequent = 0;
  std::size_t docs_rejected = 0;
};

// Document-frequency pruning plus re-application of the per-role length
// filters, iterated to a fixed point so that every term in the final index has
// document frequency >= min_doc_frequency over the documents actually emitted.
// The high-frequency cutoff is max(max_doc_frequency_fraction * D,
// min_doc_frequency), which keeps the rule meaningful on small corpora.
// Throws ConfigError when no document survives.
VocabularyBuildResult build_vocabulary(std::vector<PendingDoc> docs,
                                       const PreprocessConfig& config);

}  // namespace agenda::text
