#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "agenda/core/jsonl.hpp"

namespace agenda::text {

// One raw input record, before any processing. `seed_code` is the hierarchical
// topic code carried only by records of the labeled corpus.
struct RawRecord {
  std::string id;
  std::string text;
  std::string corpus;
  std::optional<std::string> seed_code;
  std::optional<std::string> timestamp;  // ISO calendar date, YYYY-MM-DD
  std::optional<std::string> stratum;
};

// One preprocessed document: dense term ids over the shared vocabulary.
// seed_topic is present exactly for labeled documents (1-based topic id).
struct TokenDocument {
  std::string id;
  std::string corpus;
  std::vector<std::uint32_t> tokens;
  std::optional<int> seed_topic;
  std::optional<std::string> timestamp;
  std::optional<std::string> stratum;

  bool labeled() const { return seed_topic.has_value(); }
};

std::vector<RawRecord> read_raw_records(const std::string& path);

void write_token_documents(const std::string& path,
                           const std::vector<TokenDocument>& docs,
                           const FileHeader& header);
std::vector<TokenDocument> read_token_documents(
    const std::string& path, std::optional<FileHeader>* header = nullptr);

Json token_document_to_json(const TokenDocument& doc);
TokenDocument token_document_from_json(const Json& j);

}  // namespace agenda::text
