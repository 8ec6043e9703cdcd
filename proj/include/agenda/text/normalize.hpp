#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace agenda::text {

struct PreprocessConfig {
  std::unordered_set<std::string> stopwords;
  std::unordered_set<std::string> custom_stopwords;
  std::unordered_set<std::string> name_blocklist;
  int min_tokens_unlabeled = 3;
  int min_tokens_labeled = 1;
  int min_doc_frequency = 2;
  double max_doc_frequency_fraction = 0.5;
  bool transliterate_umlauts = true;

  // Throws ConfigError on inconsistent settings.
  void validate() const;
};

// Canonicalizes raw text, in rule order: lowercase, umlaut/eszett
// transliteration (when enabled), URL removal (scheme or leading "www."),
// @-handle removal, punctuation and digits to single spaces, whitespace
// collapse. Total and idempotent.
std::string normalize_text(std::string_view raw, const PreprocessConfig& config);

enum class DocRole { labeled, unlabeled };

enum class RejectReason { none, too_short, empty };

struct TokenizeResult {
  std::vector<std::string> terms;
  RejectReason rejected = RejectReason::none;

  bool ok() const { return rejected == RejectReason::none; }
};

// Whitespace tokenization of normalized text, then stopword / custom-stopword /
// name-blocklist removal, then the per-role minimum length check. Rejection is
// a value, not a failure.
TokenizeResult tokenize_and_filter(std::string_view normalized,
                                   const PreprocessConfig& config,
                                   DocRole role);

}  // namespace agenda::text
