#include "agenda/text/normalize.hpp"

#include <cstdint>

#include "agenda/core/errors.hpp"

namespace agenda::text {

void PreprocessConfig::validate() const {
  if (min_tokens_labeled < 1 || min_tokens_unlabeled < 1) {
    throw ConfigError("minimum token counts must be >= 1");
  }
  if (min_tokens_unlabeled < min_tokens_labeled) {
    throw ConfigError("min_tokens_unlabeled must be >= min_tokens_labeled");
  }
  if (!(max_doc_frequency_fraction > 0.0) || max_doc_frequency_fraction > 1.0) {
    throw ConfigError("max_doc_frequency_fraction must be in (0, 1]");
  }
  if (min_doc_frequency < 1) {
    throw ConfigError("min_doc_frequency must be >= 1");
  }
}

namespace {

bool is_continuation(std::string_view text, std::size_t i) {
  return i < text.size() &&
         (static_cast<unsigned char>(text[i]) & 0xC0) == 0x80;
}

// Minimal UTF-8 decoding; malformed bytes decode to a replacement that the
// letter filter turns into a separator.
std::vector<std::uint32_t> decode_utf8(std::string_view text) {
  std::vector<std::uint32_t> cps;
  cps.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const unsigned char b0 = static_cast<unsigned char>(text[i]);
    std::uint32_t cp = 0xFFFD;
    std::size_t len = 1;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 >> 5) == 0x6 && is_continuation(text, i + 1)) {
      cp = (b0 & 0x1F) << 6 | (static_cast<unsigned char>(text[i + 1]) & 0x3F);
      len = 2;
    } else if ((b0 >> 4) == 0xE && is_continuation(text, i + 1) &&
               is_continuation(text, i + 2)) {
      cp = (b0 & 0x0F) << 12 |
           (static_cast<unsigned char>(text[i + 1]) & 0x3F) << 6 |
           (static_cast<unsigned char>(text[i + 2]) & 0x3F);
      len = 3;
    } else if ((b0 >> 3) == 0x1E && is_continuation(text, i + 1) &&
               is_continuation(text, i + 2) && is_continuation(text, i + 3)) {
      cp = (b0 & 0x07) << 18 |
           (static_cast<unsigned char>(text[i + 1]) & 0x3F) << 12 |
           (static_cast<unsigned char>(text[i + 2]) & 0x3F) << 6 |
           (static_cast<unsigned char>(text[i + 3]) & 0x3F);
      len = 4;
    }
    cps.push_back(cp);
    i += len;
  }
  return cps;
}

void encode_utf8(std::uint32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// ASCII plus Latin-1 / Latin Extended-A lowercasing; enough for the German and
// western-European text this pipeline targets. Other scripts pass through and
// are later dropped by the letter filter.
std::uint32_t lower_cp(std::uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp == 0x1E9E) return 0xDF;  // capital eszett
  if (cp >= 0x100 && cp <= 0x137 && cp % 2 == 0) return cp + 1;
  if (cp >= 0x139 && cp <= 0x148 && cp % 2 == 1) return cp + 1;
  if (cp >= 0x14A && cp <= 0x177 && cp % 2 == 0) return cp + 1;
  if (cp == 0x178) return 0xFF;  // Y with diaeresis
  if (cp >= 0x179 && cp <= 0x17E && cp % 2 == 1) return cp + 1;
  return cp;
}

bool is_letter_cp(std::uint32_t cp) {
  if (cp >= 'a' && cp <= 'z') return true;
  if (cp == 0xDF) return true;                           // eszett
  if (cp >= 0xE0 && cp <= 0xFF && cp != 0xF7) return true;  // Latin-1 letters
  if (cp >= 0x100 && cp <= 0x17F) return true;           // Latin Extended-A
  return false;
}

bool is_space_byte(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_url_token(std::string_view token) {
  if (token.substr(0, 4) == "www.") return true;
  // scheme prefix: one or more [a-z0-9+.-] starting with a letter, then "://"
  const std::size_t sep = token.find("://");
  if (sep == std::string_view::npos || sep == 0) return false;
  if (!(token[0] >= 'a' && token[0] <= 'z')) return false;
  for (std::size_t i = 1; i < sep; ++i) {
    const char c = token[i];
    const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                    c == '+' || c == '.' || c == '-';
    if (!ok) return false;
  }
  return true;
}

bool is_handle_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

}  // namespace

std::string normalize_text(std::string_view raw,
                           const PreprocessConfig& config) {
  // Lowercase and (optionally) transliterate on code points.
  std::string lowered;
  lowered.reserve(raw.size());
  for (std::uint32_t cp : decode_utf8(raw)) {
    cp = lower_cp(cp);
    if (config.transliterate_umlauts) {
      switch (cp) {
        case 0xE4: lowered += "ae"; continue;  // a-umlaut
        case 0xF6: lowered += "oe"; continue;  // o-umlaut
        case 0xFC: lowered += "ue"; continue;  // u-umlaut
        case 0xDF: lowered += "ss"; continue;  // eszett
        default: break;
      }
    }
    encode_utf8(cp, lowered);
  }

  // Drop URL tokens, then strip @-handles inside what remains.
  std::string cleaned;
  cleaned.reserve(lowered.size());
  std::size_t i = 0;
  while (i < lowered.size()) {
    if (is_space_byte(lowered[i])) {
      cleaned.push_back(lowered[i]);
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < lowered.size() && !is_space_byte(lowered[end])) ++end;
    const std::string_view token(&lowered[i], end - i);
    if (!is_url_token(token)) {
      for (std::size_t k = 0; k < token.size();) {
        if (token[k] == '@') {
          ++k;
          while (k < token.size() && is_handle_char(token[k])) ++k;
          continue;
        }
        cleaned.push_back(token[k]);
        ++k;
      }
    }
    i = end;
  }

  // Keep letters, turn everything else into a separator, collapse whitespace.
  std::string out;
  out.reserve(cleaned.size());
  bool pending_space = false;
  for (std::uint32_t cp : decode_utf8(cleaned)) {
    if (is_letter_cp(cp)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      encode_utf8(cp, out);
    } else {
      pending_space = true;
    }
  }
  return out;
}

TokenizeResult tokenize_and_filter(std::string_view normalized,
                                   const PreprocessConfig& config,
                                   DocRole role) {
  TokenizeResult result;
  std::size_t i = 0;
  while (i < normalized.size()) {
    while (i < normalized.size() && is_space_byte(normalized[i])) ++i;
    std::size_t end = i;
    while (end < normalized.size() && !is_space_byte(normalized[end])) ++end;
    if (end > i) {
      std::string term(normalized.substr(i, end - i));
      if (!config.stopwords.count(term) && !config.custom_stopwords.count(term) &&
          !config.name_blocklist.count(term)) {
        result.terms.push_back(std::move(term));
      }
    }
    i = end;
  }
  const int minimum = role == DocRole::labeled ? config.min_tokens_labeled
                                               : config.min_tokens_unlabeled;
  if (result.terms.empty()) {
    result.rejected = RejectReason::empty;
    result.terms.clear();
  } else if (result.terms.size() < static_cast<std::size_t>(minimum)) {
    result.rejected = RejectReason::too_short;
  }
  return result;
}

}  // namespace agenda::text
