#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agenda/text/records.hpp"

namespace agenda::text {

// Maps hierarchical topic codes to seed topics. A pattern is a digit string
// with trailing wildcard positions written X ("431X" matches 4310..4319);
// several patterns may share one label. Topic ids are 1-based, assigned by
// first appearance of a label in the scheme file.
class SeedScheme {
 public:
  struct Rule {
    std::string pattern;
    int topic_id = 0;
  };

  // Validates patterns and pairwise non-overlap; throws ConfigError.
  static SeedScheme from_rows(
      const std::vector<std::pair<std::string, std::string>>& rows);

  int topic_count() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int topic_id) const {
    return labels_.at(static_cast<std::size_t>(topic_id - 1));
  }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Rule>& rules() const { return rules_; }

  // Digit-wise match with X as wildcard; nullopt when no pattern matches.
  std::optional<int> match(std::string_view code) const;

 private:
  std::vector<Rule> rules_;
  std::vector<std::string> labels_;
};

// Two-column delimited text: pattern <TAB> label. '#' lines are comments.
SeedScheme load_seed_scheme(const std::string& path);

// Seed topic for a labeled record, nullopt when its code matches no pattern
// (such records are excluded upstream, with the reason logged).
std::optional<int> assign_seed_topic(const RawRecord& record,
                                     const SeedScheme& scheme);

}  // namespace agenda::text
