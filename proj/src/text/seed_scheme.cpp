#include "agenda/text/seed_scheme.hpp"

#include <fstream>
#include <unordered_map>

#include "agenda/core/errors.hpp"

namespace agenda::text {

namespace {

bool valid_pattern(std::string_view pattern) {
  if (pattern.empty()) return false;
  std::size_t i = 0;
  while (i < pattern.size() && pattern[i] >= '0' && pattern[i] <= '9') ++i;
  if (i == 0) return false;  // at least one leading digit
  while (i < pattern.size() && pattern[i] == 'X') ++i;
  return i == pattern.size();
}

// Two patterns overlap when some code matches both.
bool patterns_overlap(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 'X' && b[i] != 'X' && a[i] != b[i]) return false;
  }
  return true;
}

}  // namespace

SeedScheme SeedScheme::from_rows(
    const std::vector<std::pair<std::string, std::string>>& rows) {
  SeedScheme scheme;
  std::unordered_map<std::string, int> label_ids;
  for (const auto& [pattern, label] : rows) {
    if (!valid_pattern(pattern)) {
      throw ConfigError("invalid seed pattern (digits then trailing X): '" +
                        pattern + "'");
    }
    if (label.empty()) {
      throw ConfigError("empty label for seed pattern '" + pattern + "'");
    }
    for (const Rule& existing : scheme.rules_) {
      if (patterns_overlap(existing.pattern, pattern)) {
        throw ConfigError("overlapping seed patterns: '" + existing.pattern +
                          "' and '" + pattern + "'");
      }
    }
    auto it = label_ids.find(label);
    int id;
    if (it == label_ids.end()) {
      scheme.labels_.push_back(label);
      id = static_cast<int>(scheme.labels_.size());
      label_ids.emplace(label, id);
    } else {
      id = it->second;
    }
    scheme.rules_.push_back(Rule{pattern, id});
  }
  if (scheme.rules_.empty()) {
    throw ConfigError("seed scheme has no rules");
  }
  return scheme;
}

std::optional<int> SeedScheme::match(std::string_view code) const {
  for (char c : code) {
    if (c < '0' || c > '9') return std::nullopt;
  }
  for (const Rule& rule : rules_) {
    if (rule.pattern.size() != code.size()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < code.size(); ++i) {
      if (rule.pattern[i] != 'X' && rule.pattern[i] != code[i]) {
        ok = false;
        break;
      }
    }
    if (ok) return rule.topic_id;
  }
  return std::nullopt;
}

SeedScheme load_seed_scheme(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open seed scheme file: " + path);
  }
  std::vector<std::pair<std::string, std::string>> rows;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_number) +
                        ": expected pattern<TAB>label");
    }
    rows.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return SeedScheme::from_rows(rows);
}

std::optional<int> assign_seed_topic(const RawRecord& record,
                                     const SeedScheme& scheme) {
  if (!record.seed_code) return std::nullopt;
  return scheme.match(*record.seed_code);
}

}  // namespace agenda::text
