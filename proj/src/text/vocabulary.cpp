#include "agenda/text/vocabulary.hpp"

#include <algorithm>
#include <unordered_set>

#include "agenda/core/errors.hpp"
#include "agenda/core/hash.hpp"

namespace agenda::text {

VocabularyIndex VocabularyIndex::from_terms(std::vector<std::string> terms) {
  VocabularyIndex v;
  v.terms_ = std::move(terms);
  v.index_.reserve(v.terms_.size());
  for (std::uint32_t i = 0; i < v.terms_.size(); ++i) {
    auto [it, inserted] = v.index_.emplace(v.terms_[i], i);
    if (!inserted) {
      throw DataError("duplicate vocabulary term: " + v.terms_[i]);
    }
  }
  return v;
}

std::optional<std::uint32_t> VocabularyIndex::id_of(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t VocabularyIndex::content_hash() const {
  std::uint64_t state = kFnv64Offset;
  for (const std::string& t : terms_) {
    state = fnv1a64(t, state);
    state = fnv1a64(std::string_view("\n", 1), state);
  }
  return state;
}

void VocabularyIndex::save(const std::string& path,
                           const FileHeader& header) const {
  JsonlWriter writer(path, header);
  for (std::uint32_t i = 0; i < terms_.size(); ++i) {
    writer.write(Json{{"id", i}, {"term", terms_[i]}});
  }
  writer.close();
}

VocabularyIndex VocabularyIndex::load(const std::string& path,
                                      std::optional<FileHeader>* header) {
  JsonlReader reader(path);
  if (header) *header = reader.header();
  std::vector<std::string> terms;
  Json j;
  while (reader.next(j)) {
    const std::uint32_t id = j.at("id").get<std::uint32_t>();
    if (id != terms.size()) {
      throw DataError(path + ": vocabulary ids must be dense and ordered");
    }
    terms.push_back(j.at("term").get<std::string>());
  }
  return from_terms(std::move(terms));
}

VocabularyBuildResult build_vocabulary(std::vector<PendingDoc> docs,
                                       const PreprocessConfig& config) {
  config.validate();
  VocabularyBuildResult result;

  {
    std::unordered_set<std::string> seen;
    for (const PendingDoc& doc : docs) {
      for (const std::string& t : doc.terms) seen.insert(t);
    }
    result.terms_seen = seen.size();
  }

  // Iterate document-frequency pruning and length re-filtering to a fixed
  // point: dropping a document lowers frequencies, which can orphan terms.
  bool changed = true;
  while (changed && !docs.empty()) {
    changed = false;

    std::unordered_map<std::string, std::size_t> df;
    for (const PendingDoc& doc : docs) {
      std::unordered_set<std::string_view> distinct;
      for (const std::string& t : doc.terms) distinct.insert(t);
      for (std::string_view t : distinct) df[std::string(t)] += 1;
    }
    const double high_cutoff =
        std::max(config.max_doc_frequency_fraction *
                     static_cast<double>(docs.size()),
                 static_cast<double>(config.min_doc_frequency));

    std::unordered_set<std::string> dropped;
    for (const auto& [term, frequency] : df) {
      if (frequency < static_cast<std::size_t>(config.min_doc_frequency)) {
        dropped.insert(term);
        ++result.terms_dropped_rare;
        changed = true;
      } else if (static_cast<double>(frequency) > high_cutoff) {
        dropped.insert(term);
        ++result.terms_dropped_frequent;
        changed = true;
      }
    }

    std::vector<PendingDoc> kept;
    kept.reserve(docs.size());
    for (PendingDoc& doc : docs) {
      if (!dropped.empty()) {
        std::erase_if(doc.terms, [&](const std::string& t) {
          return dropped.count(t) > 0;
        });
      }
      const int minimum = doc.labeled() ? config.min_tokens_labeled
                                        : config.min_tokens_unlabeled;
      if (doc.terms.size() < static_cast<std::size_t>(minimum)) {
        ++result.docs_rejected;
        changed = true;
      } else {
        kept.push_back(std::move(doc));
      }
    }
    docs = std::move(kept);
  }

  if (docs.empty()) {
    throw ConfigError(
        "vocabulary construction rejected every document; "
        "thresholds are too aggressive for this corpus");
  }

  // Assign ids by first occurrence; new terms within one document are ordered
  // lexicographically.
  std::vector<std::string> ordered;
  std::unordered_map<std::string, std::uint32_t> ids;
  for (const PendingDoc& doc : docs) {
    std::vector<std::string> fresh;
    for (const std::string& t : doc.terms) {
      if (!ids.count(t)) {
        ids.emplace(t, 0);  // placeholder, fixed below
        fresh.push_back(t);
      }
    }
    std::sort(fresh.begin(), fresh.end());
    for (std::string& t : fresh) {
      ids[t] = static_cast<std::uint32_t>(ordered.size());
      ordered.push_back(std::move(t));
    }
  }
  result.vocabulary = VocabularyIndex::from_terms(std::move(ordered));

  result.documents.reserve(docs.size());
  for (PendingDoc& doc : docs) {
    TokenDocument out;
    out.id = std::move(doc.id);
    out.corpus = std::move(doc.corpus);
    out.seed_topic = doc.seed_topic;
    out.timestamp = std::move(doc.timestamp);
    out.stratum = std::move(doc.stratum);
    out.tokens.reserve(doc.terms.size());
    for (const std::string& t : doc.terms) {
      out.tokens.push_back(ids.at(t));
    }
    result.documents.push_back(std::move(out));
  }
  return result;
}

}  // namespace agenda::text
