#include "agenda/model/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "agenda/core/errors.hpp"

namespace agenda::model {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

void ModelParams::validate() const {
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (!(beta > 0.0)) throw ConfigError("beta must be positive");
  if (sweeps < 1) throw ConfigError("sweeps must be >= 1");
}

const char* to_string(LikelihoodMode mode) {
  return mode == LikelihoodMode::paper_approximate ? "paper-approximate"
                                                   : "exact-collapsed";
}

LikelihoodMode likelihood_mode_from_string(std::string_view name) {
  if (name == "paper-approximate") return LikelihoodMode::paper_approximate;
  if (name == "exact-collapsed") return LikelihoodMode::exact_collapsed;
  throw ConfigError("unknown likelihood mode: " + std::string(name));
}

ModelState::ModelState(std::vector<text::TokenDocument> docs,
                       ModelParams params, std::uint32_t vocab_size,
                       int seed_topic_count)
    : docs_(std::move(docs)),
      params_(params),
      vocab_size_(vocab_size),
      seed_topic_count_(seed_topic_count) {
  params_.validate();
  if (vocab_size_ == 0) throw DataError("empty vocabulary");
  if (seed_topic_count_ < 0) throw DataError("negative seed topic count");

  log_beta_ = std::log(params_.beta);
  log_vocab_beta_ = std::log(static_cast<double>(vocab_size_) * params_.beta);
  log_vocab_ = std::log(static_cast<double>(vocab_size_));
  log_alpha_ = std::log(params_.alpha);

  term_rows_.resize(vocab_size_);
  assignment_.assign(docs_.size(), 0);

  compact_.resize(docs_.size());
  for (std::size_t i = 0; i < docs_.size(); ++i) {
    const text::TokenDocument& doc = docs_[i];
    if (doc.tokens.empty()) {
      throw DataError("document " + doc.id + " has no tokens");
    }
    Document& c = compact_[i];
    c.token_count = static_cast<std::int32_t>(doc.tokens.size());
    std::vector<std::uint32_t> sorted = doc.tokens;
    std::sort(sorted.begin(), sorted.end());
    for (std::uint32_t t : sorted) {
      if (t >= vocab_size_) {
        throw DataError("document " + doc.id + " token id " +
                        std::to_string(t) + " outside vocabulary of size " +
                        std::to_string(vocab_size_));
      }
      if (!c.term_counts.empty() && c.term_counts.back().first == t) {
        c.term_counts.back().second += 1;
      } else {
        c.term_counts.emplace_back(t, 1);
      }
    }
    total_tokens_ += c.token_count;

    auto corpus_it =
        std::find(corpus_tags_.begin(), corpus_tags_.end(), doc.corpus);
    if (corpus_it == corpus_tags_.end()) {
      corpus_tags_.push_back(doc.corpus);
      c.corpus = static_cast<std::int32_t>(corpus_tags_.size() - 1);
    } else {
      c.corpus =
          static_cast<std::int32_t>(corpus_it - corpus_tags_.begin());
    }

    if (doc.seed_topic) {
      if (*doc.seed_topic < 1 || *doc.seed_topic > seed_topic_count_) {
        throw DataError("document " + doc.id + " seed topic " +
                        std::to_string(*doc.seed_topic) + " outside [1.." +
                        std::to_string(seed_topic_count_) + "]");
      }
      c.seed_topic = *doc.seed_topic;
      if (labeled_corpus_ == -1) {
        labeled_corpus_ = c.corpus;
      } else if (labeled_corpus_ != c.corpus) {
        throw DataError("labeled documents span more than one corpus");
      }
    } else {
      unlabeled_order_.push_back(i);
    }
  }

  // Seed topics are live from birth, before any document arrives.
  id_to_slot_.assign(static_cast<std::size_t>(seed_topic_count_) + 1, -1);
  for (int id = 1; id <= seed_topic_count_; ++id) {
    create_topic(id, /*is_seed=*/true);
  }
  next_topic_id_ = seed_topic_count_ + 1;
}

int ModelState::topic_slot(int topic_id) const {
  if (topic_id < 1 || static_cast<std::size_t>(topic_id) >= id_to_slot_.size()) {
    return -1;
  }
  return id_to_slot_[static_cast<std::size_t>(topic_id)];
}

const TopicCounts& ModelState::topic(int topic_id) const {
  const int slot = topic_slot(topic_id);
  if (slot < 0) {
    throw InvariantError("topic " + std::to_string(topic_id) + " is not live");
  }
  return topics_[static_cast<std::size_t>(slot)];
}

std::int64_t ModelState::term_count(int topic_id, std::uint32_t term) const {
  for (const TermTopicEntry& e : term_rows_[term]) {
    if (e.topic_id == topic_id) return e.labeled + e.unlabeled;
  }
  return 0;
}

TopicTermCounts ModelState::term_counts(int topic_id) const {
  TopicTermCounts out;
  for (std::uint32_t w = 0; w < vocab_size_; ++w) {
    for (const TermTopicEntry& e : term_rows_[w]) {
      if (e.topic_id != topic_id) continue;
      if (e.labeled > 0) out.labeled[w] = e.labeled;
      if (e.unlabeled > 0) out.unlabeled[w] = e.unlabeled;
    }
  }
  return out;
}

std::int32_t ModelState::corpus_index(std::string_view tag) const {
  for (std::size_t i = 0; i < corpus_tags_.size(); ++i) {
    if (corpus_tags_[i] == tag) return static_cast<std::int32_t>(i);
  }
  return -1;
}

void ModelState::refresh_topic_caches(TopicCounts& topic) {
  topic.log_doc_count =
      topic.doc_count > 0 ? std::log(static_cast<double>(topic.doc_count))
                          : kNegInf;
  topic.log_token_denominator =
      std::log(static_cast<double>(topic.token_total()) +
               static_cast<double>(vocab_size_) * params_.beta);
}

TopicCounts& ModelState::create_topic(int topic_id, bool is_seed) {
  TopicCounts topic;
  topic.id = topic_id;
  topic.is_seed = is_seed;
  topic.per_corpus_docs.assign(corpus_tags_.size(), 0);
  refresh_topic_caches(topic);
  if (static_cast<std::size_t>(topic_id) >= id_to_slot_.size()) {
    id_to_slot_.resize(static_cast<std::size_t>(topic_id) + 1, -1);
  }
  id_to_slot_[static_cast<std::size_t>(topic_id)] =
      static_cast<std::int32_t>(topics_.size());
  topics_.push_back(std::move(topic));
  return topics_.back();
}

void ModelState::erase_topic(int topic_id) {
  const int slot = topic_slot(topic_id);
  topics_.erase(topics_.begin() + slot);
  id_to_slot_[static_cast<std::size_t>(topic_id)] = -1;
  for (std::size_t s = static_cast<std::size_t>(slot); s < topics_.size(); ++s) {
    id_to_slot_[static_cast<std::size_t>(topics_[s].id)] =
        static_cast<std::int32_t>(s);
  }
}

void ModelState::remove_document(std::size_t index) {
  const int topic_id = assignment_[index];
  if (topic_id == 0) {
    throw InvariantError("remove_document on unassigned document");
  }
  const Document& doc = compact_[index];
  if (doc.labeled()) {
    throw InvariantError("labeled assignments are immutable");
  }
  const int slot = topic_slot(topic_id);
  TopicCounts& topic = topics_[static_cast<std::size_t>(slot)];

  topic.doc_count -= 1;
  topic.per_corpus_docs[static_cast<std::size_t>(doc.corpus)] -= 1;
  topic.token_total_unlabeled -= doc.token_count;

  for (const auto& [term, count] : doc.term_counts) {
    TermRow& row = term_rows_[term];
    for (std::size_t e = 0; e < row.size(); ++e) {
      if (row[e].topic_id != topic_id) continue;
      row[e].unlabeled -= count;
      if (row[e].labeled == 0 && row[e].unlabeled == 0) {
        row[e] = row.back();
        row.pop_back();
      } else {
        row[e].log_smoothed =
            std::log(static_cast<double>(row[e].labeled + row[e].unlabeled) +
                     params_.beta);
      }
      break;
    }
  }

  assignment_[index] = 0;
  --assigned_count_;

  if (topic.doc_count == 0 && !topic.is_seed) {
    erase_topic(topic_id);  // dead immediately; its rows are already empty
  } else {
    refresh_topic_caches(topic);
  }
}

void ModelState::place_document(std::size_t index, int topic_id) {
  if (assignment_[index] != 0) {
    throw InvariantError("place_document on an assigned document");
  }
  const Document& doc = compact_[index];
  if (doc.labeled() && topic_id != doc.seed_topic) {
    throw InvariantError("labeled document " + docs_[index].id +
                         " can only occupy its seed topic");
  }
  int slot = topic_slot(topic_id);
  if (slot < 0) {
    if (topic_id < next_topic_id_) {
      throw InvariantError("cannot place into dead topic " +
                           std::to_string(topic_id));
    }
    create_topic(topic_id, /*is_seed=*/false);
    next_topic_id_ = topic_id + 1;
    slot = topic_slot(topic_id);
  }
  TopicCounts& topic = topics_[static_cast<std::size_t>(slot)];

  topic.doc_count += 1;
  topic.per_corpus_docs[static_cast<std::size_t>(doc.corpus)] += 1;
  if (doc.labeled()) {
    topic.token_total_labeled += doc.token_count;
  } else {
    topic.token_total_unlabeled += doc.token_count;
  }
  refresh_topic_caches(topic);

  for (const auto& [term, count] : doc.term_counts) {
    TermRow& row = term_rows_[term];
    TermTopicEntry* entry = nullptr;
    for (TermTopicEntry& e : row) {
      if (e.topic_id == topic_id) {
        entry = &e;
        break;
      }
    }
    if (entry == nullptr) {
      row.push_back(TermTopicEntry{topic_id, 0, 0, 0.0});
      entry = &row.back();
    }
    if (doc.labeled()) {
      entry->labeled += count;
    } else {
      entry->unlabeled += count;
    }
    entry->log_smoothed = std::log(
        static_cast<double>(entry->labeled + entry->unlabeled) + params_.beta);
  }

  assignment_[index] = topic_id;
  ++assigned_count_;
}

void ModelState::restore_next_topic_id(int id) {
  if (id < next_topic_id_) {
    throw InvariantError("next topic id cannot move backwards");
  }
  next_topic_id_ = id;
}

std::optional<std::string> ModelState::verify_consistency() const {
  struct Tally {
    std::int64_t docs = 0;
    std::int64_t tokens_labeled = 0;
    std::int64_t tokens_unlabeled = 0;
    std::vector<std::int64_t> per_corpus;
    std::map<std::uint32_t, std::pair<std::int64_t, std::int64_t>> terms;
  };
  std::map<int, Tally> recount;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < compact_.size(); ++i) {
    const int topic_id = assignment_[i];
    const Document& doc = compact_[i];
    if (doc.labeled() && topic_id != doc.seed_topic) {
      return "labeled document " + docs_[i].id + " assigned to topic " +
             std::to_string(topic_id) + " instead of its seed topic " +
             std::to_string(doc.seed_topic);
    }
    if (topic_id == 0) continue;
    ++assigned;
    Tally& tally = recount[topic_id];
    if (tally.per_corpus.empty()) tally.per_corpus.resize(corpus_tags_.size());
    tally.docs += 1;
    tally.per_corpus[static_cast<std::size_t>(doc.corpus)] += 1;
    if (doc.labeled()) {
      tally.tokens_labeled += doc.token_count;
    } else {
      tally.tokens_unlabeled += doc.token_count;
    }
    for (const auto& [term, count] : doc.term_counts) {
      auto& cell = tally.terms[term];
      if (doc.labeled()) {
        cell.first += count;
      } else {
        cell.second += count;
      }
    }
  }

  if (assigned != assigned_count_) {
    return "assigned_count " + std::to_string(assigned_count_) +
           " but recount found " + std::to_string(assigned);
  }

  // Live topic set: every seed, plus exactly the non-empty new topics.
  for (int id = 1; id <= seed_topic_count_; ++id) {
    if (topic_slot(id) < 0) return "seed topic " + std::to_string(id) + " dead";
  }
  std::int64_t doc_total = 0;
  for (const TopicCounts& topic : topics_) {
    const Tally* tally = nullptr;
    auto it = recount.find(topic.id);
    if (it != recount.end()) tally = &it->second;
    if (tally == nullptr && !topic.is_seed) {
      return "live new topic " + std::to_string(topic.id) + " has no documents";
    }
    const std::int64_t docs = tally ? tally->docs : 0;
    const std::int64_t tl = tally ? tally->tokens_labeled : 0;
    const std::int64_t tu = tally ? tally->tokens_unlabeled : 0;
    if (topic.doc_count != docs) {
      return "topic " + std::to_string(topic.id) + " doc_count " +
             std::to_string(topic.doc_count) + " != recount " +
             std::to_string(docs);
    }
    if (topic.token_total_labeled != tl || topic.token_total_unlabeled != tu) {
      return "topic " + std::to_string(topic.id) + " token totals (" +
             std::to_string(topic.token_total_labeled) + "," +
             std::to_string(topic.token_total_unlabeled) + ") != recount (" +
             std::to_string(tl) + "," + std::to_string(tu) + ")";
    }
    for (std::size_t c = 0; c < corpus_tags_.size(); ++c) {
      const std::int64_t expect =
          tally && c < tally->per_corpus.size() ? tally->per_corpus[c] : 0;
      if (topic.per_corpus_docs[c] != expect) {
        return "topic " + std::to_string(topic.id) + " corpus '" +
               corpus_tags_[c] + "' count " +
               std::to_string(topic.per_corpus_docs[c]) + " != recount " +
               std::to_string(expect);
      }
    }
    doc_total += topic.doc_count;
  }
  for (const auto& [topic_id, tally] : recount) {
    if (topic_slot(topic_id) < 0) {
      return "documents assigned to dead topic " + std::to_string(topic_id);
    }
  }
  if (doc_total != static_cast<std::int64_t>(assigned_count_)) {
    return "sum of topic doc counts " + std::to_string(doc_total) +
           " != assigned documents " + std::to_string(assigned_count_);
  }

  // Term rows, both directions.
  std::size_t row_entries = 0;
  for (std::uint32_t w = 0; w < vocab_size_; ++w) {
    for (const TermTopicEntry& e : term_rows_[w]) {
      ++row_entries;
      if (e.labeled == 0 && e.unlabeled == 0) {
        return "empty row entry for term " + std::to_string(w) + " topic " +
               std::to_string(e.topic_id);
      }
      auto it = recount.find(e.topic_id);
      if (it == recount.end()) {
        return "row entry for dead/empty topic " + std::to_string(e.topic_id);
      }
      auto cell = it->second.terms.find(w);
      const std::int64_t g = cell == it->second.terms.end() ? 0 : cell->second.first;
      const std::int64_t m = cell == it->second.terms.end() ? 0 : cell->second.second;
      if (e.labeled != g || e.unlabeled != m) {
        return "term " + std::to_string(w) + " topic " +
               std::to_string(e.topic_id) + " counts (" +
               std::to_string(e.labeled) + "," + std::to_string(e.unlabeled) +
               ") != recount (" + std::to_string(g) + "," + std::to_string(m) +
               ")";
      }
      const double expect_log = std::log(
          static_cast<double>(e.labeled + e.unlabeled) + params_.beta);
      if (expect_log != e.log_smoothed) {
        return "stale log cache for term " + std::to_string(w) + " topic " +
               std::to_string(e.topic_id);
      }
    }
  }
  std::size_t recount_entries = 0;
  for (const auto& [topic_id, tally] : recount) {
    recount_entries += tally.terms.size();
  }
  if (row_entries != recount_entries) {
    return "row entry count " + std::to_string(row_entries) + " != recount " +
           std::to_string(recount_entries);
  }
  return std::nullopt;
}

std::size_t ModelState::count_table_bytes() const {
  std::size_t bytes = topics_.capacity() * sizeof(TopicCounts);
  for (const TopicCounts& topic : topics_) {
    bytes += topic.per_corpus_docs.capacity() * sizeof(std::int64_t);
  }
  bytes += term_rows_.capacity() * sizeof(TermRow);
  for (const TermRow& row : term_rows_) {
    bytes += row.capacity() * sizeof(TermTopicEntry);
  }
  bytes += id_to_slot_.capacity() * sizeof(std::int32_t);
  return bytes;
}

std::size_t ModelState::count_nonzero_entries() const {
  std::size_t n = 0;
  for (const TermRow& row : term_rows_) n += row.size();
  return n;
}

}  // namespace agenda::model
