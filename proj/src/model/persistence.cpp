#include "agenda/model/persistence.hpp"

#include <algorithm>
#include <unordered_map>

#include "agenda/core/errors.hpp"
#include "agenda/core/hash.hpp"

namespace agenda::model {

namespace {

constexpr int kStateFormatVersion = 1;

Json params_to_json(const ModelParams& params) {
  return Json{{"alpha", params.alpha},
              {"beta", params.beta},
              {"sweeps", params.sweeps},
              {"likelihood_mode", to_string(params.likelihood_mode)},
              {"rng_seed", params.rng_seed},
              {"shuffle_each_sweep", params.shuffle_each_sweep}};
}

ModelParams params_from_json(const Json& j) {
  ModelParams params;
  params.alpha = j.at("alpha").get<double>();
  params.beta = j.at("beta").get<double>();
  params.sweeps = j.at("sweeps").get<int>();
  params.likelihood_mode =
      likelihood_mode_from_string(j.at("likelihood_mode").get<std::string>());
  params.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  params.shuffle_each_sweep = j.at("shuffle_each_sweep").get<bool>();
  return params;
}

}  // namespace

void save_model_state(const std::string& path, const ModelState& state,
                      const Rng& rng, int completed_sweeps,
                      std::uint64_t vocab_hash, const FileHeader& header) {
  FileHeader h = header;
  h.format = "agenda-state";
  h.version = kStateFormatVersion;
  // The persisted sweep setting describes this state: a resumed chain and an
  // uninterrupted one that reached the same sweep produce identical files.
  ModelParams persisted = state.params();
  persisted.sweeps = std::max(completed_sweeps, 1);
  h.extra["params"] = params_to_json(persisted);
  h.extra["vocab_size"] = state.vocab_size();
  h.extra["seed_topics"] = state.seed_topic_count();
  h.extra["vocab_hash"] = hex64(vocab_hash);
  h.extra["completed_sweeps"] = completed_sweeps;
  h.extra["next_topic_id"] = state.next_topic_id();
  h.extra["rng"] = rng.serialize();
  h.extra["corpora"] = state.corpus_tags();

  JsonlWriter writer(path, h);
  for (const TopicCounts& topic : state.topics()) {
    TopicTermCounts counts = state.term_counts(topic.id);
    Json terms = Json::array();
    // Merge both maps in ascending term order: [term, labeled, unlabeled].
    auto g = counts.labeled.begin();
    auto m = counts.unlabeled.begin();
    while (g != counts.labeled.end() || m != counts.unlabeled.end()) {
      std::uint32_t term;
      std::int64_t labeled = 0, unlabeled = 0;
      if (m == counts.unlabeled.end() ||
          (g != counts.labeled.end() && g->first <= m->first)) {
        term = g->first;
        labeled = g->second;
        if (m != counts.unlabeled.end() && m->first == term) {
          unlabeled = m->second;
          ++m;
        }
        ++g;
      } else {
        term = m->first;
        unlabeled = m->second;
        ++m;
      }
      terms.push_back(Json::array({term, labeled, unlabeled}));
    }
    Json per_corpus = Json::object();
    for (std::size_t c = 0; c < state.corpus_tags().size(); ++c) {
      per_corpus[state.corpus_tags()[c]] = topic.per_corpus_docs[c];
    }
    writer.write(Json{{"topic", topic.id},
                      {"seed", topic.is_seed},
                      {"docs", topic.doc_count},
                      {"docs_by_corpus", per_corpus},
                      {"tokens_labeled", topic.token_total_labeled},
                      {"tokens_unlabeled", topic.token_total_unlabeled},
                      {"terms", terms}});
  }
  for (std::size_t i = 0; i < state.document_count(); ++i) {
    writer.write(Json{{"doc", state.token_document(i).id},
                      {"topic", state.assignment(i)}});
  }
  writer.close();
}

SavedStateInfo read_state_info(const std::string& path,
                               std::optional<FileHeader>* header) {
  JsonlReader reader(path);
  if (!reader.header() || reader.header()->format != "agenda-state") {
    throw DataError(path + ": not a model state file");
  }
  if (reader.header()->version != kStateFormatVersion) {
    throw DataError(path + ": unsupported state file version " +
                    std::to_string(reader.header()->version));
  }
  if (header) *header = reader.header();
  const Json& extra = reader.header()->extra;
  SavedStateInfo info;
  info.params = params_from_json(extra.at("params"));
  info.vocab_size = extra.at("vocab_size").get<std::uint32_t>();
  info.seed_topic_count = extra.at("seed_topics").get<int>();
  info.vocab_hash =
      std::stoull(extra.at("vocab_hash").get<std::string>(), nullptr, 16);
  info.completed_sweeps = extra.at("completed_sweeps").get<int>();
  return info;
}

LoadedState load_model_state(const std::string& path,
                             std::vector<text::TokenDocument> docs) {
  JsonlReader reader(path);
  if (!reader.header() || reader.header()->format != "agenda-state") {
    throw DataError(path + ": not a model state file");
  }
  if (reader.header()->version != kStateFormatVersion) {
    throw DataError(path + ": unsupported state file version " +
                    std::to_string(reader.header()->version));
  }
  const Json& extra = reader.header()->extra;
  SavedStateInfo info;
  info.params = params_from_json(extra.at("params"));
  info.vocab_size = extra.at("vocab_size").get<std::uint32_t>();
  info.seed_topic_count = extra.at("seed_topics").get<int>();
  info.vocab_hash =
      std::stoull(extra.at("vocab_hash").get<std::string>(), nullptr, 16);
  info.completed_sweeps = extra.at("completed_sweeps").get<int>();
  Rng rng = Rng::deserialize(extra.at("rng").get<std::string>());

  std::vector<Json> topic_rows;
  std::unordered_map<std::string, int> assignments;
  Json j;
  while (reader.next(j)) {
    if (j.contains("terms")) {
      topic_rows.push_back(j);
    } else {
      assignments[j.at("doc").get<std::string>()] = j.at("topic").get<int>();
    }
  }

  ModelState state(std::move(docs), info.params, info.vocab_size,
                   info.seed_topic_count);

  // Replay: place documents in stored-id order so new topics are recreated
  // with their original ids. Labeled docs go first (they pin seed topics).
  std::vector<std::pair<int, std::size_t>> placement;
  placement.reserve(state.document_count());
  for (std::size_t i = 0; i < state.document_count(); ++i) {
    const auto& doc = state.token_document(i);
    auto it = assignments.find(doc.id);
    if (it == assignments.end()) {
      throw DataError(path + ": no stored assignment for document " + doc.id);
    }
    if (it->second == 0) {
      throw DataError(path + ": document " + doc.id + " stored unassigned");
    }
    placement.emplace_back(it->second, i);
  }
  if (assignments.size() != state.document_count()) {
    throw DataError(path + ": stored assignments do not match the documents");
  }
  std::stable_sort(placement.begin(), placement.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [topic_id, index] : placement) {
    if (state.document(index).labeled()) {
      if (topic_id != state.document(index).seed_topic) {
        throw InvariantError(path + ": labeled document " +
                             state.token_document(index).id +
                             " stored off its seed topic");
      }
      state.place_document(index, topic_id);
    } else {
      state.place_document(index, topic_id);
    }
  }

  state.restore_next_topic_id(extra.at("next_topic_id").get<int>());

  // Replay verification: every stored table must be reproduced exactly.
  if (topic_rows.size() != static_cast<std::size_t>(state.live_topic_count())) {
    throw InvariantError(path + ": stored " + std::to_string(topic_rows.size()) +
                         " topics but replay produced " +
                         std::to_string(state.live_topic_count()));
  }
  for (const Json& row : topic_rows) {
    const int topic_id = row.at("topic").get<int>();
    if (!state.topic_live(topic_id)) {
      throw InvariantError(path + ": stored topic " + std::to_string(topic_id) +
                           " missing after replay");
    }
    const TopicCounts& topic = state.topic(topic_id);
    if (topic.is_seed != row.at("seed").get<bool>() ||
        topic.doc_count != row.at("docs").get<std::int64_t>() ||
        topic.token_total_labeled != row.at("tokens_labeled").get<std::int64_t>() ||
        topic.token_total_unlabeled !=
            row.at("tokens_unlabeled").get<std::int64_t>()) {
      throw InvariantError(path + ": replay mismatch in topic " +
                           std::to_string(topic_id) + " tallies");
    }
    for (const auto& [tag, count] : row.at("docs_by_corpus").items()) {
      const std::int32_t c = state.corpus_index(tag);
      if (c < 0 || topic.per_corpus_docs[static_cast<std::size_t>(c)] !=
                       count.get<std::int64_t>()) {
        throw InvariantError(path + ": replay mismatch in topic " +
                             std::to_string(topic_id) + " corpus counts");
      }
    }
    TopicTermCounts replayed = state.term_counts(topic_id);
    const Json& terms = row.at("terms");
    std::size_t stored_entries = 0;
    for (const Json& cell : terms) {
      const std::uint32_t term = cell.at(0).get<std::uint32_t>();
      const std::int64_t labeled = cell.at(1).get<std::int64_t>();
      const std::int64_t unlabeled = cell.at(2).get<std::int64_t>();
      if (labeled > 0) ++stored_entries;
      if (unlabeled > 0) ++stored_entries;
      const auto g = replayed.labeled.find(term);
      const auto m = replayed.unlabeled.find(term);
      const std::int64_t got_g = g == replayed.labeled.end() ? 0 : g->second;
      const std::int64_t got_m = m == replayed.unlabeled.end() ? 0 : m->second;
      if (got_g != labeled || got_m != unlabeled) {
        throw InvariantError(path + ": replay mismatch at topic " +
                             std::to_string(topic_id) + " term " +
                             std::to_string(term));
      }
    }
    if (stored_entries != replayed.labeled.size() + replayed.unlabeled.size()) {
      throw InvariantError(path + ": replay produced extra term counts in topic " +
                           std::to_string(topic_id));
    }
  }

  return LoadedState{std::move(state), std::move(rng), info};
}

}  // namespace agenda::model
