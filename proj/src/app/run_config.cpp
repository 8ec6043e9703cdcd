#include "agenda/app/run_config.hpp"

#include <filesystem>
#include <fstream>

#include "agenda/core/errors.hpp"
#include "agenda/core/hash.hpp"

namespace agenda::app {

namespace {

namespace fs = std::filesystem;

void require_file(const std::string& path, const char* role) {
  if (path.empty()) {
    throw ConfigError(std::string("missing required path: ") + role);
  }
  if (!fs::exists(path)) {
    throw ConfigError(std::string(role) + " file does not exist: " + path);
  }
}

// One term per line; entries are normalized with the run's own rules so the
// lists match the token stream (e.g. umlaut entries under transliteration).
void load_word_list(const std::string& path,
                    const text::PreprocessConfig& rules,
                    std::unordered_set<std::string>* out) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open word list: " + path);
  }
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::string normalized = text::normalize_text(line, rules);
    std::size_t i = 0;
    while (i < normalized.size()) {
      std::size_t end = normalized.find(' ', i);
      if (end == std::string::npos) end = normalized.size();
      if (end > i) out->insert(normalized.substr(i, end - i));
      i = end + 1;
    }
  }
}

}  // namespace

RunConfig RunConfig::load(const std::string& path,
                          const CliOverrides& overrides) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }

  RunConfig config;
  const Json paths = j.value("paths", Json::object());
  config.records_path = paths.value("records", "");
  config.stopwords_path = paths.value("stopwords", "");
  config.custom_stopwords_path = paths.value("custom_stopwords", "");
  config.name_blocklist_path = paths.value("name_blocklist", "");
  config.seed_scheme_path = paths.value("seed_scheme", "");
  config.topic_meta_path = paths.value("topic_meta", "");
  config.out_dir = paths.value("out_dir", "out");

  for (const Json& corpus : j.value("corpora", Json::array())) {
    analytics::CorpusAttributes attributes;
    attributes.tag = corpus.at("tag").get<std::string>();
    attributes.medium = corpus.value("medium", "none");
    attributes.actor = corpus.value("actor", "");
    attributes.labeled = corpus.value("labeled", false);
    config.corpora.push_back(std::move(attributes));
  }
  for (const Json& pair : j.value("balance", Json::array())) {
    config.balance.push_back(BalancePair{pair.at("target").get<std::string>(),
                                         pair.at("pool").get<std::string>()});
  }

  const Json pre = j.value("preprocess", Json::object());
  config.preprocess.min_tokens_unlabeled = pre.value("min_tokens_unlabeled", 3);
  config.preprocess.min_tokens_labeled = pre.value("min_tokens_labeled", 1);
  config.preprocess.min_doc_frequency = pre.value("min_doc_frequency", 2);
  config.preprocess.max_doc_frequency_fraction =
      pre.value("max_doc_frequency_fraction", 0.5);
  config.preprocess.transliterate_umlauts =
      pre.value("transliterate_umlauts", true);

  const Json model = j.value("model", Json::object());
  config.model.alpha = model.value("alpha", 1.0);
  config.model.beta = model.value("beta", 1.5);
  config.model.sweeps = model.value("sweeps", 100);
  config.model.likelihood_mode = model::likelihood_mode_from_string(
      model.value("likelihood_mode", "paper-approximate"));
  config.model.rng_seed = model.value("rng_seed", std::uint64_t{0});
  config.model.shuffle_each_sweep = model.value("shuffle_each_sweep", false);

  const Json an = j.value("analytics", Json::object());
  config.analytics_options.prune = an.value("prune", true);
  config.analytics_options.hc =
      analytics::hc_flavor_from_string(an.value("hc", "HC1"));
  config.analytics_options.top_n = an.value("top_n", 10);

  // Flags win over the file.
  if (overrides.seed) config.model.rng_seed = *overrides.seed;
  if (overrides.sweeps) config.model.sweeps = *overrides.sweeps;
  if (overrides.alpha) config.model.alpha = *overrides.alpha;
  if (overrides.beta) config.model.beta = *overrides.beta;
  if (overrides.likelihood_mode) {
    config.model.likelihood_mode =
        model::likelihood_mode_from_string(*overrides.likelihood_mode);
  }
  if (overrides.hc) {
    config.analytics_options.hc =
        analytics::hc_flavor_from_string(*overrides.hc);
  }
  if (overrides.out_dir) config.out_dir = *overrides.out_dir;

  // Validation.
  config.preprocess.validate();
  config.model.validate();
  if (config.analytics_options.top_n < 0) {
    throw ConfigError("analytics.top_n must be >= 0");
  }
  require_file(config.records_path, "records");
  require_file(config.seed_scheme_path, "seed_scheme");
  for (const std::string& optional_path :
       {config.stopwords_path, config.custom_stopwords_path,
        config.name_blocklist_path}) {
    if (!optional_path.empty() && !fs::exists(optional_path)) {
      throw ConfigError("configured file does not exist: " + optional_path);
    }
  }
  // The topic metadata file is written by hand after inspecting the report,
  // so a configured-but-absent file is treated as not-yet-present. Analyze
  // still refuses to run if a retained new topic has no entry.
  if (!config.topic_meta_path.empty() && !fs::exists(config.topic_meta_path)) {
    config.topic_meta_path.clear();
  }
  if (config.corpora.empty()) {
    throw ConfigError("config lists no corpora");
  }
  int labeled_count = 0;
  for (const auto& corpus : config.corpora) {
    if (corpus.labeled) ++labeled_count;
  }
  if (labeled_count != 1) {
    throw ConfigError("exactly one corpus must be labeled, found " +
                      std::to_string(labeled_count));
  }
  for (const BalancePair& pair : config.balance) {
    auto known = [&](const std::string& tag) {
      for (const auto& corpus : config.corpora) {
        if (corpus.tag == tag) return true;
      }
      return false;
    };
    if (!known(pair.target) || !known(pair.pool)) {
      throw ConfigError("balance pair references unknown corpus: " +
                        pair.target + "/" + pair.pool);
    }
  }
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec || !fs::is_directory(config.out_dir)) {
    throw ConfigError("cannot create output directory: " + config.out_dir);
  }

  load_word_list(config.stopwords_path, config.preprocess,
                 &config.preprocess.stopwords);
  load_word_list(config.custom_stopwords_path, config.preprocess,
                 &config.preprocess.custom_stopwords);
  load_word_list(config.name_blocklist_path, config.preprocess,
                 &config.preprocess.name_blocklist);

  // Canonical form: the merged effective config plus content fingerprints of
  // every referenced input, serialized with sorted keys. Identical hash means
  // identical run inputs.
  Json canonical;
  canonical["preprocess"] = {
      {"min_tokens_unlabeled", config.preprocess.min_tokens_unlabeled},
      {"min_tokens_labeled", config.preprocess.min_tokens_labeled},
      {"min_doc_frequency", config.preprocess.min_doc_frequency},
      {"max_doc_frequency_fraction", config.preprocess.max_doc_frequency_fraction},
      {"transliterate_umlauts", config.preprocess.transliterate_umlauts}};
  canonical["model"] = {
      {"alpha", config.model.alpha},
      {"beta", config.model.beta},
      {"sweeps", config.model.sweeps},
      {"likelihood_mode", model::to_string(config.model.likelihood_mode)},
      {"rng_seed", config.model.rng_seed},
      {"shuffle_each_sweep", config.model.shuffle_each_sweep}};
  canonical["analytics"] = {
      {"prune", config.analytics_options.prune},
      {"hc", analytics::to_string(config.analytics_options.hc)},
      {"top_n", config.analytics_options.top_n}};
  Json corpora = Json::array();
  for (const auto& corpus : config.corpora) {
    corpora.push_back({{"tag", corpus.tag},
                       {"medium", corpus.medium},
                       {"actor", corpus.actor},
                       {"labeled", corpus.labeled}});
  }
  canonical["corpora"] = corpora;
  Json balance = Json::array();
  for (const BalancePair& pair : config.balance) {
    balance.push_back({{"target", pair.target}, {"pool", pair.pool}});
  }
  canonical["balance"] = balance;
  Json inputs;
  inputs["records"] = hex64(hash_file(config.records_path));
  inputs["seed_scheme"] = hex64(hash_file(config.seed_scheme_path));
  if (!config.stopwords_path.empty()) {
    inputs["stopwords"] = hex64(hash_file(config.stopwords_path));
  }
  if (!config.custom_stopwords_path.empty()) {
    inputs["custom_stopwords"] = hex64(hash_file(config.custom_stopwords_path));
  }
  if (!config.name_blocklist_path.empty()) {
    inputs["name_blocklist"] = hex64(hash_file(config.name_blocklist_path));
  }
  if (!config.topic_meta_path.empty()) {
    inputs["topic_meta"] = hex64(hash_file(config.topic_meta_path));
  }
  canonical["inputs"] = inputs;

  config.config_hash = hex64(fnv1a64(canonical.dump()));
  config.run_id = config.config_hash;
  return config;
}

const analytics::CorpusAttributes* RunConfig::labeled_corpus() const {
  for (const auto& corpus : corpora) {
    if (corpus.labeled) return &corpus;
  }
  return nullptr;
}

FileHeader RunConfig::make_header(const std::string& format) const {
  FileHeader header;
  header.format = format;
  header.config_hash = config_hash;
  header.run_id = run_id;
  header.seed = model.rng_seed;
  return header;
}

std::string RunConfig::tokens_path() const {
  return (fs::path(out_dir) / "tokens.jsonl").string();
}
std::string RunConfig::vocabulary_path() const {
  return (fs::path(out_dir) / "vocabulary.jsonl").string();
}
std::string RunConfig::state_path() const {
  return (fs::path(out_dir) / "state.jsonl").string();
}
std::string RunConfig::diagnostics_path() const {
  return (fs::path(out_dir) / "diagnostics.jsonl").string();
}

}  // namespace agenda::app
