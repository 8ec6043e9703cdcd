#pragma once

#include <optional>
#include <string>
#include <vector>

#include "agenda/analytics/regression.hpp"
#include "agenda/analytics/similarity.hpp"
#include "agenda/core/jsonl.hpp"
#include "agenda/model/params.hpp"
#include "agenda/text/normalize.hpp"

namespace agenda::app {

struct BalancePair {
  std::string target;
  std::string pool;
};

struct AnalyticsOptions {
  bool prune = true;
  analytics::HcFlavor hc = analytics::HcFlavor::hc1;
  int top_n = 10;
};

// Flag overrides; flags win over the config file and the merged result is
// what gets hashed.
struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> sweeps;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<std::string> likelihood_mode;
  std::optional<std::string> hc;
  std::optional<std::string> out_dir;
};

struct RunConfig {
  std::string records_path;
  std::string stopwords_path;          // optional, empty = none
  std::string custom_stopwords_path;   // optional
  std::string name_blocklist_path;     // optional
  std::string seed_scheme_path;
  std::string topic_meta_path;         // optional until analyze
  std::string out_dir;

  std::vector<analytics::CorpusAttributes> corpora;
  std::vector<BalancePair> balance;

  text::PreprocessConfig preprocess;   // word sets loaded from the files above
  model::ModelParams model;
  AnalyticsOptions analytics_options;

  std::string config_hash;  // canonical fingerprint, includes input contents
  std::string run_id;       // equal to config_hash; stamps every output

  // Parses, merges overrides, loads word lists, validates paths and corpus
  // attributes, computes the canonical hash. Throws ConfigError.
  static RunConfig load(const std::string& path, const CliOverrides& overrides);

  const analytics::CorpusAttributes* labeled_corpus() const;
  FileHeader make_header(const std::string& format) const;

  // Derived output locations.
  std::string tokens_path() const;
  std::string vocabulary_path() const;
  std::string state_path() const;
  std::string diagnostics_path() const;
};

}  // namespace agenda::app
