#include "agenda/app/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "agenda/analytics/correlation.hpp"
#include "agenda/analytics/salience.hpp"
#include "agenda/analytics/topwords.hpp"
#include "agenda/analytics/volume.hpp"
#include "agenda/app/writers.hpp"
#include "agenda/core/errors.hpp"
#include "agenda/core/hash.hpp"
#include "agenda/model/persistence.hpp"
#include "agenda/model/sampler.hpp"
#include "agenda/text/pipeline.hpp"
#include "agenda/validate/suite.hpp"

namespace agenda::app {

namespace fs = std::filesystem;

namespace {

std::string out_path(const RunConfig& config, const char* name) {
  return (fs::path(config.out_dir) / name).string();
}

text::PipelineOptions pipeline_options(const RunConfig& config,
                                       const text::SeedScheme& scheme) {
  text::PipelineOptions options;
  options.preprocess = config.preprocess;
  options.labeled_corpus = config.labeled_corpus()->tag;
  options.scheme = &scheme;
  for (const BalancePair& pair : config.balance) {
    options.balance_pairs.emplace_back(pair.target, pair.pool);
  }
  options.balance_seed = config.model.rng_seed;
  return options;
}

struct TrainingInputs {
  std::vector<text::TokenDocument> docs;
  text::VocabularyIndex vocabulary;
  int seed_topics = 0;
  std::vector<std::string> seed_labels;
};

TrainingInputs read_training_inputs(const RunConfig& config,
                                    std::ostream& log) {
  TrainingInputs inputs;
  std::optional<FileHeader> tokens_header;
  inputs.docs = text::read_token_documents(config.tokens_path(), &tokens_header);
  if (!tokens_header || tokens_header->format != "agenda-tokens") {
    throw DataError(config.tokens_path() +
                    ": not a token documents file (run preprocess first)");
  }
  if (tokens_header->config_hash != config.config_hash) {
    log << "warning: " << config.tokens_path()
        << " was produced under config hash " << tokens_header->config_hash
        << ", current is " << config.config_hash << "\n";
  }
  inputs.seed_topics = tokens_header->extra.at("seed_topics").get<int>();
  inputs.seed_labels = tokens_header->extra.at("seed_labels")
                           .get<std::vector<std::string>>();

  std::optional<FileHeader> vocab_header;
  inputs.vocabulary =
      text::VocabularyIndex::load(config.vocabulary_path(), &vocab_header);
  if (inputs.docs.empty()) {
    throw DataError(config.tokens_path() + ": no documents");
  }
  return inputs;
}

// Seed labels from the scheme; new-topic labels from the metadata file when
// present.
std::map<int, std::string> topic_labels(
    const std::vector<std::string>& seed_labels,
    const analytics::TopicMetaMap& meta) {
  std::map<int, std::string> labels;
  for (std::size_t i = 0; i < seed_labels.size(); ++i) {
    labels[static_cast<int>(i) + 1] = seed_labels[i];
  }
  for (const auto& [topic_id, entry] : meta) {
    if (!labels.count(topic_id) && !entry.label.empty()) {
      labels[topic_id] = entry.label;
    }
  }
  return labels;
}

analytics::TopicMetaMap read_topic_meta(const RunConfig& config,
                                        int seed_topics) {
  analytics::TopicMetaMap meta;
  // Seeds default to the policy type; the metadata file may override (the
  // politics/polity seed topics need that for the regression dummies).
  for (int id = 1; id <= seed_topics; ++id) {
    analytics::TopicMeta entry;
    entry.topic_id = id;
    entry.origin = analytics::TopicMeta::Origin::seed;
    entry.type = analytics::TopicMeta::Type::policy;
    meta[id] = entry;
  }
  if (config.topic_meta_path.empty()) return meta;
  JsonlReader reader(config.topic_meta_path);
  Json j;
  while (reader.next(j)) {
    analytics::TopicMeta entry;
    entry.topic_id = j.at("topic").get<int>();
    entry.label = j.value("label", "");
    entry.type = analytics::topic_type_from_string(j.value("type", "policy"));
    entry.origin = entry.topic_id <= seed_topics
                       ? analytics::TopicMeta::Origin::seed
                       : analytics::TopicMeta::Origin::from_data;
    meta[entry.topic_id] = entry;
  }
  return meta;
}

}  // namespace

void cmd_preprocess(const RunConfig& config, std::ostream& log) {
  const std::vector<text::RawRecord> records =
      text::read_raw_records(config.records_path);
  if (records.empty()) {
    throw DataError("input file has no records: " + config.records_path);
  }
  const text::SeedScheme scheme = text::load_seed_scheme(config.seed_scheme_path);
  const text::PipelineResult result =
      text::run_pipeline(records, pipeline_options(config, scheme));

  FileHeader tokens_header = config.make_header("agenda-tokens");
  tokens_header.extra["seed_topics"] = scheme.topic_count();
  tokens_header.extra["seed_labels"] = scheme.labels();
  text::write_token_documents(config.tokens_path(), result.documents,
                              tokens_header);

  FileHeader vocab_header = config.make_header("agenda-vocabulary");
  vocab_header.extra["terms"] = result.vocabulary.size();
  vocab_header.extra["content_hash"] = hex64(result.vocabulary.content_hash());
  result.vocabulary.save(config.vocabulary_path(), vocab_header);

  // Machine-readable report.
  Json report;
  report["run_id"] = config.run_id;
  report["config_hash"] = config.config_hash;
  report["vocabulary"] = {
      {"terms", result.vocabulary.size()},
      {"terms_seen", result.stats.vocabulary_terms_seen},
      {"dropped_rare", result.stats.vocabulary_dropped_rare},
      {"dropped_frequent", result.stats.vocabulary_dropped_frequent},
      {"docs_rejected", result.stats.docs_rejected_by_vocabulary}};
  Json corpora = Json::object();
  for (const auto& [tag, line] : result.stats.corpora) {
    corpora[tag] = {{"records_in", line.records_in},
                    {"rejected_too_short", line.rejected_too_short},
                    {"rejected_empty", line.rejected_empty},
                    {"excluded_unmatched_code", line.excluded_unmatched_code},
                    {"documents_out", line.documents_out},
                    {"tokens_out", line.tokens_out}};
  }
  report["corpora"] = corpora;
  Json balance = Json::object();
  for (const auto& [pool, rep] : result.stats.balance) {
    Json strata = Json::object();
    for (const auto& [name, line] : rep.strata) {
      strata[name] = {{"target", line.target},
                      {"pool", line.pool},
                      {"sampled", line.sampled}};
    }
    balance[pool] = {{"strata", strata}, {"warnings", rep.warnings}};
  }
  report["balance"] = balance;
  std::ofstream report_out(out_path(config, "preprocess_report.json"),
                           std::ios::trunc);
  report_out << report.dump(2) << '\n';

  log << "preprocess: " << records.size() << " records in\n";
  for (const auto& [tag, line] : result.stats.corpora) {
    log << "  " << tag << ": " << line.documents_out << " documents, "
        << line.tokens_out << " tokens";
    if (line.excluded_unmatched_code > 0) {
      log << " (" << line.excluded_unmatched_code << " unmatched codes)";
    }
    if (line.rejected_too_short + line.rejected_empty > 0) {
      log << " (" << line.rejected_too_short + line.rejected_empty
          << " rejected)";
    }
    log << "\n";
  }
  for (const auto& [pool, rep] : result.stats.balance) {
    for (const std::string& warning : rep.warnings) {
      log << "  balance " << pool << ": " << warning << "\n";
    }
  }
  log << "  vocabulary: " << result.vocabulary.size() << " terms\n";
}

void cmd_train(const RunConfig& config, std::ostream& log,
               const std::string& resume_path) {
  TrainingInputs inputs = read_training_inputs(config, log);
  const std::uint64_t vocab_hash = inputs.vocabulary.content_hash();

  FileHeader diag_header = config.make_header("agenda-diagnostics");
  diag_header.extra["alpha"] = config.model.alpha;
  diag_header.extra["beta"] = config.model.beta;
  diag_header.extra["sweeps"] = config.model.sweeps;
  diag_header.extra["likelihood_mode"] =
      model::to_string(config.model.likelihood_mode);
  JsonlWriter diagnostics(config.diagnostics_path(), diag_header);
  auto on_sweep = [&](const model::SweepStats& stats) {
    diagnostics.write(Json{{"sweep", stats.sweep},
                           {"topics", stats.live_topics},
                           {"reassigned", stats.reassigned},
                           {"log_joint", stats.log_joint},
                           {"seconds", stats.seconds}});
    if (stats.sweep % 10 == 0 || stats.sweep == config.model.sweeps) {
      log << "  sweep " << stats.sweep << ": K=" << stats.live_topics
          << " reassigned=" << stats.reassigned
          << " log_joint=" << stats.log_joint << "\n";
    }
  };

  if (resume_path.empty()) {
    log << "train: " << inputs.docs.size() << " documents, V="
        << inputs.vocabulary.size() << ", seeds=" << inputs.seed_topics
        << ", sweeps=" << config.model.sweeps << "\n";
    model::InferenceResult result =
        model::run_inference(std::move(inputs.docs), config.model,
                             inputs.vocabulary.size(), inputs.seed_topics,
                             on_sweep);
    if (auto problem = result.state.verify_consistency()) {
      throw InvariantError("post-training consistency check failed: " +
                           *problem);
    }
    save_model_state(config.state_path(), result.state, result.rng,
                     config.model.sweeps, vocab_hash,
                     config.make_header("agenda-state"));
  } else {
    log << "train: resuming from " << resume_path << "\n";
    model::LoadedState loaded =
        model::load_model_state(resume_path, std::move(inputs.docs));
    if (loaded.info.vocab_hash != vocab_hash) {
      throw DataError("state file was trained on a different vocabulary");
    }
    if (loaded.info.params.alpha != config.model.alpha ||
        loaded.info.params.beta != config.model.beta ||
        loaded.info.params.likelihood_mode != config.model.likelihood_mode ||
        loaded.info.params.shuffle_each_sweep !=
            config.model.shuffle_each_sweep) {
      throw ConfigError(
          "cannot resume: alpha/beta/likelihood settings differ from the "
          "persisted chain");
    }
    log << "  replay verification passed (" << loaded.info.completed_sweeps
        << " sweeps recorded)\n";
    const int first = loaded.info.completed_sweeps + 1;
    model::continue_inference(loaded.state, loaded.rng, first,
                              config.model.sweeps, on_sweep);
    if (auto problem = loaded.state.verify_consistency()) {
      throw InvariantError("post-training consistency check failed: " +
                           *problem);
    }
    const int completed = std::max(config.model.sweeps,
                                   loaded.info.completed_sweeps);
    save_model_state(config.state_path(), loaded.state, loaded.rng, completed,
                     vocab_hash, config.make_header("agenda-state"));
  }
  diagnostics.close();
  log << "train: wrote " << config.state_path() << "\n";
}

namespace {

struct AnalysisContext {
  model::LoadedState loaded;
  text::VocabularyIndex vocabulary;
  int seed_topics = 0;
  std::vector<std::string> seed_labels;
  analytics::PruneResult prune;
  std::vector<int> retained;
};

AnalysisContext load_analysis_context(const RunConfig& config,
                                      std::ostream& log,
                                      const std::string& state_path) {
  TrainingInputs inputs = read_training_inputs(config, log);
  const std::string path =
      state_path.empty() ? config.state_path() : state_path;
  std::optional<FileHeader> state_header;
  model::read_state_info(path, &state_header);
  if (state_header && state_header->config_hash != config.config_hash) {
    log << "warning: " << path << " was trained under config hash "
        << state_header->config_hash << ", current is " << config.config_hash
        << "\n";
  }
  model::LoadedState loaded =
      model::load_model_state(path, std::move(inputs.docs));
  if (loaded.info.vocab_hash != inputs.vocabulary.content_hash()) {
    throw DataError("state file was trained on a different vocabulary");
  }
  log << "  replay verification passed\n";

  AnalysisContext context{std::move(loaded), std::move(inputs.vocabulary),
                          inputs.seed_topics, std::move(inputs.seed_labels),
                          {}, {}};
  context.prune = analytics::prune_topics(context.loaded.state);
  if (config.analytics_options.prune) {
    context.retained = context.prune.retained;
    log << "  pruning threshold " << context.prune.threshold << ": dropped "
        << context.prune.dropped.size() << " new topic(s) covering "
        << context.prune.dropped_documents << " of "
        << context.prune.unlabeled_documents << " unlabeled documents\n";
  } else {
    for (const auto& topic : context.loaded.state.topics()) {
      context.retained.push_back(topic.id);
    }
    std::sort(context.retained.begin(), context.retained.end());
    log << "  pruning disabled: keeping all " << context.retained.size()
        << " topics\n";
  }
  return context;
}

std::map<int, std::vector<analytics::RankedTerm>> rank_all(
    const AnalysisContext& context, const RunConfig& config) {
  std::map<int, std::vector<analytics::RankedTerm>> ranked;
  for (int topic_id : context.retained) {
    ranked[topic_id] = analytics::top_words(
        context.loaded.state, topic_id,
        static_cast<std::size_t>(config.analytics_options.top_n),
        context.vocabulary);
  }
  return ranked;
}

}  // namespace

void cmd_analyze(const RunConfig& config, std::ostream& log,
                 const std::string& state_path) {
  log << "analyze:\n";
  AnalysisContext context = load_analysis_context(config, log, state_path);
  const model::ModelState& state = context.loaded.state;
  auto ranked = rank_all(context, config);

  analytics::TopicMetaMap meta = read_topic_meta(config, context.seed_topics);
  // Every retained new topic needs user-supplied metadata; the error carries
  // its top words so the label can be written directly.
  for (int topic_id : context.retained) {
    if (topic_id <= context.seed_topics) continue;
    auto it = meta.find(topic_id);
    if (it == meta.end() || it->second.label.empty()) {
      std::string words;
      for (const auto& term : ranked[topic_id]) {
        if (!words.empty()) words += ", ";
        words += term.text;
      }
      throw ConfigError("no metadata for retained new topic " +
                        std::to_string(topic_id) + " (top words: " + words +
                        "); run the report command and fill the topic_meta "
                        "file");
    }
  }
  const std::map<int, std::string> labels =
      topic_labels(context.seed_labels, meta);

  // Salience and rank correlations.
  const analytics::SalienceTable salience =
      analytics::topic_salience(state, context.retained);
  write_salience_tsv(out_path(config, "salience.tsv"), config, salience, labels);
  const analytics::CorrelationMatrix correlations =
      analytics::rank_correlation_matrix(salience);
  write_correlations_tsv(out_path(config, "correlations.tsv"), config,
                         correlations);

  // Top words in table layout.
  write_top_words_txt(out_path(config, "top_words.txt"), config,
                      context.retained, labels, ranked);

  // Raw message volume per day (from the unpreprocessed records).
  const std::vector<text::RawRecord> records =
      text::read_raw_records(config.records_path);
  std::map<std::string, analytics::VolumeSeries> volumes;
  for (const auto& corpus : config.corpora) {
    volumes[corpus.tag] = analytics::daily_volume(records, corpus.tag);
  }
  write_volume_tsv(out_path(config, "daily_volume.tsv"), config, volumes);

  // Cosine grid and the cell regressions.
  const analytics::SimilarityGrid grid = analytics::cosine_similarity_grid(
      state, config.corpora, context.retained, meta);
  write_similarity_tsv(out_path(config, "similarity_grid.tsv"), config, grid,
                       labels);
  write_similarity_cells_jsonl(out_path(config, "similarity_cells.jsonl"),
                               config, grid);
  const analytics::RegressionFrame frame =
      analytics::build_regression_frame(grid.cells);
  log << "  similarity grid: " << grid.cells.size() << " cells ("
      << grid.omitted.size() << " omitted), regression N=" << frame.n()
      << "\n";
  for (const analytics::ModelSpec& spec : analytics::similarity_model_specs()) {
    // Small or homogeneous runs leave some dummies linearly dependent (all
    // constant, duplicated, or complements of one another, e.g. three corpora
    // make same_actor = 1 - survey). Predictors are admitted greedily in
    // specification order and dependent ones dropped with a note, so the
    // remaining analyses still come out.
    std::vector<std::string> usable;
    std::vector<std::string> dropped;
    std::vector<std::vector<double>> basis;  // orthogonalized kept columns
    basis.push_back(std::vector<double>(frame.n(), 1.0));  // intercept
    for (const std::string& predictor : spec.predictors) {
      std::vector<double> residual = frame.column(predictor);
      double norm_in = 0.0;
      for (double v : residual) norm_in += v * v;
      for (const std::vector<double>& direction : basis) {
        double dot = 0.0, self = 0.0;
        for (std::size_t i = 0; i < residual.size(); ++i) {
          dot += residual[i] * direction[i];
          self += direction[i] * direction[i];
        }
        for (std::size_t i = 0; i < residual.size(); ++i) {
          residual[i] -= dot / self * direction[i];
        }
      }
      double norm_out = 0.0;
      for (double v : residual) norm_out += v * v;
      if (norm_out > 1e-10 * std::max(norm_in, 1.0)) {
        usable.push_back(predictor);
        basis.push_back(std::move(residual));
      } else {
        dropped.push_back(predictor);
      }
    }
    const analytics::RegressionResult result = analytics::ols_hc_robust(
        frame, usable, config.analytics_options.hc);
    write_regression_tsv(
        out_path(config, ("regression_" + spec.name + ".tsv").c_str()), config,
        result, spec.name, dropped);
  }

  // Pruning report.
  Json prune_report;
  prune_report["run_id"] = config.run_id;
  prune_report["config_hash"] = config.config_hash;
  prune_report["threshold"] = context.prune.threshold;
  prune_report["retained"] = context.retained;
  Json dropped = Json::array();
  for (const auto& d : context.prune.dropped) {
    dropped.push_back({{"topic", d.topic_id}, {"documents", d.unlabeled_docs}});
  }
  prune_report["dropped"] = dropped;
  prune_report["dropped_documents"] = context.prune.dropped_documents;
  prune_report["unlabeled_documents"] = context.prune.unlabeled_documents;
  std::ofstream prune_out(out_path(config, "prune_report.json"),
                          std::ios::trunc);
  prune_out << prune_report.dump(2) << '\n';

  log << "analyze: wrote report bundle to " << config.out_dir << "\n";
}

void cmd_report(const RunConfig& config, std::ostream& log,
                const std::string& state_path) {
  log << "report:\n";
  AnalysisContext context = load_analysis_context(config, log, state_path);
  const model::ModelState& state = context.loaded.state;
  auto ranked = rank_all(context, config);

  std::ofstream out(out_path(config, "labeling_report.txt"), std::ios::trunc);
  out << "# run_id=" << config.run_id << "\n";
  out << "# config_hash=" << config.config_hash << "\n";
  out << "# Topics retained after pruning (threshold "
      << context.prune.threshold << ").\n";
  out << "# New topics need a label and a type (policy|politics|polity) in "
         "the topic_meta file.\n\n";

  for (int topic_id : context.retained) {
    const bool is_seed = topic_id <= context.seed_topics;
    const auto& topic = state.topic(topic_id);
    out << "topic " << topic_id << " ("
        << (is_seed ? context.seed_labels[static_cast<std::size_t>(topic_id - 1)]
                    : std::string("NEW, unlabeled"))
        << "): " << topic.doc_count << " documents\n";
    out << "  top words: ";
    bool first = true;
    for (const auto& term : ranked[topic_id]) {
      if (!first) out << ", ";
      out << term.text;
      first = false;
    }
    out << "\n";
    if (!is_seed) {
      // sample documents as token text, enough to judge the topic
      int shown = 0;
      for (std::size_t i = 0; i < state.document_count() && shown < 5; ++i) {
        if (state.assignment(i) != topic_id) continue;
        out << "  sample [" << state.token_document(i).id << "]:";
        for (std::uint32_t t : state.token_document(i).tokens) {
          out << ' ' << context.vocabulary.term(t);
        }
        out << "\n";
        ++shown;
      }
      out << "  suggested metadata line: {\"topic\": " << topic_id
          << ", \"label\": \"...\", \"type\": \"politics\"}\n";
    }
    out << "\n";
  }
  log << "report: wrote " << out_path(config, "labeling_report.txt") << "\n";
}

bool cmd_validate(bool quick, std::ostream& log) {
  return validate::run_and_print(quick, log);
}

}  // namespace agenda::app
