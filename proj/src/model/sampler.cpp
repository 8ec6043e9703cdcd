#include "agenda/model/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "agenda/core/errors.hpp"

namespace agenda::model {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct ScoreScratch {
  std::vector<double> log_weight;      // live slots, then the new-topic slot
  std::vector<double> weight;          // shifted exp, reused by the draw
  std::vector<std::int64_t> gathered;  // exact mode: per-slot counts of doc terms
};

void check_tokens(const Document& doc, const ModelState& state) {
  for (const auto& [term, count] : doc.term_counts) {
    if (term >= state.vocab_size()) {
      throw InvariantError("token id " + std::to_string(term) +
                           " outside vocabulary of size " +
                           std::to_string(state.vocab_size()));
    }
  }
}

// Fills scratch.log_weight with the unnormalized full conditional. Documents
// of a single token always take the fast path: both likelihood modes coincide
// there, bit for bit.
void score_topics(const Document& doc, const ModelState& state,
                  ScoreScratch& scratch) {
  check_tokens(doc, state);
  const auto& topics = state.topics();
  const std::size_t live = topics.size();
  scratch.log_weight.resize(live + 1);

  const ModelParams& params = state.params();
  const double log_prior_denom =
      std::log(static_cast<double>(state.assigned_count()) + params.alpha);
  const double log_beta = state.log_beta();
  const double n_tokens = static_cast<double>(doc.token_count);

  const bool fast = doc.token_count == 1 ||
                    params.likelihood_mode == LikelihoodMode::paper_approximate;
  if (fast) {
    for (std::size_t s = 0; s < live; ++s) {
      scratch.log_weight[s] =
          topics[s].log_doc_count - log_prior_denom +
          n_tokens * (log_beta - topics[s].log_token_denominator);
    }
    for (const auto& [term, count] : doc.term_counts) {
      const double c = static_cast<double>(count);
      for (const TermTopicEntry& entry : state.term_row(term)) {
        const int slot = state.topic_slot(entry.topic_id);
        scratch.log_weight[static_cast<std::size_t>(slot)] +=
            c * (entry.log_smoothed - log_beta);
      }
    }
    scratch.log_weight[live] =
        state.log_alpha() - log_prior_denom - n_tokens * state.log_vocab();
    return;
  }

  // Exact collapsed: ascending factorials over gathered per-topic counts.
  const std::size_t terms = doc.term_counts.size();
  scratch.gathered.assign(live * terms, 0);
  for (std::size_t t = 0; t < terms; ++t) {
    for (const TermTopicEntry& entry : state.term_row(doc.term_counts[t].first)) {
      const int slot = state.topic_slot(entry.topic_id);
      scratch.gathered[static_cast<std::size_t>(slot) * terms + t] =
          entry.labeled + entry.unlabeled;
    }
  }
  const double vocab_beta = static_cast<double>(state.vocab_size()) * params.beta;
  for (std::size_t s = 0; s < live; ++s) {
    double lw = topics[s].log_doc_count - log_prior_denom;
    const double total = static_cast<double>(topics[s].token_total());
    for (std::int32_t i = 0; i < doc.token_count; ++i) {
      lw -= std::log(total + vocab_beta + static_cast<double>(i));
    }
    for (std::size_t t = 0; t < terms; ++t) {
      const double base =
          static_cast<double>(scratch.gathered[s * terms + t]) + params.beta;
      for (std::int32_t j = 0; j < doc.term_counts[t].second; ++j) {
        lw += std::log(base + static_cast<double>(j));
      }
    }
    scratch.log_weight[s] = lw;
  }
  double lw_new = state.log_alpha() - log_prior_denom;
  for (std::int32_t i = 0; i < doc.token_count; ++i) {
    lw_new -= std::log(vocab_beta + static_cast<double>(i));
  }
  for (const auto& [term, count] : doc.term_counts) {
    for (std::int32_t j = 0; j < count; ++j) {
      lw_new += std::log(params.beta + static_cast<double>(j));
    }
  }
  scratch.log_weight[live] = lw_new;
}

std::size_t draw_slot(ScoreScratch& scratch, Rng& rng) {
  const std::vector<double>& lw = scratch.log_weight;
  double shift = kNegInf;
  for (double v : lw) shift = std::max(shift, v);
  scratch.weight.resize(lw.size());
  double total = 0.0;
  for (std::size_t i = 0; i < lw.size(); ++i) {
    scratch.weight[i] = std::exp(lw[i] - shift);
    total += scratch.weight[i];
  }
  const double u = rng.uniform01() * total;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < lw.size(); ++i) {
    cumulative += scratch.weight[i];
    if (u < cumulative) return i;
  }
  return lw.size() - 1;
}

}  // namespace

double doc_log_likelihood_seeded(const Document& doc, const ModelState& state,
                                 int topic_id, LikelihoodMode mode) {
  check_tokens(doc, state);
  const TopicCounts& topic = state.topic(topic_id);
  const double beta = state.params().beta;
  const double vocab_beta = static_cast<double>(state.vocab_size()) * beta;
  const double total = static_cast<double>(topic.token_total());
  double ll = 0.0;
  if (mode == LikelihoodMode::paper_approximate || doc.token_count == 1) {
    const double log_denom = std::log(total + vocab_beta);
    for (const auto& [term, count] : doc.term_counts) {
      const double smoothed =
          static_cast<double>(state.term_count(topic_id, term)) + beta;
      ll += static_cast<double>(count) * (std::log(smoothed) - log_denom);
    }
    return ll;
  }
  for (std::int32_t i = 0; i < doc.token_count; ++i) {
    ll -= std::log(total + vocab_beta + static_cast<double>(i));
  }
  for (const auto& [term, count] : doc.term_counts) {
    const double base =
        static_cast<double>(state.term_count(topic_id, term)) + beta;
    for (std::int32_t j = 0; j < count; ++j) {
      ll += std::log(base + static_cast<double>(j));
    }
  }
  return ll;
}

double doc_log_likelihood_new(
    std::int64_t token_count,
    const std::vector<std::pair<std::uint32_t, std::int32_t>>& term_counts,
    std::uint32_t vocab_size, double beta, LikelihoodMode mode) {
  const double v = static_cast<double>(vocab_size);
  if (mode == LikelihoodMode::paper_approximate || token_count == 1) {
    return -static_cast<double>(token_count) * std::log(v);
  }
  double ll = 0.0;
  for (std::int64_t i = 0; i < token_count; ++i) {
    ll -= std::log(v * beta + static_cast<double>(i));
  }
  for (const auto& [term, count] : term_counts) {
    for (std::int32_t j = 0; j < count; ++j) {
      ll += std::log(beta + static_cast<double>(j));
    }
  }
  return ll;
}

double doc_log_likelihood_new(const Document& doc, std::uint32_t vocab_size,
                              double beta, LikelihoodMode mode) {
  return doc_log_likelihood_new(doc.token_count, doc.term_counts, vocab_size,
                                beta, mode);
}

TopicDistribution conditional_topic_distribution(const Document& doc,
                                                 const ModelState& state) {
  if (doc.labeled()) {
    throw InvariantError("conditional requested for a labeled document");
  }
  ScoreScratch scratch;
  score_topics(doc, state, scratch);

  TopicDistribution dist;
  const auto& topics = state.topics();
  dist.topic_ids.reserve(topics.size() + 1);
  for (const TopicCounts& topic : topics) dist.topic_ids.push_back(topic.id);
  dist.topic_ids.push_back(state.next_topic_id());
  dist.log_weights = scratch.log_weight;

  double shift = kNegInf;
  for (double v : dist.log_weights) shift = std::max(shift, v);
  dist.probabilities.resize(dist.log_weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < dist.log_weights.size(); ++i) {
    dist.probabilities[i] = std::exp(dist.log_weights[i] - shift);
    total += dist.probabilities[i];
  }
  for (double& p : dist.probabilities) p /= total;
  return dist;
}

int sample_assignment(std::size_t doc_index, ModelState& state, Rng& rng) {
  const Document& doc = state.document(doc_index);
  if (doc.labeled()) {
    throw InvariantError("sample_assignment on a labeled document");
  }
  if (state.assignment(doc_index) != 0) {
    throw InvariantError("sample_assignment on a still-assigned document");
  }
  thread_local ScoreScratch scratch;
  score_topics(doc, state, scratch);
  const std::size_t slot = draw_slot(scratch, rng);
  const int topic_id = slot < state.topics().size()
                           ? state.topics()[slot].id
                           : state.next_topic_id();
  state.place_document(doc_index, topic_id);
  return topic_id;
}

SweepStats gibbs_sweep(ModelState& state, Rng& rng) {
  const auto start = std::chrono::steady_clock::now();
  SweepStats stats;
  std::vector<std::size_t> order = state.unlabeled_documents();
  if (state.params().shuffle_each_sweep) {
    rng.shuffle(order);
  }
  for (std::size_t index : order) {
    const int before = state.assignment(index);
    state.remove_document(index);
    const int after = sample_assignment(index, state, rng);
    if (after != before) ++stats.reassigned;
  }
  stats.live_topics = state.live_topic_count();
  stats.log_joint = log_joint(state);
  stats.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return stats;
}

ModelState init_state(std::vector<text::TokenDocument> docs,
                      const ModelParams& params, std::uint32_t vocab_size,
                      int seed_topic_count, Rng& rng) {
  ModelState state(std::move(docs), params, vocab_size, seed_topic_count);
  for (std::size_t i = 0; i < state.document_count(); ++i) {
    const Document& doc = state.document(i);
    if (doc.labeled()) {
      state.place_document(i, doc.seed_topic);
    }
  }
  for (int id = 1; id <= seed_topic_count; ++id) {
    if (state.topic(id).doc_count == 0) {
      throw DataError("seed topic " + std::to_string(id) +
                      " is not covered by any labeled document");
    }
  }
  for (std::size_t index : state.unlabeled_documents()) {
    sample_assignment(index, state, rng);
  }
  return state;
}

std::vector<SweepStats> continue_inference(ModelState& state, Rng& rng,
                                           int first_sweep, int last_sweep,
                                           const SweepCallback& on_sweep) {
  std::vector<SweepStats> diagnostics;
  for (int sweep = first_sweep; sweep <= last_sweep; ++sweep) {
    SweepStats stats = gibbs_sweep(state, rng);
    stats.sweep = sweep;
    if (on_sweep) on_sweep(stats);
    diagnostics.push_back(stats);
  }
  return diagnostics;
}

InferenceResult run_inference(std::vector<text::TokenDocument> docs,
                              const ModelParams& params,
                              std::uint32_t vocab_size, int seed_topic_count,
                              const SweepCallback& on_sweep) {
  params.validate();
  Rng rng(params.rng_seed);
  ModelState state =
      init_state(std::move(docs), params, vocab_size, seed_topic_count, rng);
  std::vector<SweepStats> diagnostics =
      continue_inference(state, rng, 1, params.sweeps, on_sweep);
  return InferenceResult{std::move(state), std::move(diagnostics),
                         std::move(rng)};
}

double log_joint(const ModelState& state) {
  if (state.assigned_count() == 0) return 0.0;
  const double alpha = state.params().alpha;
  const double beta = state.params().beta;
  const double vocab_beta = static_cast<double>(state.vocab_size()) * beta;
  const double lgamma_beta = std::lgamma(beta);
  const double lgamma_vocab_beta = std::lgamma(vocab_beta);

  double lj = std::lgamma(alpha) -
              std::lgamma(alpha + static_cast<double>(state.assigned_count()));
  for (const TopicCounts& topic : state.topics()) {
    if (topic.doc_count == 0) continue;  // uncovered seed, contributes nothing
    lj += std::log(alpha);
    lj += std::lgamma(static_cast<double>(topic.doc_count));
    lj += lgamma_vocab_beta -
          std::lgamma(static_cast<double>(topic.token_total()) + vocab_beta);
  }
  for (std::uint32_t w = 0; w < state.vocab_size(); ++w) {
    for (const TermTopicEntry& entry : state.term_row(w)) {
      lj += std::lgamma(static_cast<double>(entry.labeled + entry.unlabeled) +
                        beta) -
            lgamma_beta;
    }
  }
  return lj;
}

}  // namespace agenda::model
