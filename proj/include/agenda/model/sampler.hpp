#pragma once

#include <functional>
#include <vector>

#include "agenda/core/rng.hpp"
#include "agenda/model/state.hpp"

namespace agenda::model {

// Document log likelihood under a live topic, evaluated against the counts as
// they currently stand. Callers that want the leave-one-out predictive remove
// the document first (remove_document); the function itself never adjusts
// counts. In paper-approximate mode every token is scored against the same
// counts; exact-collapsed is the ascending-factorial form.
double doc_log_likelihood_seeded(const Document& doc, const ModelState& state,
                                 int topic_id, LikelihoodMode mode);

// Log likelihood of the document under a fresh topic: -n_d*log(V) in
// paper-approximate mode, the exact marginal under a symmetric Dirichlet(beta)
// otherwise. Single-token documents evaluate identically in both modes.
double doc_log_likelihood_new(std::int64_t token_count,
                              const std::vector<std::pair<std::uint32_t, std::int32_t>>& term_counts,
                              std::uint32_t vocab_size, double beta,
                              LikelihoodMode mode);
double doc_log_likelihood_new(const Document& doc, std::uint32_t vocab_size,
                              double beta, LikelihoodMode mode);

// Full conditional over live topics plus the new-topic slot. Entries follow
// slot order (seeds first, then new topics in creation order); the last entry
// is the new-topic slot and carries the id a new-topic draw would create.
struct TopicDistribution {
  std::vector<int> topic_ids;
  std::vector<double> log_weights;     // unnormalized, log domain
  std::vector<double> probabilities;   // normalized, sums to 1 within 1e-12

  std::size_t size() const { return topic_ids.size(); }
};

// The document must be unlabeled and not currently counted in the state
// (either never placed or already removed). A token id outside the vocabulary
// is an invariant violation.
TopicDistribution conditional_topic_distribution(const Document& doc,
                                                 const ModelState& state);

// Draws from the conditional and places the document; returns the drawn topic
// id (a fresh id when the new-topic slot is drawn).
int sample_assignment(std::size_t doc_index, ModelState& state, Rng& rng);

struct SweepStats {
  int sweep = 0;
  int live_topics = 0;
  std::size_t reassigned = 0;
  double log_joint = 0.0;
  double seconds = 0.0;
};

// One pass over all unlabeled documents in insertion order (shuffled per
// sweep only when the params ask for it): remove, sample, place. Labeled
// assignments are never touched.
SweepStats gibbs_sweep(ModelState& state, Rng& rng);

// Labeled documents pinned to their seed topics, then unlabeled documents
// placed one at a time by sampling the conditional given everything placed so
// far. Requires every seed topic to be covered by at least one labeled doc.
ModelState init_state(std::vector<text::TokenDocument> docs,
                      const ModelParams& params, std::uint32_t vocab_size,
                      int seed_topic_count, Rng& rng);

struct InferenceResult {
  ModelState state;
  std::vector<SweepStats> diagnostics;
  Rng rng;  // stream position after the final sweep
};

using SweepCallback = std::function<void(const SweepStats&)>;

// init_state plus params.sweeps Gibbs sweeps; the state after the final sweep
// is the reported clustering.
InferenceResult run_inference(std::vector<text::TokenDocument> docs,
                              const ModelParams& params,
                              std::uint32_t vocab_size, int seed_topic_count,
                              const SweepCallback& on_sweep = nullptr);

// Additional sweeps on an existing state (resume path). Sweep numbering
// starts at first_sweep.
std::vector<SweepStats> continue_inference(ModelState& state, Rng& rng,
                                           int first_sweep, int last_sweep,
                                           const SweepCallback& on_sweep = nullptr);

// Collapsed log joint of assignments and words: Chinese-restaurant term with
// concentration alpha plus a Dirichlet-multinomial term per topic.
double log_joint(const ModelState& state);

}  // namespace agenda::model
