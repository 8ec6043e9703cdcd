#include <doctest.h>

#include <cmath>
#include <map>

#include "agenda/core/errors.hpp"
#include "agenda/model/sampler.hpp"
#include "agenda/model/state.hpp"
#include "agenda/oracle/synthetic.hpp"

using namespace agenda;
using namespace agenda::model;

namespace {

text::TokenDocument make_doc(std::string id, std::string corpus,
                             std::vector<std::uint32_t> tokens,
                             std::optional<int> seed = std::nullopt) {
  text::TokenDocument d;
  d.id = std::move(id);
  d.corpus = std::move(corpus);
  d.tokens = std::move(tokens);
  d.seed_topic = seed;
  return d;
}

Document query_doc(std::vector<std::uint32_t> tokens) {
  Document d;
  d.token_count = static_cast<std::int32_t>(tokens.size());
  std::sort(tokens.begin(), tokens.end());
  for (std::uint32_t t : tokens) {
    if (!d.term_counts.empty() && d.term_counts.back().first == t) {
      d.term_counts.back().second += 1;
    } else {
      d.term_counts.emplace_back(t, 1);
    }
  }
  return d;
}

// The hand-worked two-seed fixture: V=2 terms {a=0, b=1}, beta=1.5, alpha=1,
// seed 1 holds one doc [a,a], seed 2 holds one doc [b,b]. The conditional for
// an unlabeled [a] is exactly (7/15, 3/15, 5/15) over (seed1, seed2, new).
ModelState two_seed_fixture(double alpha = 1.0,
                            LikelihoodMode mode = LikelihoodMode::paper_approximate) {
  ModelParams params;
  params.alpha = alpha;
  params.beta = 1.5;
  params.likelihood_mode = mode;
  std::vector<text::TokenDocument> docs;
  docs.push_back(make_doc("g1", "survey", {0, 0}, 1));
  docs.push_back(make_doc("g2", "survey", {1, 1}, 2));
  ModelState state(std::move(docs), params, /*vocab=*/2, /*seeds=*/2);
  state.place_document(0, 1);
  state.place_document(1, 2);
  return state;
}

// Direct-domain evaluation of the paper-approximate conditional; the oracle
// for the log-domain implementation.
std::vector<double> direct_conditional(const Document& doc,
                                       const ModelState& state) {
  const double alpha = state.params().alpha;
  const double beta = state.params().beta;
  const double v_beta = static_cast<double>(state.vocab_size()) * beta;
  const double denom = static_cast<double>(state.assigned_count()) + alpha;
  std::vector<double> weights;
  for (const TopicCounts& topic : state.topics()) {
    double w = static_cast<double>(topic.doc_count) / denom;
    for (const auto& [term, count] : doc.term_counts) {
      const double p =
          (static_cast<double>(state.term_count(topic.id, term)) + beta) /
          (static_cast<double>(topic.token_total()) + v_beta);
      for (int j = 0; j < count; ++j) w *= p;
    }
    weights.push_back(w);
  }
  double w_new = alpha / denom;
  for (std::int32_t i = 0; i < doc.token_count; ++i) {
    w_new /= static_cast<double>(state.vocab_size());
  }
  weights.push_back(w_new);
  double total = 0.0;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total;
  return weights;
}

}  // namespace

TEST_SUITE_BEGIN("model");

TEST_CASE("document likelihood under a seeded topic") {
  ModelState state = two_seed_fixture();
  const Document doc = query_doc({0});

  // topic 1 holds term a twice over 2 tokens: (2+1.5)/(2+3) = 0.7
  CHECK(doc_log_likelihood_seeded(doc, state, 1,
                                  LikelihoodMode::paper_approximate) ==
        doctest::Approx(std::log(3.5 / 5.0)).epsilon(1e-12));
  // single-token documents evaluate identically in both modes
  CHECK(doc_log_likelihood_seeded(doc, state, 1,
                                  LikelihoodMode::exact_collapsed) ==
        doc_log_likelihood_seeded(doc, state, 1,
                                  LikelihoodMode::paper_approximate));

  const Document two = query_doc({0, 0});
  CHECK(doc_log_likelihood_seeded(two, state, 1,
                                  LikelihoodMode::paper_approximate) ==
        doctest::Approx(2.0 * std::log(3.5 / 5.0)).epsilon(1e-12));
  CHECK(doc_log_likelihood_seeded(two, state, 1,
                                  LikelihoodMode::exact_collapsed) ==
        doctest::Approx(std::log(3.5 * 4.5 / (5.0 * 6.0))).epsilon(1e-12));
}

TEST_CASE("document likelihood under an empty topic reduces to beta ratios") {
  ModelParams params;
  params.beta = 1.5;
  ModelState state({}, params, /*vocab=*/2, /*seeds=*/1);
  const Document doc = query_doc({0});
  CHECK(doc_log_likelihood_seeded(doc, state, 1,
                                  LikelihoodMode::paper_approximate) ==
        doctest::Approx(std::log(1.5 / 3.0)).epsilon(1e-12));
}

TEST_CASE("new-topic likelihood") {
  CHECK(doc_log_likelihood_new(query_doc({0, 1}), 4, 1.5,
                               LikelihoodMode::paper_approximate) ==
        doctest::Approx(std::log(1.0 / 16.0)).epsilon(1e-12));
  // n_d = 1: beta/(V*beta) = 1/V in both modes, computed identically
  for (double beta : {0.1, 1.5, 7.0}) {
    const Document one = query_doc({2});
    const double approx = doc_log_likelihood_new(
        one, 5, beta, LikelihoodMode::paper_approximate);
    const double exact =
        doc_log_likelihood_new(one, 5, beta, LikelihoodMode::exact_collapsed);
    CHECK(approx == exact);
    CHECK(approx == doctest::Approx(-std::log(5.0)).epsilon(1e-12));
  }
  // [a,a], V=2, beta=1.5 exact: (1.5*2.5)/(3*4) = 0.3125
  CHECK(doc_log_likelihood_new(query_doc({0, 0}), 2, 1.5,
                               LikelihoodMode::exact_collapsed) ==
        doctest::Approx(std::log(0.3125)).epsilon(1e-12));
}

TEST_CASE("conditional matches the exact rational fixture") {
  ModelState state = two_seed_fixture();
  const TopicDistribution dist =
      conditional_topic_distribution(query_doc({0}), state);
  REQUIRE(dist.size() == 3);
  CHECK(dist.topic_ids[0] == 1);
  CHECK(dist.topic_ids[1] == 2);
  CHECK(dist.topic_ids[2] == 3);  // the id a new-topic draw would create

  // Exact rational values: unnormalized weights 7/30, 3/30, 5/30.
  const double expected[3] = {7.0 / 15.0, 3.0 / 15.0, 5.0 / 15.0};
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(dist.probabilities[static_cast<std::size_t>(i)] -
                   expected[i]) < 1e-14);
  }
  double total = 0.0;
  for (double p : dist.probabilities) total += p;
  CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("conditional respects symmetry") {
  ModelState state = two_seed_fixture();
  const TopicDistribution dist =
      conditional_topic_distribution(query_doc({0, 1}), state);
  CHECK(dist.probabilities[0] == doctest::Approx(dist.probabilities[1]).epsilon(1e-12));
}

TEST_CASE("new-topic mass vanishes as alpha goes to zero") {
  ModelState state = two_seed_fixture(/*alpha=*/1e-12);
  const TopicDistribution dist =
      conditional_topic_distribution(query_doc({0}), state);
  CHECK(dist.probabilities.back() < 1e-11);
}

TEST_CASE("conditional rejects out-of-vocabulary tokens and labeled docs") {
  ModelState state = two_seed_fixture();
  CHECK_THROWS_AS(conditional_topic_distribution(query_doc({5}), state),
                  InvariantError);
  Document labeled = query_doc({0});
  labeled.seed_topic = 1;
  CHECK_THROWS_AS(conditional_topic_distribution(labeled, state),
                  InvariantError);
}

TEST_CASE("log and direct domain agree on short documents") {
  oracle::SyntheticSpec spec;
  spec.seed_topics = 3;
  spec.extra_topics = 2;
  spec.vocab_size = 20;
  spec.labeled_docs = 12;
  spec.unlabeled_corpora = {{"m", 40}};
  spec.mean_length = 4.0;
  spec.rng_seed = 11;
  const auto corpus = oracle::generate_synthetic(spec);

  ModelParams params;
  params.rng_seed = 5;
  Rng rng(params.rng_seed);
  ModelState state = init_state(corpus.documents, params, spec.vocab_size,
                                spec.seed_topics, rng);
  for (std::size_t index : state.unlabeled_documents()) {
    const Document& doc = state.document(index);
    if (doc.token_count > 10) continue;
    state.remove_document(index);
    const TopicDistribution dist =
        conditional_topic_distribution(doc, state);
    const std::vector<double> reference = direct_conditional(doc, state);
    REQUIRE(dist.size() == reference.size());
    double total = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
      CHECK(std::abs(dist.probabilities[i] - reference[i]) < 1e-9);
      total += dist.probabilities[i];
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
    state.place_document(index, dist.topic_ids[0]);  // seed 1 is always live
  }
}

TEST_CASE("sampling follows the conditional (Monte Carlo)") {
  ModelParams params;
  params.beta = 1.5;
  std::vector<text::TokenDocument> docs;
  docs.push_back(make_doc("g1", "survey", {0, 0}, 1));
  docs.push_back(make_doc("g2", "survey", {1, 1}, 2));
  docs.push_back(make_doc("m1", "tw", {0}));
  ModelState state(std::move(docs), params, 2, 2);
  state.place_document(0, 1);
  state.place_document(1, 2);

  Rng rng(123);
  const int draws = 100000;
  std::map<int, int> hits;  // 1, 2, or >2 for the fresh topic
  for (int i = 0; i < draws; ++i) {
    const int topic = sample_assignment(2, state, rng);
    hits[std::min(topic, 3)] += 1;
    state.remove_document(2);  // reset between draws
  }
  const double expected[3] = {7.0 / 15.0, 3.0 / 15.0, 5.0 / 15.0};
  CHECK(std::abs(hits[1] / double(draws) - expected[0]) < 0.01);
  CHECK(std::abs(hits[2] / double(draws) - expected[1]) < 0.01);
  CHECK(std::abs(hits[3] / double(draws) - expected[2]) < 0.01);
}

TEST_CASE("degenerate conditional always picks the only live topic") {
  ModelParams params;
  params.alpha = 1e-300;  // new-topic slot negligible
  std::vector<text::TokenDocument> docs;
  docs.push_back(make_doc("g1", "survey", {0, 0}, 1));
  docs.push_back(make_doc("m1", "tw", {0}));
  ModelState state(std::move(docs), params, 2, 1);
  state.place_document(0, 1);
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    CHECK(sample_assignment(1, state, rng) == 1);
    state.remove_document(1);
  }
}

TEST_CASE("drawing the new slot creates a singleton topic with a fresh id") {
  ModelParams params;
  params.alpha = 1e12;  // swamps the two assigned docs
  std::vector<text::TokenDocument> docs;
  docs.push_back(make_doc("g1", "survey", {0, 0}, 1));
  docs.push_back(make_doc("m1", "tw", {1}));
  ModelState state(std::move(docs), params, 2, 1);
  state.place_document(0, 1);
  Rng rng(4);
  const int before = state.live_topic_count();
  const int topic = sample_assignment(1, state, rng);
  CHECK(topic == 2);
  CHECK(state.live_topic_count() == before + 1);
  CHECK(state.topic(topic).doc_count == 1);
  CHECK_FALSE(state.topic(topic).is_seed);
  // removing it kills the topic, and the id is never reused
  state.remove_document(1);
  CHECK_FALSE(state.topic_live(topic));
  const int again = sample_assignment(1, state, rng);
  CHECK(again == 3);
}

TEST_CASE("init_state places labeled docs and validates coverage") {
  ModelParams params;
  SUBCASE("zero unlabeled docs reproduce the labeled counts") {
    std::vector<text::TokenDocument> docs;
    docs.push_back(make_doc("g1", "survey", {0, 0}, 1));
    docs.push_back(make_doc("g2", "survey", {1}, 2));
    Rng rng(1);
    ModelState state = init_state(std::move(docs), params, 2, 2, rng);
    CHECK(state.live_topic_count() == 2);
    CHECK(state.topic(1).doc_count == 1);
    CHECK(state.topic(1).token_total_labeled == 2);
    CHECK(state.topic(2).token_total_labeled == 1);
    CHECK(state.assigned_count() == 2);
    CHECK_FALSE(state.verify_consistency().has_value());
  }
  SUBCASE("seed label outside the configured range") {
    std::vector<text::TokenDocument> docs;
    docs.push_back(make_doc("g1", "survey", {0}, 3));
    Rng rng(1);
    CHECK_THROWS_AS(init_state(std::move(docs), params, 2, 2, rng), DataError);
  }
  SUBCASE("uncovered seed topic") {
    std::vector<text::TokenDocument> docs;
    docs.push_back(make_doc("g1", "survey", {0}, 1));
    Rng rng(1);
    CHECK_THROWS_AS(init_state(std::move(docs), params, 2, 2, rng), DataError);
  }
}

TEST_CASE("streaming initialization draws from the conditional") {
  // One unlabeled doc: its init assignment must follow the exact conditional.
  const double expected[3] = {7.0 / 15.0, 3.0 / 15.0, 5.0 / 15.0};
  std::map<int, int> hits;
  const int runs = 100000;
  ModelParams params;
  for (int r = 0; r < runs; ++r) {
    params.rng_seed = static_cast<std::uint64_t>(r);
    std::vector<text::TokenDocument> docs;
    docs.push_back(make_doc("g1", "survey", {0, 0}, 1));
    docs.push_back(make_doc("g2", "survey", {1, 1}, 2));
    docs.push_back(make_doc("m1", "tw", {0}));
    Rng rng(params.rng_seed);
    ModelState state = init_state(std::move(docs), params, 2, 2, rng);
    hits[std::min(state.assignment(2), 3)] += 1;
  }
  CHECK(std::abs(hits[1] / double(runs) - expected[0]) < 0.01);
  CHECK(std::abs(hits[2] / double(runs) - expected[1]) < 0.01);
  CHECK(std::abs(hits[3] / double(runs) - expected[2]) < 0.01);
}

TEST_CASE("gibbs sweeps keep every invariant") {
  oracle::SyntheticSpec spec;
  spec.seed_topics = 3;
  spec.extra_topics = 2;
  spec.vocab_size = 30;
  spec.labeled_docs = 15;
  spec.unlabeled_corpora = {{"m1", 30}, {"m2", 25}};
  spec.mean_length = 5.0;
  spec.rng_seed = 21;
  const auto corpus = oracle::generate_synthetic(spec);

  ModelParams params;
  params.rng_seed = 9;
  Rng rng(params.rng_seed);
  ModelState state = init_state(corpus.documents, params, spec.vocab_size,
                                spec.seed_topics, rng);

  std::vector<int> labeled_before;
  for (std::size_t i = 0; i < state.document_count(); ++i) {
    if (state.document(i).labeled()) labeled_before.push_back(state.assignment(i));
  }

  std::int64_t token_total = 0;
  for (std::size_t i = 0; i < state.document_count(); ++i) {
    token_total += state.document(i).token_count;
  }

  for (int sweep = 0; sweep < 10; ++sweep) {
    const SweepStats stats = gibbs_sweep(state, rng);
    CHECK(stats.live_topics == state.live_topic_count());
    CHECK(std::isfinite(stats.log_joint));

    auto problem = state.verify_consistency();
    if (problem) FAIL(*problem);

    // conservation
    std::int64_t doc_sum = 0, token_sum = 0;
    for (const TopicCounts& topic : state.topics()) {
      doc_sum += topic.doc_count;
      token_sum += topic.token_total();
      if (!topic.is_seed) CHECK(topic.doc_count >= 1);
    }
    CHECK(doc_sum == static_cast<std::int64_t>(state.document_count()));
    CHECK(token_sum == token_total);

    // seed immutability
    std::size_t li = 0;
    for (std::size_t i = 0; i < state.document_count(); ++i) {
      if (state.document(i).labeled()) {
        CHECK(state.assignment(i) == labeled_before[li++]);
      }
    }
  }
}

TEST_CASE("sweep over zero unlabeled docs is a no-op") {
  ModelParams params;
  std::vector<text::TokenDocument> docs;
  docs.push_back(make_doc("g1", "survey", {0}, 1));
  Rng rng(1);
  ModelState state = init_state(std::move(docs), params, 2, 1, rng);
  const SweepStats stats = gibbs_sweep(state, rng);
  CHECK(stats.reassigned == 0);
  CHECK(stats.live_topics == 1);
}

TEST_CASE("inference is deterministic under a fixed seed") {
  oracle::SyntheticSpec spec;
  spec.seed_topics = 2;
  spec.extra_topics = 1;
  spec.vocab_size = 25;
  spec.labeled_docs = 10;
  spec.unlabeled_corpora = {{"m", 40}};
  spec.mean_length = 4.0;
  spec.rng_seed = 2;
  const auto corpus = oracle::generate_synthetic(spec);

  ModelParams params;
  params.sweeps = 8;
  params.rng_seed = 77;
  const auto a = run_inference(corpus.documents, params, spec.vocab_size,
                               spec.seed_topics);
  const auto b = run_inference(corpus.documents, params, spec.vocab_size,
                               spec.seed_topics);
  REQUIRE(a.diagnostics.size() == 8);
  for (std::size_t i = 0; i < a.state.document_count(); ++i) {
    CHECK(a.state.assignment(i) == b.state.assignment(i));
  }
  for (std::size_t s = 0; s < a.diagnostics.size(); ++s) {
    CHECK(a.diagnostics[s].reassigned == b.diagnostics[s].reassigned);
    CHECK(a.diagnostics[s].log_joint == b.diagnostics[s].log_joint);
  }

  params.rng_seed = 78;
  const auto c = run_inference(corpus.documents, params, spec.vocab_size,
                               spec.seed_topics);
  bool any_difference = false;
  for (std::size_t i = 0; i < a.state.document_count(); ++i) {
    if (a.state.assignment(i) != c.state.assignment(i)) any_difference = true;
  }
  CHECK(any_difference);
}

TEST_CASE("paper and exact modes agree exactly on single-token corpora") {
  oracle::SyntheticSpec spec;
  spec.seed_topics = 3;
  spec.extra_topics = 2;
  spec.vocab_size = 15;
  spec.labeled_docs = 9;
  spec.unlabeled_corpora = {{"m", 60}};
  spec.mean_length = 1.0;
  spec.min_length = 1;
  spec.rng_seed = 31;
  const auto corpus = oracle::generate_synthetic(spec);

  ModelParams params;
  params.sweeps = 12;
  params.rng_seed = 55;
  params.likelihood_mode = LikelihoodMode::paper_approximate;
  const auto approx = run_inference(corpus.documents, params, spec.vocab_size,
                                   spec.seed_topics);
  params.likelihood_mode = LikelihoodMode::exact_collapsed;
  const auto exact = run_inference(corpus.documents, params, spec.vocab_size,
                                   spec.seed_topics);
  for (std::size_t i = 0; i < approx.state.document_count(); ++i) {
    CHECK(approx.state.assignment(i) == exact.state.assignment(i));
  }
}

TEST_CASE("invalid params are rejected") {
  ModelParams params;
  params.sweeps = 0;
  CHECK_THROWS_AS(params.validate(), ConfigError);
  params = ModelParams{};
  params.alpha = 0.0;
  CHECK_THROWS_AS(params.validate(), ConfigError);
  params = ModelParams{};
  params.beta = -1.0;
  CHECK_THROWS_AS(params.validate(), ConfigError);
}

TEST_CASE("log joint closed-form fixtures") {
  SUBCASE("empty document set") {
    ModelParams params;
    ModelState state({}, params, 2, 1);
    CHECK(log_joint(state) == 0.0);
  }
  SUBCASE("one labeled doc [a], V=2, beta=1.5") {
    for (double alpha : {0.5, 1.0, 2.0}) {
      ModelParams params;
      params.alpha = alpha;
      params.beta = 1.5;
      std::vector<text::TokenDocument> docs;
      docs.push_back(make_doc("g1", "survey", {0}, 1));
      Rng rng(1);
      ModelState state = init_state(std::move(docs), params, 2, 1, rng);
      // assignment term is log(alpha) + lgamma(1) + lgamma(alpha) -
      // lgamma(alpha+1) = 0 for every alpha; word term is beta/(V*beta) = 1/2
      CHECK(log_joint(state) == doctest::Approx(std::log(0.5)).epsilon(1e-12));
    }
  }
  SUBCASE("invariant under relabeling of non-seed topics") {
    ModelParams params;
    std::vector<text::TokenDocument> docs;
    docs.push_back(make_doc("g1", "survey", {0}, 1));
    docs.push_back(make_doc("m1", "tw", {1, 1}));
    docs.push_back(make_doc("m2", "tw", {2}));

    ModelState a(docs, params, 3, 1);
    a.place_document(0, 1);
    a.place_document(1, 2);
    a.place_document(2, 3);
    ModelState b(docs, params, 3, 1);
    b.place_document(0, 1);
    b.place_document(2, 2);  // same partition, new ids swapped
    b.place_document(1, 3);
    CHECK(log_joint(a) == doctest::Approx(log_joint(b)).epsilon(1e-12));
  }
  SUBCASE("merging identical docs beats splitting them") {
    ModelParams params;
    params.beta = 1.5;
    std::vector<text::TokenDocument> docs;
    docs.push_back(make_doc("g1", "survey", {0}, 1));
    docs.push_back(make_doc("m1", "tw", {0}));
    docs.push_back(make_doc("m2", "tw", {0}));

    ModelState merged(docs, params, 2, 1);
    merged.place_document(0, 1);
    merged.place_document(1, 2);
    merged.place_document(2, 2);
    ModelState split(docs, params, 2, 1);
    split.place_document(0, 1);
    split.place_document(1, 2);
    split.place_document(2, 3);
    CHECK(log_joint(merged) > log_joint(split));
  }
}

TEST_CASE("count-consistency fuzzing (light)") {
  oracle::SyntheticSpec spec;
  spec.seed_topics = 3;
  spec.extra_topics = 2;
  spec.vocab_size = 25;
  spec.labeled_docs = 10;
  spec.unlabeled_corpora = {{"m1", 25}, {"m2", 25}};
  spec.mean_length = 5.0;
  spec.rng_seed = 8;
  const auto corpus = oracle::generate_synthetic(spec);

  ModelParams params;
  params.rng_seed = 14;
  Rng rng(params.rng_seed);
  ModelState state = init_state(corpus.documents, params, spec.vocab_size,
                                spec.seed_topics, rng);
  Rng fuzz(1234);
  const auto& unlabeled = state.unlabeled_documents();
  for (int op = 0; op < 1000; ++op) {
    const std::size_t index =
        unlabeled[fuzz.uniform_below(unlabeled.size())];
    state.remove_document(index);
    sample_assignment(index, state, fuzz);
    if (op % 10 == 0) {
      auto problem = state.verify_consistency();
      if (problem) FAIL(*problem);
    }
  }
}

TEST_SUITE_END();
