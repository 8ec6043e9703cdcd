#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "agenda/text/records.hpp"
#include "agenda/text/vocabulary.hpp"

namespace agenda::oracle {

// Finite-K truncation of the generative story: topic popularity from a
// symmetric Dirichlet, one word distribution per topic, each document drawn
// from a single topic. Finite K (seeds + extras) keeps the ground truth fixed
// for recovery scoring.
struct SyntheticSpec {
  int seed_topics = 5;
  int extra_topics = 3;
  std::uint32_t vocab_size = 200;

  std::string labeled_corpus = "survey";
  std::size_t labeled_docs = 500;
  // Unlabeled corpora with their document counts.
  std::vector<std::pair<std::string, std::size_t>> unlabeled_corpora = {
      {"social", 2000}};

  double mean_length = 8.0;
  int min_length = 1;

  // Topic-word concentration of the generator. 0.2 draws spiky, Zipf-like
  // topics whose documents are actually decodable at short lengths; flatter
  // settings (>= 1) leave so much overlap that no sampler can recover the
  // ground truth from a handful of tokens.
  double beta = 0.2;
  // Popularity concentration; 5.0 keeps topics populated enough for recovery
  // fixtures (a near-zero value would starve some topics of documents).
  double theta_concentration = 5.0;

  // One term block per topic instead of Dirichlet draws: disjoint topic
  // vocabularies, a perfectly separable corpus.
  bool block_vocabulary = false;

  std::uint64_t rng_seed = 1;

  void validate() const;  // throws ConfigError
};

struct SyntheticCorpus {
  std::vector<text::TokenDocument> documents;  // labeled first, then unlabeled
  std::vector<int> true_topic;                 // per document, 1-based
  std::vector<double> theta;
  std::vector<std::vector<double>> phi;
  text::VocabularyIndex vocabulary;

  int seed_topic_count = 0;
};

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

// Alphabetic term names ("taa", "tab", ...) so synthetic text survives the
// digit-stripping normalizer when rendered back to raw records.
std::string synthetic_term_name(std::uint32_t id);

}  // namespace agenda::oracle
