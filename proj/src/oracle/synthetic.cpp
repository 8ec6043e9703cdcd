#include "agenda/oracle/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "agenda/core/errors.hpp"
#include "agenda/core/rng.hpp"

namespace agenda::oracle {

void SyntheticSpec::validate() const {
  if (seed_topics < 0 || extra_topics < 0 || seed_topics + extra_topics < 1) {
    throw ConfigError("synthetic spec needs at least one topic");
  }
  if (vocab_size < 1) throw ConfigError("synthetic vocab_size must be >= 1");
  if (seed_topics > 0 && labeled_docs < static_cast<std::size_t>(seed_topics)) {
    throw ConfigError("labeled_docs must cover every seed topic");
  }
  if (min_length < 1) throw ConfigError("min_length must be >= 1");
  if (mean_length < static_cast<double>(min_length)) {
    throw ConfigError("mean_length must be >= min_length");
  }
  if (!(beta > 0.0) || !(theta_concentration > 0.0)) {
    throw ConfigError("synthetic concentrations must be positive");
  }
}

std::string synthetic_term_name(std::uint32_t id) {
  std::string suffix;
  std::uint32_t value = id;
  do {
    suffix.push_back(static_cast<char>('a' + value % 26));
    value /= 26;
  } while (value > 0);
  std::reverse(suffix.begin(), suffix.end());
  return "t" + std::string(3 > suffix.size() ? 3 - suffix.size() : 0, 'a') +
         suffix;
}

namespace {

struct TokenSampler {
  std::vector<double> cumulative;

  explicit TokenSampler(const std::vector<double>& weights) {
    cumulative.resize(weights.size());
    double total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      total += weights[i];
      cumulative[i] = total;
    }
  }

  std::uint32_t draw(Rng& rng) const {
    const double u = rng.uniform01() * cumulative.back();
    const auto it =
        std::lower_bound(cumulative.begin(), cumulative.end(), u);
    return static_cast<std::uint32_t>(it - cumulative.begin());
  }
};

int draw_length(const SyntheticSpec& spec, Rng& rng) {
  const double extra_mean = spec.mean_length - static_cast<double>(spec.min_length);
  if (extra_mean <= 0.0) return spec.min_length;
  return spec.min_length + rng.poisson(extra_mean);
}

int draw_topic(const std::vector<double>& theta, int limit, Rng& rng) {
  double total = 0.0;
  for (int k = 0; k < limit; ++k) total += theta[static_cast<std::size_t>(k)];
  const double u = rng.uniform01() * total;
  double cumulative = 0.0;
  for (int k = 0; k < limit; ++k) {
    cumulative += theta[static_cast<std::size_t>(k)];
    if (u < cumulative) return k + 1;
  }
  return limit;
}

}  // namespace

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.rng_seed);
  const int topics = spec.seed_topics + spec.extra_topics;
  const std::uint32_t v = spec.vocab_size;

  SyntheticCorpus corpus;
  corpus.seed_topic_count = spec.seed_topics;
  corpus.theta =
      rng.dirichlet_symmetric(static_cast<std::size_t>(topics),
                              spec.theta_concentration);

  corpus.phi.reserve(static_cast<std::size_t>(topics));
  for (int k = 0; k < topics; ++k) {
    if (spec.block_vocabulary) {
      // Uniform over the topic's own block of terms, zero elsewhere.
      std::vector<double> phi(v, 0.0);
      const std::uint32_t begin = static_cast<std::uint32_t>(
          static_cast<std::uint64_t>(k) * v / static_cast<std::uint32_t>(topics));
      const std::uint32_t end = static_cast<std::uint32_t>(
          static_cast<std::uint64_t>(k + 1) * v /
          static_cast<std::uint32_t>(topics));
      for (std::uint32_t w = begin; w < std::max(end, begin + 1); ++w) {
        phi[std::min(w, v - 1)] = 1.0;
      }
      corpus.phi.push_back(std::move(phi));
    } else {
      corpus.phi.push_back(rng.dirichlet_symmetric(v, spec.beta));
    }
  }

  std::vector<TokenSampler> samplers;
  samplers.reserve(corpus.phi.size());
  for (const auto& phi : corpus.phi) samplers.emplace_back(phi);

  std::vector<std::string> term_names;
  term_names.reserve(v);
  for (std::uint32_t w = 0; w < v; ++w) {
    term_names.push_back(synthetic_term_name(w));
  }
  corpus.vocabulary = text::VocabularyIndex::from_terms(std::move(term_names));

  std::size_t serial = 0;
  auto emit = [&](const std::string& corpus_tag, int topic, bool labeled) {
    text::TokenDocument doc;
    doc.id = corpus_tag + "-" + std::to_string(serial++);
    doc.corpus = corpus_tag;
    if (labeled) doc.seed_topic = topic;
    const int length = draw_length(spec, rng);
    doc.tokens.reserve(static_cast<std::size_t>(length));
    const TokenSampler& sampler =
        samplers[static_cast<std::size_t>(topic - 1)];
    for (int t = 0; t < length; ++t) {
      doc.tokens.push_back(sampler.draw(rng));
    }
    corpus.documents.push_back(std::move(doc));
    corpus.true_topic.push_back(topic);
  };

  // The first K labeled documents cover the seed topics deterministically so
  // the init precondition (every seed label present) always holds.
  for (std::size_t d = 0; d < spec.labeled_docs; ++d) {
    const int topic = d < static_cast<std::size_t>(spec.seed_topics)
                          ? static_cast<int>(d) + 1
                          : draw_topic(corpus.theta, spec.seed_topics, rng);
    emit(spec.labeled_corpus, topic, /*labeled=*/true);
  }
  for (const auto& [tag, count] : spec.unlabeled_corpora) {
    for (std::size_t d = 0; d < count; ++d) {
      emit(tag, draw_topic(corpus.theta, topics, rng), /*labeled=*/false);
    }
  }
  return corpus;
}

}  // namespace agenda::oracle
