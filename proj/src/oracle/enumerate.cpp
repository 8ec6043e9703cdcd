#include "agenda/oracle/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "agenda/core/errors.hpp"

namespace agenda::oracle {

namespace {

struct Instance {
  std::vector<std::vector<std::uint32_t>> labeled_tokens;   // by seed topic use
  std::vector<int> labeled_topics;
  std::vector<std::vector<std::uint32_t>> unlabeled_tokens;
  std::uint32_t vocab_size = 0;
  int seed_topics = 0;
  double alpha = 0, beta = 0;
};

// Closed-form collapsed joint of one complete assignment: CRP partition term
// plus a Dirichlet-multinomial word term per occupied topic.
double log_joint_closed_form(const Instance& inst,
                             const std::vector<int>& unlabeled_assignment) {
  const int max_topic =
      inst.seed_topics + static_cast<int>(inst.unlabeled_tokens.size());
  std::vector<double> doc_counts(static_cast<std::size_t>(max_topic) + 1, 0.0);
  std::vector<std::map<std::uint32_t, int>> term_counts(
      static_cast<std::size_t>(max_topic) + 1);
  std::vector<std::int64_t> token_totals(static_cast<std::size_t>(max_topic) + 1,
                                         0);

  for (std::size_t d = 0; d < inst.labeled_tokens.size(); ++d) {
    const int k = inst.labeled_topics[d];
    doc_counts[static_cast<std::size_t>(k)] += 1;
    for (std::uint32_t w : inst.labeled_tokens[d]) {
      term_counts[static_cast<std::size_t>(k)][w] += 1;
      token_totals[static_cast<std::size_t>(k)] += 1;
    }
  }
  for (std::size_t d = 0; d < inst.unlabeled_tokens.size(); ++d) {
    const int k = unlabeled_assignment[d];
    doc_counts[static_cast<std::size_t>(k)] += 1;
    for (std::uint32_t w : inst.unlabeled_tokens[d]) {
      term_counts[static_cast<std::size_t>(k)][w] += 1;
      token_totals[static_cast<std::size_t>(k)] += 1;
    }
  }

  const double total_docs = static_cast<double>(inst.labeled_tokens.size() +
                                                inst.unlabeled_tokens.size());
  const double vocab_beta = static_cast<double>(inst.vocab_size) * inst.beta;

  double lj = std::lgamma(inst.alpha) - std::lgamma(inst.alpha + total_docs);
  for (int k = 1; k <= max_topic; ++k) {
    const double n_k = doc_counts[static_cast<std::size_t>(k)];
    if (n_k == 0) continue;
    lj += std::log(inst.alpha) + std::lgamma(n_k);
    lj += std::lgamma(vocab_beta) -
          std::lgamma(static_cast<double>(token_totals[static_cast<std::size_t>(k)]) +
                      vocab_beta);
    for (const auto& [term, count] : term_counts[static_cast<std::size_t>(k)]) {
      lj += std::lgamma(static_cast<double>(count) + inst.beta) -
            std::lgamma(inst.beta);
    }
  }
  return lj;
}

}  // namespace

std::vector<int> canonicalize_assignment(std::vector<int> assignment,
                                         int seed_topic_count) {
  std::map<int, int> relabel;
  int next = seed_topic_count + 1;
  for (int& z : assignment) {
    if (z <= seed_topic_count) continue;
    auto it = relabel.find(z);
    if (it == relabel.end()) {
      relabel.emplace(z, next);
      z = next;
      ++next;
    } else {
      z = it->second;
    }
  }
  return assignment;
}

double count_canonical_assignments(int seed_topic_count, int unlabeled_docs) {
  // count(i, m): choices for doc i given m new topics already open.
  std::vector<double> by_new(static_cast<std::size_t>(unlabeled_docs) + 1, 0.0);
  by_new[0] = 1.0;
  for (int i = 0; i < unlabeled_docs; ++i) {
    std::vector<double> next(by_new.size(), 0.0);
    for (int m = 0; m <= i; ++m) {
      const double ways = by_new[static_cast<std::size_t>(m)];
      if (ways == 0) continue;
      next[static_cast<std::size_t>(m)] +=
          ways * static_cast<double>(seed_topic_count + m);
      next[static_cast<std::size_t>(m) + 1] += ways;
    }
    by_new = std::move(next);
  }
  double total = 0.0;
  for (double ways : by_new) total += ways;
  return total;
}

double EnumeratedPosterior::probability_of(
    const std::vector<int>& assignment) const {
  auto it = probabilities.find(
      canonicalize_assignment(assignment, seed_topic_count));
  return it == probabilities.end() ? 0.0 : it->second;
}

EnumeratedPosterior enumerate_exact_posterior(
    const std::vector<text::TokenDocument>& docs,
    const model::ModelParams& params, std::uint32_t vocab_size,
    int seed_topic_count, double max_support) {
  Instance inst;
  inst.vocab_size = vocab_size;
  inst.seed_topics = seed_topic_count;
  inst.alpha = params.alpha;
  inst.beta = params.beta;
  for (const text::TokenDocument& doc : docs) {
    if (doc.seed_topic) {
      if (*doc.seed_topic < 1 || *doc.seed_topic > seed_topic_count) {
        throw DataError("seed topic out of range in enumeration fixture");
      }
      inst.labeled_tokens.push_back(doc.tokens);
      inst.labeled_topics.push_back(*doc.seed_topic);
    } else {
      inst.unlabeled_tokens.push_back(doc.tokens);
    }
  }

  const int unlabeled = static_cast<int>(inst.unlabeled_tokens.size());
  const double support =
      count_canonical_assignments(seed_topic_count, unlabeled);
  if (support > max_support) {
    throw DataError("enumeration refused: " + std::to_string(support) +
                    " canonical assignments exceed the limit of " +
                    std::to_string(max_support));
  }

  EnumeratedPosterior posterior;
  posterior.seed_topic_count = seed_topic_count;

  std::vector<int> assignment(static_cast<std::size_t>(unlabeled), 0);
  std::vector<std::pair<std::vector<int>, double>> table;
  // Depth-first over canonical vectors: each doc may join a seed topic, an
  // already-open new topic, or open the next one.
  auto recurse = [&](auto&& self, int doc, int open_new) -> void {
    if (doc == unlabeled) {
      table.emplace_back(assignment, log_joint_closed_form(inst, assignment));
      return;
    }
    for (int k = 1; k <= seed_topic_count + open_new; ++k) {
      assignment[static_cast<std::size_t>(doc)] = k;
      self(self, doc + 1, open_new);
    }
    assignment[static_cast<std::size_t>(doc)] =
        seed_topic_count + open_new + 1;
    self(self, doc + 1, open_new + 1);
  };
  recurse(recurse, 0, 0);

  double shift = -std::numeric_limits<double>::infinity();
  for (const auto& [z, lj] : table) shift = std::max(shift, lj);
  double total = 0.0;
  for (const auto& [z, lj] : table) total += std::exp(lj - shift);
  for (const auto& [z, lj] : table) {
    posterior.probabilities[z] = std::exp(lj - shift) / total;
  }
  return posterior;
}

}  // namespace agenda::oracle
