#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace agenda::model {

// Document likelihood used by the collapsed sampler. The approximate form
// scores every token of a document against the same counts; the exact
// collapsed form is the ascending-factorial (Polya) predictive, which is the
// one with a well-defined stationary distribution. Both coincide for
// single-token documents.
enum class LikelihoodMode { paper_approximate, exact_collapsed };

const char* to_string(LikelihoodMode mode);
LikelihoodMode likelihood_mode_from_string(std::string_view name);

struct ModelParams {
  double alpha = 1.0;  // Dirichlet-process concentration
  double beta = 1.5;   // symmetric topic-word smoothing
  int sweeps = 100;
  LikelihoodMode likelihood_mode = LikelihoodMode::paper_approximate;
  std::uint64_t rng_seed = 0;
  // Fixed insertion-order visits by default (cross-platform determinism);
  // shuffling is for sensitivity runs.
  bool shuffle_each_sweep = false;

  void validate() const;  // throws ConfigError
};

}  // namespace agenda::model
