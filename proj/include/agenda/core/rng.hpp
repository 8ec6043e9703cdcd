#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace agenda {

// Deterministic random source for every stochastic step in the project.
//
// mt19937_64 has a standard-specified stream, so seeds replay identically on
// any conforming implementation. The distributions are hand-rolled because the
// std::*_distribution classes are implementation-defined and would break
// replay across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53 random bits. Never returns 1.0.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n); n must be positive. Unbiased (rejection).
  std::uint64_t uniform_below(std::uint64_t n);

  // Standard normal via Box-Muller (the cosine branch only, no cached spare,
  // so the consumed stream length is always two draws).
  double normal();

  // Gamma(shape, 1), Marsaglia-Tsang; boost for shape < 1.
  double gamma(double shape);

  std::vector<double> dirichlet(const std::vector<double>& concentration);
  std::vector<double> dirichlet_symmetric(std::size_t dim, double concentration);

  // Poisson by inversion; fine for the small means used here.
  int poisson(double mean);

  // Index draw from unnormalized log weights (max-shift, then CDF walk).
  std::size_t sample_log_weights(const std::vector<double>& log_weights);

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  // Text round trip of the full engine state (standard-mandated format).
  std::string serialize() const;
  static Rng deserialize(const std::string& text);

  bool operator==(const Rng& other) const { return engine_ == other.engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace agenda
