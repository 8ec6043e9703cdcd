#include "agenda/core/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace agenda {

std::uint64_t Rng::uniform_below(std::uint64_t n) {
  if (n == 0) {
    throw std::invalid_argument("uniform_below(0)");
  }
  // Rejection sampling over the largest multiple of n.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::normal() {
  // u1 in (0, 1] so the log is finite.
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

double Rng::gamma(double shape) {
  if (!(shape > 0.0)) {
    throw std::invalid_argument("gamma shape must be positive");
  }
  if (shape < 1.0) {
    const double u = 1.0 - uniform01();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = 1.0 - uniform01();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
      return d * v;
    }
  }
}

std::vector<double> Rng::dirichlet(const std::vector<double>& concentration) {
  std::vector<double> draw(concentration.size());
  double total = 0.0;
  for (std::size_t i = 0; i < concentration.size(); ++i) {
    draw[i] = gamma(concentration[i]);
    total += draw[i];
  }
  for (double& value : draw) {
    value /= total;
  }
  return draw;
}

std::vector<double> Rng::dirichlet_symmetric(std::size_t dim,
                                             double concentration) {
  return dirichlet(std::vector<double>(dim, concentration));
}

int Rng::poisson(double mean) {
  if (!(mean >= 0.0)) {
    throw std::invalid_argument("poisson mean must be non-negative");
  }
  if (mean == 0.0) return 0;
  const double limit = std::exp(-mean);
  int k = 0;
  double product = 1.0;
  for (;;) {
    product *= uniform01();
    if (product <= limit) return k;
    ++k;
  }
}

std::size_t Rng::sample_log_weights(const std::vector<double>& log_weights) {
  if (log_weights.empty()) {
    throw std::invalid_argument("sample_log_weights: empty");
  }
  const double shift = *std::max_element(log_weights.begin(), log_weights.end());
  double total = 0.0;
  for (double lw : log_weights) {
    total += std::exp(lw - shift);
  }
  const double u = uniform01() * total;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    cumulative += std::exp(log_weights[i] - shift);
    if (u < cumulative) return i;
  }
  return log_weights.size() - 1;
}

std::string Rng::serialize() const {
  std::ostringstream out;
  out << engine_;
  return out.str();
}

Rng Rng::deserialize(const std::string& text) {
  Rng rng(0);
  std::istringstream in(text);
  in >> rng.engine_;
  if (!in) {
    throw std::invalid_argument("invalid rng state text");
  }
  return rng;
}

}  // namespace agenda
