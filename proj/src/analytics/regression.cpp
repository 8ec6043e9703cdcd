#include "agenda/analytics/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "agenda/analytics/stats.hpp"
#include "agenda/core/errors.hpp"

namespace agenda::analytics {

const char* to_string(HcFlavor flavor) {
  switch (flavor) {
    case HcFlavor::hc0: return "HC0";
    case HcFlavor::hc1: return "HC1";
    case HcFlavor::hc2: return "HC2";
    case HcFlavor::hc3: return "HC3";
  }
  return "HC1";
}

HcFlavor hc_flavor_from_string(std::string_view name) {
  if (name == "HC0" || name == "hc0") return HcFlavor::hc0;
  if (name == "HC1" || name == "hc1") return HcFlavor::hc1;
  if (name == "HC2" || name == "hc2") return HcFlavor::hc2;
  if (name == "HC3" || name == "hc3") return HcFlavor::hc3;
  throw ConfigError("unknown robust-SE flavor: " + std::string(name));
}

const std::vector<double>& RegressionFrame::column(
    const std::string& name) const {
  auto it = covariates.find(name);
  if (it == covariates.end()) {
    throw ConfigError("unknown predictor: " + name);
  }
  return it->second;
}

RegressionFrame build_regression_frame(
    const std::vector<SimilarityCell>& cells) {
  RegressionFrame frame;
  const char* names[] = {"survey",      "fb_politicians", "tw_politicians",
                         "tw_audience", "fb_audience",    "log_tokens",
                         "same_medium", "same_actor",     "topic_politics",
                         "new_topic"};
  for (const char* name : names) frame.covariates[name] = {};

  for (const SimilarityCell& cell : cells) {
    if (cell.token_total <= 0) {
      frame.excluded.push_back(
          {cell.topic_id, cell.corpus_a + "|" + cell.corpus_b, "no-tokens"});
      continue;
    }
    frame.response.push_back(cell.cosine);
    frame.covariates["survey"].push_back(cell.survey_in_pair ? 1.0 : 0.0);
    frame.covariates["fb_politicians"].push_back(
        cell.fb_politicians_in_pair ? 1.0 : 0.0);
    frame.covariates["tw_politicians"].push_back(
        cell.tw_politicians_in_pair ? 1.0 : 0.0);
    frame.covariates["tw_audience"].push_back(
        cell.tw_audience_in_pair ? 1.0 : 0.0);
    frame.covariates["fb_audience"].push_back(
        cell.fb_audience_in_pair ? 1.0 : 0.0);
    frame.covariates["log_tokens"].push_back(
        std::log(static_cast<double>(cell.token_total)));
    frame.covariates["same_medium"].push_back(cell.same_medium ? 1.0 : 0.0);
    frame.covariates["same_actor"].push_back(cell.same_actor ? 1.0 : 0.0);
    frame.covariates["topic_politics"].push_back(
        cell.topic_is_politics ? 1.0 : 0.0);
    frame.covariates["new_topic"].push_back(cell.topic_is_new ? 1.0 : 0.0);
  }
  return frame;
}

std::vector<ModelSpec> similarity_model_specs() {
  const std::vector<std::string> controls = {
      "log_tokens", "same_medium", "same_actor", "topic_politics", "new_topic"};
  auto with = [&](std::vector<std::string> dummies) {
    for (const std::string& c : controls) dummies.push_back(c);
    return dummies;
  };
  return {
      {"model1", with({"survey"})},
      {"model2", with({"survey", "fb_politicians"})},
      {"model3", with({"survey", "fb_politicians", "tw_politicians"})},
      {"model4", with({"survey", "tw_audience"})},
      {"model5", with({"survey", "tw_politicians", "tw_audience"})},
  };
}

RegressionResult ols_hc_robust_raw(
    const std::vector<double>& response,
    const std::vector<std::vector<double>>& columns,
    const std::vector<std::string>& names, HcFlavor flavor) {
  const std::size_t n = response.size();
  const std::size_t p = columns.size() + 1;  // plus intercept
  if (n <= p) {
    throw ConfigError("regression needs more observations than parameters (" +
                      std::to_string(n) + " rows, " + std::to_string(p) +
                      " parameters)");
  }
  for (const auto& column : columns) {
    if (column.size() != n) {
      throw ConfigError("regression columns of unequal length");
    }
  }

  // Design matrix, intercept first; row-major.
  std::vector<double> design(n * p);
  for (std::size_t i = 0; i < n; ++i) {
    design[i * p] = 1.0;
    for (std::size_t j = 0; j + 1 < p; ++j) {
      design[i * p + j + 1] = columns[j][i];
    }
  }
  auto column_name = [&](std::size_t j) {
    return j == 0 ? std::string("(intercept)") : names[j - 1];
  };

  // Householder QR in place; qty carries Q'y.
  std::vector<double> r(design);
  std::vector<double> qty(response);
  double column_scale = 0.0;
  for (double v : design) column_scale = std::max(column_scale, std::fabs(v));
  const double tolerance = 1e-10 * std::max(column_scale, 1.0);

  std::vector<double> householder(n);
  for (std::size_t j = 0; j < p; ++j) {
    double norm = 0.0;
    for (std::size_t i = j; i < n; ++i) norm += r[i * p + j] * r[i * p + j];
    norm = std::sqrt(norm);
    if (norm <= tolerance) {
      throw ConfigError("collinear or constant predictor: " + column_name(j));
    }
    if (r[j * p + j] < 0) norm = -norm;  // v_j = 1 + |x_j| / |norm|
    for (std::size_t i = j; i < n; ++i) householder[i] = r[i * p + j] / norm;
    householder[j] += 1.0;
    // apply I - v v^T / v_j to the columns (j itself becomes -norm e_j)
    for (std::size_t k = j; k < p; ++k) {
      double s = 0.0;
      for (std::size_t i = j; i < n; ++i) s += householder[i] * r[i * p + k];
      s = -s / householder[j];
      for (std::size_t i = j; i < n; ++i) r[i * p + k] += s * householder[i];
    }
    double s = 0.0;
    for (std::size_t i = j; i < n; ++i) s += householder[i] * qty[i];
    s = -s / householder[j];
    for (std::size_t i = j; i < n; ++i) qty[i] += s * householder[i];
  }
  for (std::size_t j = 0; j < p; ++j) {
    if (std::fabs(r[j * p + j]) <= tolerance) {
      throw ConfigError("collinear or constant predictor: " + column_name(j));
    }
  }

  // Back substitution for the coefficients.
  std::vector<double> beta(p, 0.0);
  for (std::size_t j = p; j-- > 0;) {
    double s = qty[j];
    for (std::size_t k = j + 1; k < p; ++k) s -= r[j * p + k] * beta[k];
    beta[j] = s / r[j * p + j];
  }

  // Residuals and fit statistics.
  std::vector<double> residuals(n);
  double mean_y = 0.0;
  for (double y : response) mean_y += y;
  mean_y /= static_cast<double>(n);
  double ssr = 0.0, sst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double fitted = 0.0;
    for (std::size_t j = 0; j < p; ++j) fitted += design[i * p + j] * beta[j];
    residuals[i] = response[i] - fitted;
    ssr += residuals[i] * residuals[i];
    sst += (response[i] - mean_y) * (response[i] - mean_y);
  }

  // R^{-1}, upper triangular.
  std::vector<double> r_inv(p * p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    r_inv[j * p + j] = 1.0 / r[j * p + j];
    for (std::size_t i = j; i-- > 0;) {
      double s = 0.0;
      for (std::size_t k = i + 1; k <= j; ++k) {
        s += r[i * p + k] * r_inv[k * p + j];
      }
      r_inv[i * p + j] = -s / r[i * p + i];
    }
  }
  // (X'X)^-1 = R^-1 R^-T
  std::vector<double> xtx_inv(p * p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      double s = 0.0;
      for (std::size_t k = std::max(i, j); k < p; ++k) {
        s += r_inv[i * p + k] * r_inv[j * p + k];
      }
      xtx_inv[i * p + j] = s;
    }
  }

  // Sandwich: (X'X)^-1 X' diag(w) X (X'X)^-1 with the flavor's weights.
  const double dof = static_cast<double>(n) - static_cast<double>(p);
  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double e2 = residuals[i] * residuals[i];
    switch (flavor) {
      case HcFlavor::hc0: weights[i] = e2; break;
      case HcFlavor::hc1:
        weights[i] = e2 * static_cast<double>(n) / dof;
        break;
      case HcFlavor::hc2:
      case HcFlavor::hc3: {
        // leverage h_i = x_i' (X'X)^-1 x_i
        double h = 0.0;
        for (std::size_t a = 0; a < p; ++a) {
          double s = 0.0;
          for (std::size_t b = 0; b < p; ++b) {
            s += xtx_inv[a * p + b] * design[i * p + b];
          }
          h += design[i * p + a] * s;
        }
        const double denom = 1.0 - h;
        weights[i] = flavor == HcFlavor::hc2 ? e2 / denom : e2 / (denom * denom);
        break;
      }
    }
  }
  std::vector<double> meat(p * p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < p; ++a) {
      const double wa = weights[i] * design[i * p + a];
      for (std::size_t b = 0; b < p; ++b) {
        meat[a * p + b] += wa * design[i * p + b];
      }
    }
  }
  std::vector<double> half(p * p, 0.0);
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = 0; b < p; ++b) {
      double s = 0.0;
      for (std::size_t k = 0; k < p; ++k) {
        s += xtx_inv[a * p + k] * meat[k * p + b];
      }
      half[a * p + b] = s;
    }
  }
  std::vector<double> covariance(p * p, 0.0);
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = 0; b < p; ++b) {
      double s = 0.0;
      for (std::size_t k = 0; k < p; ++k) {
        s += half[a * p + k] * xtx_inv[k * p + b];
      }
      covariance[a * p + b] = s;
    }
  }

  RegressionResult result;
  result.n = n;
  result.flavor = flavor;
  result.r_squared = sst > 0.0 ? 1.0 - ssr / sst : 1.0;
  result.adj_r_squared =
      1.0 - (1.0 - result.r_squared) * (static_cast<double>(n) - 1.0) / dof;
  // predictors first, intercept reported last
  for (std::size_t j = 1; j < p; ++j) result.names.push_back(names[j - 1]);
  result.names.push_back("(intercept)");
  auto emit = [&](std::size_t j) {
    result.coefficients.push_back(beta[j]);
    const double se = std::sqrt(std::max(covariance[j * p + j], 0.0));
    result.robust_se.push_back(se);
    const double t = se > 0.0 ? beta[j] / se
                              : std::numeric_limits<double>::infinity();
    result.t_values.push_back(t);
    result.p_values.push_back(student_t_two_sided_p(t, dof));
  };
  for (std::size_t j = 1; j < p; ++j) emit(j);
  emit(0);
  return result;
}

RegressionResult ols_hc_robust(const RegressionFrame& frame,
                               const std::vector<std::string>& predictors,
                               HcFlavor flavor) {
  std::vector<std::vector<double>> columns;
  for (const std::string& name : predictors) {
    columns.push_back(frame.column(name));
  }
  return ols_hc_robust_raw(frame.response, columns, predictors, flavor);
}

}  // namespace agenda::analytics
