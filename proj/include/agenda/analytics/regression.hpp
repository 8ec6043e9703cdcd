#pragma once

#include <map>
#include <string>
#include <vector>

#include "agenda/analytics/similarity.hpp"

namespace agenda::analytics {

enum class HcFlavor { hc0, hc1, hc2, hc3 };
const char* to_string(HcFlavor flavor);
HcFlavor hc_flavor_from_string(std::string_view name);

// Long-form design data built from the similarity cells: the cosine response
// plus every covariate column by name. Cells without tokens cannot enter
// (log of zero) and are reported.
struct RegressionFrame {
  std::vector<double> response;
  std::map<std::string, std::vector<double>> covariates;
  struct ExcludedCell {
    int topic_id = 0;
    std::string pair;
    std::string reason;
  };
  std::vector<ExcludedCell> excluded;

  std::size_t n() const { return response.size(); }
  const std::vector<double>& column(const std::string& name) const;
};

RegressionFrame build_regression_frame(const std::vector<SimilarityCell>& cells);

// The five corpus-dummy specifications reported for this analysis, as
// predictor-name subsets of the frame.
struct ModelSpec {
  std::string name;
  std::vector<std::string> predictors;
};
std::vector<ModelSpec> similarity_model_specs();

struct RegressionResult {
  std::vector<std::string> names;  // predictors, then "(intercept)" last
  std::vector<double> coefficients;
  std::vector<double> robust_se;
  std::vector<double> t_values;
  std::vector<double> p_values;
  double r_squared = 0.0;
  double adj_r_squared = 0.0;
  std::size_t n = 0;
  HcFlavor flavor = HcFlavor::hc1;
};

// OLS through a Householder QR with heteroskedasticity-consistent sandwich
// standard errors; p-values from the t distribution with n - p degrees of
// freedom. Exactly collinear predictors raise ConfigError naming the column.
RegressionResult ols_hc_robust(const RegressionFrame& frame,
                               const std::vector<std::string>& predictors,
                               HcFlavor flavor = HcFlavor::hc1);

// Same estimator on raw columns (used by fixtures and the validate suite).
RegressionResult ols_hc_robust_raw(const std::vector<double>& response,
                                   const std::vector<std::vector<double>>& columns,
                                   const std::vector<std::string>& names,
                                   HcFlavor flavor);

}  // namespace agenda::analytics
