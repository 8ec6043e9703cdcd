#pragma once

#include <vector>

#include "agenda/analytics/regression.hpp"

namespace agenda::validate {

// Independent check of the QR-based estimator: plain normal equations solved
// by Gauss-Jordan elimination, sandwich assembled element by element. Shares
// no code with analytics::ols_hc_robust on purpose.
struct ReferenceOls {
  std::vector<double> coefficients;  // intercept first
  std::vector<double> robust_se;     // intercept first
  double r_squared = 0.0;
};

ReferenceOls reference_ols(const std::vector<double>& response,
                           const std::vector<std::vector<double>>& columns,
                           analytics::HcFlavor flavor);

}  // namespace agenda::validate
