#include "agenda/validate/ols_reference.hpp"

#include <cmath>
#include <stdexcept>

namespace agenda::validate {

namespace {

using Matrix = std::vector<std::vector<double>>;

Matrix invert(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row) {
      if (std::fabs(a[row][col]) > std::fabs(a[pivot][col])) pivot = row;
    }
    if (std::fabs(a[pivot][col]) < 1e-12) {
      throw std::runtime_error("reference OLS: singular normal equations");
    }
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    const double scale = a[col][col];
    for (std::size_t k = 0; k < n; ++k) {
      a[col][k] /= scale;
      inv[col][k] /= scale;
    }
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col) continue;
      const double factor = a[row][col];
      for (std::size_t k = 0; k < n; ++k) {
        a[row][k] -= factor * a[col][k];
        inv[row][k] -= factor * inv[col][k];
      }
    }
  }
  return inv;
}

}  // namespace

ReferenceOls reference_ols(const std::vector<double>& response,
                           const std::vector<std::vector<double>>& columns,
                           analytics::HcFlavor flavor) {
  const std::size_t n = response.size();
  const std::size_t p = columns.size() + 1;

  Matrix x(n, std::vector<double>(p, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j + 1 < p; ++j) x[i][j + 1] = columns[j][i];
  }

  Matrix xtx(p, std::vector<double>(p, 0.0));
  std::vector<double> xty(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < p; ++a) {
      xty[a] += x[i][a] * response[i];
      for (std::size_t b = 0; b < p; ++b) xtx[a][b] += x[i][a] * x[i][b];
    }
  }
  const Matrix xtx_inv = invert(xtx);

  ReferenceOls result;
  result.coefficients.assign(p, 0.0);
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = 0; b < p; ++b) {
      result.coefficients[a] += xtx_inv[a][b] * xty[b];
    }
  }

  std::vector<double> residuals(n);
  double mean_y = 0.0;
  for (double y : response) mean_y += y;
  mean_y /= static_cast<double>(n);
  double ssr = 0.0, sst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double fitted = 0.0;
    for (std::size_t j = 0; j < p; ++j) fitted += x[i][j] * result.coefficients[j];
    residuals[i] = response[i] - fitted;
    ssr += residuals[i] * residuals[i];
    sst += (response[i] - mean_y) * (response[i] - mean_y);
  }
  result.r_squared = sst > 0.0 ? 1.0 - ssr / sst : 1.0;

  Matrix meat(p, std::vector<double>(p, 0.0));
  const double dof = static_cast<double>(n) - static_cast<double>(p);
  for (std::size_t i = 0; i < n; ++i) {
    double weight = residuals[i] * residuals[i];
    switch (flavor) {
      case analytics::HcFlavor::hc0: break;
      case analytics::HcFlavor::hc1:
        weight *= static_cast<double>(n) / dof;
        break;
      case analytics::HcFlavor::hc2:
      case analytics::HcFlavor::hc3: {
        double leverage = 0.0;
        for (std::size_t a = 0; a < p; ++a) {
          for (std::size_t b = 0; b < p; ++b) {
            leverage += x[i][a] * xtx_inv[a][b] * x[i][b];
          }
        }
        weight /= flavor == analytics::HcFlavor::hc2
                      ? (1.0 - leverage)
                      : (1.0 - leverage) * (1.0 - leverage);
        break;
      }
    }
    for (std::size_t a = 0; a < p; ++a) {
      for (std::size_t b = 0; b < p; ++b) {
        meat[a][b] += weight * x[i][a] * x[i][b];
      }
    }
  }
  result.robust_se.assign(p, 0.0);
  for (std::size_t a = 0; a < p; ++a) {
    double variance = 0.0;
    for (std::size_t k = 0; k < p; ++k) {
      for (std::size_t l = 0; l < p; ++l) {
        variance += xtx_inv[a][k] * meat[k][l] * xtx_inv[l][a];
      }
    }
    result.robust_se[a] = std::sqrt(variance);
  }
  return result;
}

}  // namespace agenda::validate
