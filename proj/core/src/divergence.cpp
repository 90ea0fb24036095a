#include "klasr/divergence.hpp"

#include <cmath>
#include <string>

#include "klasr/error.hpp"

namespace klasr {

namespace {

void require_symmetric(const SquareMatrix& m, const char* what) {
  double scale = 0.0;
  for (double v : m.entries) scale = std::max(scale, std::abs(v));
  const double tol = 1e-8 * std::max(scale, 1.0);
  for (int i = 0; i < m.order; ++i)
    for (int j = 0; j < i; ++j)
      if (std::abs(m.at(i, j) - m.at(j, i)) > tol)
        throw DataError(std::string(what) + " is not symmetric");
}

double chol_log_det(const SquareMatrix& l) {
  double acc = 0.0;
  for (int i = 0; i < l.order; ++i) acc += std::log(l.at(i, i));
  return 2.0 * acc;
}

// Solves L L^T x = b in place given the Cholesky factor L.
void chol_solve(const SquareMatrix& l, std::vector<double>& b) {
  const int n = l.order;
  for (int i = 0; i < n; ++i) {
    double sum = b[i];
    for (int j = 0; j < i; ++j) sum -= l.at(i, j) * b[j];
    b[i] = sum / l.at(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    double sum = b[i];
    for (int j = i + 1; j < n; ++j) sum -= l.at(j, i) * b[j];
    b[i] = sum / l.at(i, i);
  }
}

}  // namespace

double kl_gaussian(const SquareMatrix& k_x, const SquareMatrix& k_r) {
  if (k_x.order != k_r.order)
    throw DataError("covariance order mismatch: " + std::to_string(k_x.order) +
                    " vs " + std::to_string(k_r.order));
  const int n = k_x.order;
  require_symmetric(k_x, "K_x");
  require_symmetric(k_r, "K_r");

  const auto l_x = cholesky(k_x);
  if (!l_x) throw NumericalError("K_x is not positive-definite");
  const auto l_r = cholesky(k_r);
  if (!l_r) throw NumericalError("K_r is not positive-definite");

  // tr(Kr^-1 Kx) = sum_j (Kr^-1 Kx)_jj, one triangular solve per column.
  double trace = 0.0;
  std::vector<double> col(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) col[i] = k_x.at(i, j);
    chol_solve(*l_r, col);
    trace += col[j];
  }

  const double value =
      0.5 * trace + 0.5 * (chol_log_det(*l_r) - chol_log_det(*l_x)) - 0.5 * n;
  if (value < 0.0 && value > -1e-9) return 0.0;
  return value;
}

double stat_correlation(const AutocorrMatrix& k_x,
                        const CorrelationTemplate& tmpl, StatisticForm form,
                        double log_det_x) {
  if (k_x.order != tmpl.order)
    throw DataError("feature order " + std::to_string(k_x.order) +
                    " does not match template order " +
                    std::to_string(tmpl.order));
  const int p = k_x.order;
  double trace = 0.0;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      trace += tmpl.inverse_matrix.at(i, j) * k_x.matrix.at(j, i);

  if (form == StatisticForm::paper_eq3) return trace - log_det_x;
  return trace + tmpl.log_det_r - log_det_x - static_cast<double>(p);
}

double stat_spectral(const Psd& g_x, const Psd& g_r) {
  if (g_x.bins.size() != g_r.bins.size())
    throw DataError("PSD bin count mismatch: " +
                    std::to_string(g_x.bins.size()) + " vs " +
                    std::to_string(g_r.bins.size()));
  if (g_x.window_len != g_r.window_len)
    throw DataError("PSD window length mismatch");
  if (g_x.sample_rate_hz != g_r.sample_rate_hz)
    throw DataError("PSD sample rate mismatch");

  const size_t f_count = g_x.bins.size();
  double acc = 0.0;
  for (size_t f = 0; f < f_count; ++f) {
    const double x = g_x.bins[f];
    const double r = g_r.bins[f];
    if (x <= 0.0 || r <= 0.0) throw DataError("PSD bins must be positive");
    acc += x / r + std::log(r / x);
  }
  return acc / static_cast<double>(f_count);
}

double stat_filter(double residual_variance_xr, double model_variance_r) {
  if (residual_variance_xr <= 0.0 || model_variance_r <= 0.0)
    throw DataError("variances must be strictly positive");
  const double t = residual_variance_xr / model_variance_r;
  return t + std::log(1.0 / t);
}

double dist_cepstral(const CepstralVector& c_x, const CepstralVector& c_r,
                     CepstralWeighting weighting) {
  if (c_x.coeffs.size() != c_r.coeffs.size())
    throw DataError("cepstral vector length mismatch");
  if (c_x.kind != c_r.kind) throw DataError("cepstral vector kind mismatch");
  double acc = 0.0;
  for (size_t q = 0; q < c_x.coeffs.size(); ++q) {
    const double d = c_x.coeffs[q] - c_r.coeffs[q];
    const double w =
        weighting == CepstralWeighting::index ? static_cast<double>(q) : 1.0;
    acc += w * d * d;
  }
  return std::sqrt(acc);
}

double dist_euclid(const CepstralVector& c_x, const CepstralVector& c_r) {
  if (c_x.coeffs.size() != c_r.coeffs.size())
    throw DataError("cepstral vector length mismatch");
  double acc = 0.0;
  for (size_t q = 0; q < c_x.coeffs.size(); ++q) {
    const double d = c_x.coeffs[q] - c_r.coeffs[q];
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace klasr
