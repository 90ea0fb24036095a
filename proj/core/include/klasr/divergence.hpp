#pragma once

#include "klasr/features.hpp"
#include "klasr/linalg.hpp"

namespace klasr {

/// Precomputed recognition channel for the correlation method: the inverted,
/// regularized reference matrix and its log determinant.
struct CorrelationTemplate {
  SquareMatrix inverse_matrix;
  double log_det_r = 0.0;
  int order = 0;
};

/// paper_eq3: tr(Kr^-1 Kx) - ln det Kx.
/// full_kl:  tr(Kr^-1 Kx) + ln det Kr - ln det Kx - P, which ranks
/// identically to the Gaussian divergence (twice its value).
enum class StatisticForm { paper_eq3, full_kl };

enum class CepstralWeighting { uniform, index };

/// Divergence between two zero-mean Gaussian processes with covariances k_x
/// and k_r: 0.5 tr(Kr^-1 Kx) + 0.5 ln(det Kr / det Kx) - n/2. Both inputs
/// must be symmetric positive-definite of equal order. Tiny negative results
/// (> -1e-9) are clamped to zero.
double kl_gaussian(const SquareMatrix& k_x, const SquareMatrix& k_r);

/// Correlation-channel score. log_det_x is ln det of k_x's matrix, computed
/// once per input and shared across channels.
double stat_correlation(const AutocorrMatrix& k_x,
                        const CorrelationTemplate& tmpl, StatisticForm form,
                        double log_det_x);

/// Spectral score (1/F) sum[Gx/Gr + ln(Gr/Gx)]; >= 1, equal to 1 iff the
/// ratio is identically 1.
double stat_spectral(const Psd& g_x, const Psd& g_r);

/// Whitening-filter score s2_xr/s2_r + ln(s2_r/s2_xr); >= 1.
double stat_filter(double residual_variance_xr, double model_variance_r);

/// Weighted Euclidean distance sqrt(sum w_q (cx_q - cr_q)^2) with w_q = 1
/// (uniform) or w_q = q (index). Vectors must share length and kind.
double dist_cepstral(const CepstralVector& c_x, const CepstralVector& c_r,
                     CepstralWeighting weighting);

/// Plain Euclidean distance; lengths must match.
double dist_euclid(const CepstralVector& c_x, const CepstralVector& c_r);

}  // namespace klasr
