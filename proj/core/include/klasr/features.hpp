#pragma once

#include <vector>

#include "klasr/linalg.hpp"
#include "klasr/signal.hpp"

namespace klasr {

/// Averaged outer-product autocorrelation estimate plus trace-scaled ridge.
struct AutocorrMatrix {
  int order = 0;
  SquareMatrix matrix;
  int window_count = 0;
};

/// Averaged Hamming-windowed periodogram. bins[k] is the power at frequency
/// k * rate / window_len for k = 0 .. window_len/2 - 1.
struct Psd {
  std::vector<double> bins;
  int window_len = 0;
  int sample_rate_hz = 0;
};

/// All-pole model in predictor convention: x_t = sum_{i=1..P} coeffs[i-1] *
/// x_{t-i} + e_t, Var(e) = residual_variance.
struct ArModel {
  std::vector<double> coeffs;
  double residual_variance = 0.0;
  int order = 0;
};

struct CepstralVector {
  enum class Kind { ar_cepstrum, msfb_cepstrum };
  std::vector<double> coeffs;
  Kind kind = Kind::ar_cepstrum;
};

/// Mean of outer products over floor(n/order) non-overlapping order-sample
/// windows (remainder dropped), then ridge epsilon * (tr/P) * I.
AutocorrMatrix estimate_autocorr_matrix(const Signal& s, int order,
                                        double regularization);

/// Welch estimate: Hamming windows of window_len samples (power of two)
/// advanced by window_len * (1 - overlap_fraction), periodograms normalized
/// by the window power and averaged. Bins are floored at 1e-12 * max bin.
Psd estimate_psd(const Signal& s, int window_len, double overlap_fraction);

/// Burg lattice recursion minimizing forward+backward prediction error.
/// Requires len(s) > 2 * order; reflection coefficients stay inside (-1, 1).
ArModel fit_ar_burg(const Signal& s, int order);

/// Runs the transversal whitening filter e_t = x_t - sum a_i x_{t-i} over
/// t in [order, n) and returns the mean squared residual.
double whiten(const Signal& s, const ArModel& model);

/// Cepstrum from AR coefficients: c_0 = ln(residual_variance), then
/// c_q = a_q + sum_{k=1}^{q-1} (k/q) c_k a_{q-k}. Returns n_coeffs values
/// starting at c_0.
CepstralVector ar_cepstrum(const ArModel& model, int n_coeffs);

/// Mel filter bank cepstrum: PSD -> triangular mel filters spanning
/// 0..rate/2 -> floored log energies -> DCT-II, first n_ceps coefficients.
CepstralVector msfb_cepstrum(const Signal& s, int n_filters, int n_ceps,
                             int window_len);

}  // namespace klasr
