#include "klasr/features.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "klasr/error.hpp"

namespace klasr {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 FFT, in place. Length must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

std::vector<double> hamming_window(int n) {
  std::vector<double> w(n);
  for (int m = 0; m < n; ++m)
    w[m] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * m / (n - 1));
  return w;
}

double mel_of_hz(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }

double hz_of_mel(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

}  // namespace

AutocorrMatrix estimate_autocorr_matrix(const Signal& s, int order,
                                        double regularization) {
  validate_signal(s);
  if (order < 1) throw DataError("matrix order must be >= 1");
  if (regularization < 0.0) throw DataError("regularization must be >= 0");
  const int n = s.length();
  const int w = n / order;
  if (w < 1)
    throw DataError("signal of length " + std::to_string(n) +
                    " has no full window of " + std::to_string(order));

  AutocorrMatrix out;
  out.order = order;
  out.window_count = w;
  out.matrix = SquareMatrix(order);
  for (int win = 0; win < w; ++win) {
    const double* x = s.samples.data() + static_cast<size_t>(win) * order;
    for (int i = 0; i < order; ++i)
      for (int j = 0; j <= i; ++j) out.matrix.at(i, j) += x[i] * x[j];
  }
  const double inv_w = 1.0 / static_cast<double>(w);
  for (int i = 0; i < order; ++i)
    for (int j = 0; j <= i; ++j) {
      out.matrix.at(i, j) *= inv_w;
      out.matrix.at(j, i) = out.matrix.at(i, j);
    }

  if (regularization > 0.0) {
    double trace = 0.0;
    for (int i = 0; i < order; ++i) trace += out.matrix.at(i, i);
    const double ridge = regularization * trace / static_cast<double>(order);
    for (int i = 0; i < order; ++i) out.matrix.at(i, i) += ridge;
  }
  return out;
}

Psd estimate_psd(const Signal& s, int window_len, double overlap_fraction) {
  validate_signal(s);
  if (!is_power_of_two(window_len))
    throw DataError("window length must be a power of two, got " +
                    std::to_string(window_len));
  if (overlap_fraction < 0.0 || overlap_fraction >= 1.0)
    throw DataError("overlap fraction must lie in [0, 1)");
  const int n = s.length();
  if (n < window_len)
    throw DataError("signal of length " + std::to_string(n) +
                    " is shorter than the " + std::to_string(window_len) +
                    "-sample window");

  const auto window = hamming_window(window_len);
  double window_power = 0.0;
  for (double v : window) window_power += v * v;

  const int hop = std::max(1, static_cast<int>(std::lround(
                                  window_len * (1.0 - overlap_fraction))));
  const int n_bins = window_len / 2;

  Psd out;
  out.window_len = window_len;
  out.sample_rate_hz = s.sample_rate_hz;
  out.bins.assign(n_bins, 0.0);

  std::vector<std::complex<double>> buf(window_len);
  int n_windows = 0;
  for (int start = 0; start + window_len <= n; start += hop) {
    for (int m = 0; m < window_len; ++m)
      buf[m] = {window[m] * s.samples[start + m], 0.0};
    fft_radix2(buf);
    for (int k = 0; k < n_bins; ++k) out.bins[k] += std::norm(buf[k]);
    ++n_windows;
  }
  const double norm = 1.0 / (window_power * n_windows);
  double max_bin = 0.0;
  for (double& b : out.bins) {
    b *= norm;
    max_bin = std::max(max_bin, b);
  }
  if (max_bin <= 0.0)
    throw NumericalError("degenerate signal: all-zero power spectrum");
  const double floor = 1e-12 * max_bin;
  for (double& b : out.bins) b = std::max(b, floor);
  return out;
}

ArModel fit_ar_burg(const Signal& s, int order) {
  validate_signal(s);
  if (order < 1) throw DataError("AR order must be >= 1");
  const int n = s.length();
  if (n <= 2 * order)
    throw DataError("signal of length " + std::to_string(n) +
                    " too short for Burg order " + std::to_string(order));

  const std::vector<double>& x = s.samples;
  std::vector<double> fwd(x), bwd(x);
  std::vector<double> a(order + 1, 0.0), prev(order + 1, 0.0);

  double energy = 0.0;
  for (double v : x) energy += v * v;
  energy /= static_cast<double>(n);

  for (int m = 1; m <= order; ++m) {
    // Reflection coefficient from forward/backward error cross power over
    // the overlap t in [m, n).
    double num = 0.0, den = 0.0;
    for (int t = m; t < n; ++t) {
      num += fwd[t] * bwd[t - 1];
      den += fwd[t] * fwd[t] + bwd[t - 1] * bwd[t - 1];
    }
    if (den <= 0.0)
      throw NumericalError("prediction error power vanished at order " +
                           std::to_string(m) + " (perfectly predictable input)");
    const double k = 2.0 * num / den;
    if (!(std::abs(k) < 1.0))
      throw NumericalError("reflection coefficient left (-1, 1) at order " +
                           std::to_string(m));

    prev = a;
    a[m] = k;
    for (int i = 1; i < m; ++i) a[i] = prev[i] - k * prev[m - i];
    energy *= 1.0 - k * k;

    for (int t = n - 1; t >= m; --t) {
      const double f = fwd[t];
      const double b = bwd[t - 1];
      fwd[t] = f - k * b;
      bwd[t] = b - k * f;
    }
  }
  if (energy <= 0.0)
    throw NumericalError("non-positive residual variance after Burg recursion");

  ArModel model;
  model.order = order;
  model.coeffs.assign(a.begin() + 1, a.end());
  model.residual_variance = energy;
  return model;
}

double whiten(const Signal& s, const ArModel& model) {
  validate_signal(s);
  const int p = model.order;
  if (p < 1 || static_cast<int>(model.coeffs.size()) != p)
    throw DataError("malformed AR model");
  const int n = s.length();
  if (n < p + 2)
    throw DataError("signal of length " + std::to_string(n) +
                    " too short to whiten with order " + std::to_string(p));

  double acc = 0.0;
  for (int t = p; t < n; ++t) {
    double e = s.samples[t];
    for (int i = 1; i <= p; ++i) e -= model.coeffs[i - 1] * s.samples[t - i];
    acc += e * e;
  }
  return acc / static_cast<double>(n - p);
}

CepstralVector ar_cepstrum(const ArModel& model, int n_coeffs) {
  if (n_coeffs < 1) throw DataError("cepstrum length must be >= 1");
  if (model.residual_variance <= 0.0)
    throw DataError("AR model must have positive residual variance");

  auto a = [&](int q) {
    return (q >= 1 && q <= model.order) ? model.coeffs[q - 1] : 0.0;
  };
  CepstralVector out;
  out.kind = CepstralVector::Kind::ar_cepstrum;
  out.coeffs.resize(n_coeffs);
  out.coeffs[0] = std::log(model.residual_variance);
  for (int q = 1; q < n_coeffs; ++q) {
    double c = a(q);
    for (int k = 1; k < q; ++k)
      c += (static_cast<double>(k) / q) * out.coeffs[k] * a(q - k);
    out.coeffs[q] = c;
  }
  return out;
}

CepstralVector msfb_cepstrum(const Signal& s, int n_filters, int n_ceps,
                             int window_len) {
  if (n_ceps < 1) throw DataError("cepstrum length must be >= 1");
  if (n_filters < n_ceps)
    throw DataError("need at least as many filters as cepstral coefficients");

  const Psd psd = estimate_psd(s, window_len, 0.5);
  const int n_bins = static_cast<int>(psd.bins.size());
  const double bin_hz = static_cast<double>(psd.sample_rate_hz) / window_len;

  // Triangular filters with centers equally spaced on the mel scale.
  const double mel_max = mel_of_hz(psd.sample_rate_hz / 2.0);
  std::vector<double> edges(n_filters + 2);
  for (int j = 0; j < n_filters + 2; ++j)
    edges[j] = hz_of_mel(mel_max * j / (n_filters + 1));

  std::vector<double> log_energy(n_filters);
  double max_energy = 0.0;
  for (int j = 0; j < n_filters; ++j) {
    const double lo = edges[j], mid = edges[j + 1], hi = edges[j + 2];
    double energy = 0.0;
    for (int k = 0; k < n_bins; ++k) {
      const double f = k * bin_hz;
      double weight = 0.0;
      if (f > lo && f < mid)
        weight = (f - lo) / (mid - lo);
      else if (f >= mid && f < hi)
        weight = (hi - f) / (hi - mid);
      energy += weight * psd.bins[k];
    }
    log_energy[j] = energy;
    max_energy = std::max(max_energy, energy);
  }
  if (max_energy <= 0.0)
    throw NumericalError("all mel filter energies are zero");
  const double floor = 1e-12 * max_energy;
  for (double& e : log_energy) e = std::log(std::max(e, floor));

  CepstralVector out;
  out.kind = CepstralVector::Kind::msfb_cepstrum;
  out.coeffs.resize(n_ceps);
  for (int q = 0; q < n_ceps; ++q) {
    double c = 0.0;
    for (int j = 0; j < n_filters; ++j)
      c += log_energy[j] *
           std::cos(std::numbers::pi * q * (j + 0.5) / n_filters);
    out.coeffs[q] = c;
  }
  return out;
}

}  // namespace klasr
