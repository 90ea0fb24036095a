#include "klasr/synth.hpp"

#include <cmath>
#include <random>
#include <string>

#include "klasr/error.hpp"

namespace klasr {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                       std::uint64_t c) {
  std::uint64_t state = base;
  std::uint64_t out = splitmix64(state);
  state ^= a * 0xff51afd7ed558ccdULL;
  out ^= splitmix64(state);
  state ^= b * 0xc4ceb9fe1a85ec53ULL;
  out ^= splitmix64(state);
  state ^= c * 0x2545f4914f6cdd1dULL;
  out ^= splitmix64(state);
  return out;
}

ArModel synth_word_model(const SynthWordSpec& spec) {
  std::vector<double> radii = spec.pole_radii;
  std::vector<double> angles = spec.pole_angles;
  if (radii.size() != angles.size())
    throw DataError("pole radius/angle counts differ");

  if (radii.empty()) {
    if (spec.ar_order < 2 || spec.ar_order % 2 != 0)
      throw DataError("random pole layout needs an even AR order >= 2");
    const int n_pairs = spec.ar_order / 2;
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> radius_dist(0.90, 0.98);
    std::uniform_real_distribution<double> jitter(-0.35, 0.35);
    const double slot = std::numbers::pi / (n_pairs + 1);
    for (int j = 0; j < n_pairs; ++j) {
      radii.push_back(radius_dist(rng));
      angles.push_back(slot * (j + 1) + jitter(rng) * slot);
    }
  }

  for (double r : radii) {
    if (!(r > 0.0 && r < 1.0))
      throw NumericalError("pole radius " + std::to_string(r) +
                           " outside the unit circle");
  }

  // Expand prod_j (1 - 2 r cos(theta) z^-1 + r^2 z^-2); predictor
  // coefficients are the negated tail of the polynomial.
  std::vector<double> poly{1.0};
  for (size_t j = 0; j < radii.size(); ++j) {
    const double b1 = -2.0 * radii[j] * std::cos(angles[j]);
    const double b2 = radii[j] * radii[j];
    std::vector<double> next(poly.size() + 2, 0.0);
    for (size_t i = 0; i < poly.size(); ++i) {
      next[i] += poly[i];
      next[i + 1] += poly[i] * b1;
      next[i + 2] += poly[i] * b2;
    }
    poly = std::move(next);
  }

  ArModel model;
  model.order = static_cast<int>(poly.size()) - 1;
  model.coeffs.resize(model.order);
  for (int i = 1; i <= model.order; ++i) model.coeffs[i - 1] = -poly[i];
  model.residual_variance = 1.0;
  return model;
}

bool is_stable(const ArModel& model) {
  // Step-down recursion: peel reflection coefficients off the predictor.
  std::vector<double> a(model.coeffs);
  for (int m = model.order; m >= 1; --m) {
    const double k = a[m - 1];
    if (!(std::abs(k) < 1.0)) return false;
    if (m == 1) break;
    std::vector<double> lower(m - 1);
    const double den = 1.0 - k * k;
    for (int i = 1; i < m; ++i)
      lower[i - 1] = (a[i - 1] + k * a[m - i - 1]) / den;
    a = std::move(lower);
  }
  return true;
}

Signal synth_utterance(const ArModel& model, int length, std::uint64_t rng_seed,
                       int sample_rate_hz) {
  if (length <= model.order)
    throw DataError("utterance length must exceed the model order");
  if (model.residual_variance <= 0.0)
    throw DataError("model excitation variance must be positive");
  if (!is_stable(model)) throw NumericalError("unstable AR model");

  const int p = model.order;
  const int burn_in = 10 * p;
  const double sigma = std::sqrt(model.residual_variance);

  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> gauss(0.0, sigma);

  std::vector<double> x(static_cast<size_t>(burn_in) + length, 0.0);
  for (size_t t = 0; t < x.size(); ++t) {
    double v = gauss(rng);
    for (int i = 1; i <= p && static_cast<size_t>(i) <= t; ++i)
      v += model.coeffs[i - 1] * x[t - i];
    x[t] = v;
  }

  Signal s;
  s.sample_rate_hz = sample_rate_hz;
  s.samples.assign(x.begin() + burn_in, x.end());
  return s;
}

Signal add_noise(const Signal& s, double snr_db, std::uint64_t rng_seed) {
  validate_signal(s);
  if (std::isinf(snr_db)) return s;

  double power = 0.0;
  for (double v : s.samples) power += v * v;
  power /= static_cast<double>(s.samples.size());
  if (power <= 0.0) throw NumericalError("zero-power signal cannot take noise");

  const double target_noise_power = power / std::pow(10.0, snr_db / 10.0);

  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> noise(s.samples.size());
  double noise_power = 0.0;
  for (double& v : noise) {
    v = gauss(rng);
    noise_power += v * v;
  }
  noise_power /= static_cast<double>(noise.size());

  // Rescale the realized noise so the measured SNR is exact.
  const double scale = std::sqrt(target_noise_power / noise_power);
  Signal out = s;
  for (size_t i = 0; i < out.samples.size(); ++i)
    out.samples[i] += scale * noise[i];
  return out;
}

}  // namespace klasr
