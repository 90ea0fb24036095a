#include "klasr/signal.hpp"

#include <cmath>
#include <string>

#include "klasr/error.hpp"

namespace klasr {

void validate_signal(const Signal& s) {
  if (s.samples.empty()) throw DataError("signal has no samples");
  if (s.sample_rate_hz <= 0)
    throw DataError("sample rate must be positive, got " +
                    std::to_string(s.sample_rate_hz));
  for (double v : s.samples) {
    if (!std::isfinite(v)) throw DataError("signal contains non-finite sample");
  }
}

double sample_mean(const Signal& s) {
  double acc = 0.0;
  for (double v : s.samples) acc += v;
  return acc / static_cast<double>(s.samples.size());
}

double sample_variance(const Signal& s) {
  const double mean = sample_mean(s);
  double acc = 0.0;
  for (double v : s.samples) acc += (v - mean) * (v - mean);
  return acc / static_cast<double>(s.samples.size());
}

Signal preprocess(const Signal& s, const PreprocessConfig& cfg) {
  validate_signal(s);
  if (s.length() < cfg.min_length_samples)
    throw DataError("signal too short: " + std::to_string(s.length()) +
                    " < min length " + std::to_string(cfg.min_length_samples));

  Signal out = s;
  if (cfg.remove_dc) {
    const double mean = sample_mean(out);
    for (double& v : out.samples) v -= mean;
  }
  if (cfg.normalize_variance) {
    const double var = sample_variance(out);
    if (var <= 0.0)
      throw NumericalError("zero-variance signal cannot be normalized");
    const double scale = 1.0 / std::sqrt(var);
    for (double& v : out.samples) v *= scale;
  }
  return out;
}

Signal align_length(const Signal& s, int target_len, AlignPolicy policy) {
  validate_signal(s);
  if (target_len < 2) throw DataError("alignment target length must be >= 2");
  if (policy == AlignPolicy::none) return s;

  const int n = s.length();
  if (n == target_len) return s;

  Signal out;
  out.sample_rate_hz = s.sample_rate_hz;
  out.samples.resize(static_cast<size_t>(target_len), 0.0);
  if (n > target_len) {
    // Center window: drop floor((n-target)/2) samples from the front.
    const int start = (n - target_len) / 2;
    for (int i = 0; i < target_len; ++i) out.samples[i] = s.samples[start + i];
  } else {
    const int front = (target_len - n) / 2;
    for (int i = 0; i < n; ++i) out.samples[front + i] = s.samples[i];
  }
  return out;
}

}  // namespace klasr
