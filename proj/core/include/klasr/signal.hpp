#pragma once

#include <vector>

namespace klasr {

/// A sampled amplitude sequence. Samples are dimensionless with nominal
/// range [-1, 1]; immutable by convention once constructed.
struct Signal {
  std::vector<double> samples;
  int sample_rate_hz = 8000;

  int length() const { return static_cast<int>(samples.size()); }
};

struct PreprocessConfig {
  bool remove_dc = true;
  bool normalize_variance = true;
  int min_length_samples = 2;
};

enum class AlignPolicy { none, truncate_pad };

/// Throws DataError unless the signal is non-empty, finite, and has a
/// positive sample rate.
void validate_signal(const Signal& s);

double sample_mean(const Signal& s);

/// Population variance (divides by n, not n-1).
double sample_variance(const Signal& s);

/// DC removal and variance normalization. Throws DataError if the signal is
/// shorter than cfg.min_length_samples, NumericalError if variance
/// normalization is requested on a zero-variance signal.
Signal preprocess(const Signal& s, const PreprocessConfig& cfg);

/// Center-truncates or symmetrically zero-pads to target_len samples under
/// truncate_pad; returns the input unchanged under none. target_len >= 2.
Signal align_length(const Signal& s, int target_len, AlignPolicy policy);

}  // namespace klasr
