#pragma once

#include <cstdint>
#include <vector>

#include "klasr/features.hpp"
#include "klasr/signal.hpp"

namespace klasr {

/// Word prototype description: explicit conjugate pole pairs, or (when the
/// pole lists are empty) ar_order/2 pairs drawn deterministically from seed
/// with radii in [0.90, 0.98] and angles spread over (0, pi).
struct SynthWordSpec {
  std::uint64_t seed = 0;
  int ar_order = 8;
  std::vector<double> pole_radii;   // each in (0, 1)
  std::vector<double> pole_angles;  // radians
};

/// SplitMix64 step; used to derive independent substream seeds.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                       std::uint64_t c = 0);

/// Expands the pole pairs into AR coefficients (predictor convention) with
/// unit excitation variance. Throws NumericalError for any radius >= 1.
ArModel synth_word_model(const SynthWordSpec& spec);

/// Stability check via the step-down recursion: all reflection coefficients
/// strictly inside (-1, 1).
bool is_stable(const ArModel& model);

/// Drives white Gaussian noise through the AR recursion, discarding a
/// burn-in of 10 * order samples. Deterministic in rng_seed.
Signal synth_utterance(const ArModel& model, int length, std::uint64_t rng_seed,
                       int sample_rate_hz = 8000);

/// Adds white Gaussian noise scaled so the realized signal-to-noise power
/// ratio equals snr_db exactly. An infinite snr_db returns the input.
Signal add_noise(const Signal& s, double snr_db, std::uint64_t rng_seed);

}  // namespace klasr
