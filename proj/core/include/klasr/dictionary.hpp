#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "klasr/divergence.hpp"
#include "klasr/features.hpp"
#include "klasr/signal.hpp"

namespace klasr {

enum class Method { correlation, spectral, filter, cepstral, msfb };

Method parse_method(const std::string& name);
std::string method_name(Method m);

/// Feature parameters shared by training and recognition. recog_order lets
/// the input-side AR fit differ from the stored order where dimensions still
/// allow it (cepstral only); 0 means "same as order". The correlation method
/// requires equal orders and is validated on build and load.
struct MethodParams {
  int order = 20;              // matrix order / AR order
  int recog_order = 0;         // input-side AR order override (0 = order)
  int window_len = 256;        // FFT window for spectral and msfb
  double overlap_fraction = 0.5;
  double regularization = 1e-6;
  int n_ceps = 13;             // cepstral coefficient count Q
  int n_filters = 20;          // mel filters (msfb)
  int sample_rate_hz = 8000;

  int effective_recog_order() const { return recog_order > 0 ? recog_order : order; }
};

using FeaturePayload =
    std::variant<CorrelationTemplate, Psd, ArModel, CepstralVector>;

struct DictionaryEntry {
  std::string label;
  FeaturePayload feature;
};

struct Dictionary {
  Method method = Method::correlation;
  MethodParams params;
  std::vector<DictionaryEntry> entries;
  std::uint32_t format_version = 1;
};

struct RecognitionResult {
  std::vector<double> scores;  // one per entry, in entry order
  int winner_index = -1;
  std::string winner_label;
};

/// Preprocesses every corpus signal (DC removal + variance normalization)
/// and stores the method's reference feature per label. Labels must be
/// unique; failures carry the offending label in the message.
Dictionary build_dictionary(
    const std::vector<std::pair<std::string, Signal>>& corpus, Method method,
    const MethodParams& params);

/// KLDB binary serialization: magic "KLDB", u32 version, u8 method tag,
/// params block, u32 entry count, then length-prefixed labels and
/// dimension-prefixed IEEE-754 doubles. Little-endian throughout; doubles
/// round-trip bit-exactly.
void save_dictionary(const Dictionary& d, const std::filesystem::path& path);
Dictionary load_dictionary(const std::filesystem::path& path);

/// Extracts the input-side feature and scores every channel, returning all
/// scores plus the argmin (ties break to the lowest index). The statistic
/// form applies to the correlation method only.
RecognitionResult recognize(const Signal& s, const Dictionary& d,
                            StatisticForm form = StatisticForm::full_kl);

}  // namespace klasr
