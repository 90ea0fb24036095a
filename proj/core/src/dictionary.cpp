#include "klasr/dictionary.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <set>

#include "klasr/error.hpp"

namespace klasr {

namespace {

constexpr char kMagic[4] = {'K', 'L', 'D', 'B'};
constexpr std::uint32_t kFormatVersion = 1;

// ---- little-endian encoding helpers ----

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

void put_string(std::vector<std::uint8_t>& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.insert(out.end(), s.begin(), s.end());
}

class Reader {
 public:
  Reader(const std::uint8_t* data, size_t size) : data_(data), size_(size) {}

  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(bits);
  }
  std::string str() {
    const std::uint32_t len = u32();
    need(len);
    std::string s(reinterpret_cast<const char*>(data_ + pos_), len);
    pos_ += len;
    return s;
  }
  bool exhausted() const { return pos_ == size_; }

 private:
  void need(size_t n) {
    if (pos_ + n > size_) throw DataError("truncated or corrupt dictionary file");
  }
  const std::uint8_t* data_;
  size_t size_;
  size_t pos_ = 0;
};

std::uint8_t method_tag(Method m) { return static_cast<std::uint8_t>(m); }

Method method_from_tag(std::uint8_t tag) {
  if (tag > 4) throw DataError("unknown method tag " + std::to_string(tag));
  return static_cast<Method>(tag);
}

void validate_params(Method method, const MethodParams& p) {
  if (p.order < 1) throw DataError("feature order must be >= 1");
  if (p.sample_rate_hz <= 0) throw DataError("sample rate must be positive");
  if (method == Method::correlation && p.recog_order > 0 &&
      p.recog_order != p.order)
    throw DataError("correlation method requires equal training and "
                    "recognition orders");
  if ((method == Method::spectral || method == Method::msfb) &&
      p.window_len < 2)
    throw DataError("window length must be >= 2");
  if ((method == Method::cepstral || method == Method::msfb) && p.n_ceps < 1)
    throw DataError("cepstrum length must be >= 1");
  if (method == Method::msfb && p.n_filters < p.n_ceps)
    throw DataError("need at least as many mel filters as coefficients");
}

FeaturePayload extract_reference_feature(const Signal& s, Method method,
                                         const MethodParams& p) {
  switch (method) {
    case Method::correlation: {
      const AutocorrMatrix ac =
          estimate_autocorr_matrix(s, p.order, p.regularization);
      const LuFactorization f = lu_decompose(ac.matrix);
      const auto [log_abs, sign] = log_det(f);
      if (sign <= 0)
        throw NumericalError("reference matrix is not positive-definite");
      CorrelationTemplate tmpl;
      tmpl.inverse_matrix = invert(f);
      tmpl.log_det_r = log_abs;
      tmpl.order = p.order;
      return tmpl;
    }
    case Method::spectral:
      return estimate_psd(s, p.window_len, p.overlap_fraction);
    case Method::filter:
      return fit_ar_burg(s, p.order);
    case Method::cepstral:
      return ar_cepstrum(fit_ar_burg(s, p.order), p.n_ceps);
    case Method::msfb:
      return msfb_cepstrum(s, p.n_filters, p.n_ceps, p.window_len);
  }
  throw DataError("unreachable method");
}

}  // namespace

Method parse_method(const std::string& name) {
  if (name == "correlation") return Method::correlation;
  if (name == "spectral") return Method::spectral;
  if (name == "filter") return Method::filter;
  if (name == "cepstral") return Method::cepstral;
  if (name == "msfb") return Method::msfb;
  throw DataError("unknown method: " + name +
                  " (expected correlation, spectral, filter, cepstral or msfb)");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::correlation: return "correlation";
    case Method::spectral: return "spectral";
    case Method::filter: return "filter";
    case Method::cepstral: return "cepstral";
    case Method::msfb: return "msfb";
  }
  return "?";
}

Dictionary build_dictionary(
    const std::vector<std::pair<std::string, Signal>>& corpus, Method method,
    const MethodParams& params) {
  if (corpus.empty()) throw DataError("corpus is empty");
  validate_params(method, params);

  std::set<std::string> seen;
  Dictionary d;
  d.method = method;
  d.params = params;
  d.format_version = kFormatVersion;
  d.entries.reserve(corpus.size());

  const PreprocessConfig prep;
  for (const auto& [label, raw] : corpus) {
    if (!seen.insert(label).second)
      throw DataError("duplicate corpus label: " + label);
    try {
      const Signal s = preprocess(raw, prep);
      if (s.sample_rate_hz != params.sample_rate_hz)
        throw DataError("sample rate " + std::to_string(s.sample_rate_hz) +
                        " does not match dictionary rate " +
                        std::to_string(params.sample_rate_hz));
      d.entries.push_back({label, extract_reference_feature(s, method, params)});
    } catch (const NumericalError& e) {
      throw NumericalError("entry '" + label + "': " + e.what());
    } catch (const DataError& e) {
      throw DataError("entry '" + label + "': " + e.what());
    }
  }
  return d;
}

void save_dictionary(const Dictionary& d, const std::filesystem::path& path) {
  if (d.entries.empty()) throw DataError("refusing to save empty dictionary");

  std::vector<std::uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u32(out, kFormatVersion);
  put_u8(out, method_tag(d.method));

  const MethodParams& p = d.params;
  put_u32(out, static_cast<std::uint32_t>(p.order));
  put_u32(out, static_cast<std::uint32_t>(p.recog_order));
  put_u32(out, static_cast<std::uint32_t>(p.window_len));
  put_f64(out, p.overlap_fraction);
  put_f64(out, p.regularization);
  put_u32(out, static_cast<std::uint32_t>(p.n_ceps));
  put_u32(out, static_cast<std::uint32_t>(p.n_filters));
  put_u32(out, static_cast<std::uint32_t>(p.sample_rate_hz));

  put_u32(out, static_cast<std::uint32_t>(d.entries.size()));
  for (const auto& entry : d.entries) {
    put_string(out, entry.label);
    std::visit(
        [&](const auto& feature) {
          using T = std::decay_t<decltype(feature)>;
          if constexpr (std::is_same_v<T, CorrelationTemplate>) {
            put_u32(out, static_cast<std::uint32_t>(feature.order));
            for (double v : feature.inverse_matrix.entries) put_f64(out, v);
            put_f64(out, feature.log_det_r);
          } else if constexpr (std::is_same_v<T, Psd>) {
            put_u32(out, static_cast<std::uint32_t>(feature.bins.size()));
            for (double v : feature.bins) put_f64(out, v);
          } else if constexpr (std::is_same_v<T, ArModel>) {
            put_u32(out, static_cast<std::uint32_t>(feature.order));
            for (double v : feature.coeffs) put_f64(out, v);
            put_f64(out, feature.residual_variance);
          } else {
            put_u32(out, static_cast<std::uint32_t>(feature.coeffs.size()));
            for (double v : feature.coeffs) put_f64(out, v);
          }
        },
        entry.feature);
  }

  std::ofstream of(path, std::ios::binary);
  if (!of) throw DataError("cannot open for writing: " + path.string());
  of.write(reinterpret_cast<const char*>(out.data()),
           static_cast<std::streamsize>(out.size()));
  if (!of) throw DataError("write failure: " + path.string());
}

Dictionary load_dictionary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dictionary: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());

  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw DataError("bad magic bytes, not a KLDB dictionary: " + path.string());
  Reader r(bytes.data() + 4, bytes.size() - 4);

  Dictionary d;
  d.format_version = r.u32();
  if (d.format_version != kFormatVersion)
    throw DataError("unsupported dictionary version " +
                    std::to_string(d.format_version) + " (expected " +
                    std::to_string(kFormatVersion) + ")");
  d.method = method_from_tag(r.u8());

  MethodParams& p = d.params;
  p.order = static_cast<int>(r.u32());
  p.recog_order = static_cast<int>(r.u32());
  p.window_len = static_cast<int>(r.u32());
  p.overlap_fraction = r.f64();
  p.regularization = r.f64();
  p.n_ceps = static_cast<int>(r.u32());
  p.n_filters = static_cast<int>(r.u32());
  p.sample_rate_hz = static_cast<int>(r.u32());
  validate_params(d.method, p);

  const std::uint32_t count = r.u32();
  if (count == 0) throw DataError("dictionary has no entries: " + path.string());
  std::set<std::string> seen;
  for (std::uint32_t e = 0; e < count; ++e) {
    DictionaryEntry entry;
    entry.label = r.str();
    if (!seen.insert(entry.label).second)
      throw DataError("duplicate label in dictionary: " + entry.label);
    switch (d.method) {
      case Method::correlation: {
        CorrelationTemplate tmpl;
        tmpl.order = static_cast<int>(r.u32());
        if (tmpl.order != p.order)
          throw DataError("entry order does not match dictionary params");
        tmpl.inverse_matrix = SquareMatrix(tmpl.order);
        for (double& v : tmpl.inverse_matrix.entries) v = r.f64();
        tmpl.log_det_r = r.f64();
        entry.feature = std::move(tmpl);
        break;
      }
      case Method::spectral: {
        Psd psd;
        const std::uint32_t bins = r.u32();
        if (bins != static_cast<std::uint32_t>(p.window_len / 2))
          throw DataError("PSD bin count does not match window length");
        psd.bins.resize(bins);
        for (double& v : psd.bins) v = r.f64();
        psd.window_len = p.window_len;
        psd.sample_rate_hz = p.sample_rate_hz;
        entry.feature = std::move(psd);
        break;
      }
      case Method::filter: {
        ArModel model;
        model.order = static_cast<int>(r.u32());
        if (model.order != p.order)
          throw DataError("entry order does not match dictionary params");
        model.coeffs.resize(model.order);
        for (double& v : model.coeffs) v = r.f64();
        model.residual_variance = r.f64();
        if (model.residual_variance <= 0.0)
          throw DataError("stored AR model has non-positive variance");
        entry.feature = std::move(model);
        break;
      }
      case Method::cepstral:
      case Method::msfb: {
        CepstralVector c;
        const std::uint32_t q = r.u32();
        if (q != static_cast<std::uint32_t>(p.n_ceps))
          throw DataError("cepstral length does not match dictionary params");
        c.coeffs.resize(q);
        for (double& v : c.coeffs) v = r.f64();
        c.kind = d.method == Method::cepstral
                     ? CepstralVector::Kind::ar_cepstrum
                     : CepstralVector::Kind::msfb_cepstrum;
        entry.feature = std::move(c);
        break;
      }
    }
    d.entries.push_back(std::move(entry));
  }
  if (!r.exhausted())
    throw DataError("trailing bytes after last entry: " + path.string());
  return d;
}

RecognitionResult recognize(const Signal& s, const Dictionary& d,
                            StatisticForm form) {
  if (d.entries.empty()) throw DataError("dictionary has no entries");
  validate_params(d.method, d.params);
  const MethodParams& p = d.params;

  const PreprocessConfig prep;
  const Signal input = preprocess(s, prep);
  if (input.sample_rate_hz != p.sample_rate_hz)
    throw DataError("input sample rate " + std::to_string(input.sample_rate_hz) +
                    " does not match dictionary rate " +
                    std::to_string(p.sample_rate_hz));

  RecognitionResult result;
  result.scores.resize(d.entries.size());

  switch (d.method) {
    case Method::correlation: {
      const AutocorrMatrix ax =
          estimate_autocorr_matrix(input, p.order, p.regularization);
      const auto [log_abs, sign] = log_det(lu_decompose(ax.matrix));
      if (sign <= 0)
        throw NumericalError("input autocorrelation estimate is not "
                             "positive-definite");
      for (size_t i = 0; i < d.entries.size(); ++i)
        result.scores[i] = stat_correlation(
            ax, std::get<CorrelationTemplate>(d.entries[i].feature), form,
            log_abs);
      break;
    }
    case Method::spectral: {
      const Psd px = estimate_psd(input, p.window_len, p.overlap_fraction);
      for (size_t i = 0; i < d.entries.size(); ++i)
        result.scores[i] = stat_spectral(px, std::get<Psd>(d.entries[i].feature));
      break;
    }
    case Method::filter: {
      for (size_t i = 0; i < d.entries.size(); ++i) {
        const ArModel& model = std::get<ArModel>(d.entries[i].feature);
        result.scores[i] =
            stat_filter(whiten(input, model), model.residual_variance);
      }
      break;
    }
    case Method::cepstral: {
      const CepstralVector cx =
          ar_cepstrum(fit_ar_burg(input, p.effective_recog_order()), p.n_ceps);
      for (size_t i = 0; i < d.entries.size(); ++i)
        result.scores[i] =
            dist_cepstral(cx, std::get<CepstralVector>(d.entries[i].feature),
                          CepstralWeighting::index);
      break;
    }
    case Method::msfb: {
      const CepstralVector cx =
          msfb_cepstrum(input, p.n_filters, p.n_ceps, p.window_len);
      for (size_t i = 0; i < d.entries.size(); ++i)
        result.scores[i] =
            dist_euclid(cx, std::get<CepstralVector>(d.entries[i].feature));
      break;
    }
  }

  result.winner_index = 0;
  for (size_t i = 1; i < result.scores.size(); ++i)
    if (result.scores[i] < result.scores[result.winner_index])
      result.winner_index = static_cast<int>(i);
  result.winner_label = d.entries[result.winner_index].label;
  return result;
}

}  // namespace klasr
