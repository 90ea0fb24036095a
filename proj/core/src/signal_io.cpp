#include "klasr/signal_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "klasr/error.hpp"

namespace klasr {

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw DataError("read failure: " + path.string());
  return bytes;
}

std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void append_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
}

void append_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

double decode_pcm8(std::uint8_t b) { return (static_cast<int>(b) - 128) / 128.0; }

double decode_pcm16(std::int16_t s) { return s / 32768.0; }

std::uint8_t encode_pcm8(double a) {
  long v = std::lround(a * 128.0) + 128;
  return static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
}

std::int16_t encode_pcm16(double a) {
  long v = std::lround(a * 32768.0);
  return static_cast<std::int16_t>(std::clamp(v, -32768L, 32767L));
}

std::vector<double> decode_payload(const std::uint8_t* data, size_t n_bytes,
                                   int bits) {
  std::vector<double> samples;
  if (bits == 8) {
    samples.resize(n_bytes);
    for (size_t i = 0; i < n_bytes; ++i) samples[i] = decode_pcm8(data[i]);
  } else {
    samples.resize(n_bytes / 2);
    for (size_t i = 0; i < samples.size(); ++i) {
      std::uint16_t raw = read_u16(data + 2 * i);
      std::int16_t s;
      std::memcpy(&s, &raw, 2);
      samples[i] = decode_pcm16(s);
    }
  }
  return samples;
}

Signal load_wav(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw DataError("not a RIFF/WAVE file: " + path.string());

  bool have_fmt = false;
  int channels = 0, bits = 0, rate = 0;
  const std::uint8_t* data_ptr = nullptr;
  size_t data_len = 0;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const std::uint32_t chunk_len = read_u32(bytes.data() + pos + 4);
    pos += 8;
    if (pos + chunk_len > bytes.size())
      throw DataError("truncated WAV chunk in " + path.string());
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (chunk_len < 16) throw DataError("malformed fmt chunk: " + path.string());
      const std::uint16_t audio_format = read_u16(bytes.data() + pos);
      channels = read_u16(bytes.data() + pos + 2);
      rate = static_cast<int>(read_u32(bytes.data() + pos + 4));
      bits = read_u16(bytes.data() + pos + 14);
      if (audio_format != 1)
        throw DataError("WAV is not uncompressed PCM: " + path.string());
      if (channels != 1)
        throw DataError("WAV must be mono, got " + std::to_string(channels) +
                        " channels: " + path.string());
      if (bits != 8 && bits != 16)
        throw DataError("unsupported WAV bit depth " + std::to_string(bits) +
                        ": " + path.string());
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data_ptr = bytes.data() + pos;
      data_len = chunk_len;
    }
    pos += chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }

  if (!have_fmt) throw DataError("WAV missing fmt chunk: " + path.string());
  if (data_ptr == nullptr) throw DataError("WAV missing data chunk: " + path.string());
  if (data_len == 0) throw DataError("WAV has zero-length payload: " + path.string());

  Signal s;
  s.sample_rate_hz = rate;
  s.samples = decode_payload(data_ptr, data_len, bits);
  validate_signal(s);
  return s;
}

void save_wav(const Signal& s, const std::filesystem::path& path) {
  const std::uint32_t n = static_cast<std::uint32_t>(s.samples.size());
  std::vector<std::uint8_t> out;
  out.reserve(44 + 2 * n);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  append_u32(out, 36 + 2 * n);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  append_u32(out, 16);
  append_u16(out, 1);  // PCM
  append_u16(out, 1);  // mono
  append_u32(out, static_cast<std::uint32_t>(s.sample_rate_hz));
  append_u32(out, static_cast<std::uint32_t>(s.sample_rate_hz) * 2);
  append_u16(out, 2);   // block align
  append_u16(out, 16);  // bits per sample
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  append_u32(out, 2 * n);
  for (double a : s.samples) {
    const std::int16_t v = encode_pcm16(a);
    std::uint16_t raw;
    std::memcpy(&raw, &v, 2);
    append_u16(out, raw);
  }

  std::ofstream of(path, std::ios::binary);
  if (!of) throw DataError("cannot open for writing: " + path.string());
  of.write(reinterpret_cast<const char*>(out.data()),
           static_cast<std::streamsize>(out.size()));
  if (!of) throw DataError("write failure: " + path.string());
}

}  // namespace

AudioFormat parse_audio_format(const std::string& name) {
  if (name == "pcm8") return AudioFormat::pcm8;
  if (name == "pcm16") return AudioFormat::pcm16;
  if (name == "wav") return AudioFormat::wav;
  throw DataError("unknown audio format: " + name + " (expected pcm8, pcm16 or wav)");
}

Signal load_signal(const std::filesystem::path& path, AudioFormat format,
                   int raw_rate_hz) {
  if (format == AudioFormat::wav) return load_wav(path);

  if (raw_rate_hz <= 0)
    throw DataError("raw PCM requires a positive sample rate");
  const auto bytes = read_file(path);
  if (bytes.empty()) throw DataError("zero-length payload: " + path.string());
  Signal s;
  s.sample_rate_hz = raw_rate_hz;
  if (format == AudioFormat::pcm16) {
    if (bytes.size() % 2 != 0)
      throw DataError("odd byte count for 16-bit PCM: " + path.string());
    s.samples = decode_payload(bytes.data(), bytes.size(), 16);
  } else {
    s.samples = decode_payload(bytes.data(), bytes.size(), 8);
  }
  validate_signal(s);
  return s;
}

void save_signal(const Signal& s, const std::filesystem::path& path,
                 AudioFormat format) {
  validate_signal(s);
  if (format == AudioFormat::wav) {
    save_wav(s, path);
    return;
  }
  std::vector<std::uint8_t> out;
  if (format == AudioFormat::pcm8) {
    out.reserve(s.samples.size());
    for (double a : s.samples) out.push_back(encode_pcm8(a));
  } else {
    out.reserve(2 * s.samples.size());
    for (double a : s.samples) {
      const std::int16_t v = encode_pcm16(a);
      std::uint16_t raw;
      std::memcpy(&raw, &v, 2);
      append_u16(out, raw);
    }
  }
  std::ofstream of(path, std::ios::binary);
  if (!of) throw DataError("cannot open for writing: " + path.string());
  of.write(reinterpret_cast<const char*>(out.data()),
           static_cast<std::streamsize>(out.size()));
  if (!of) throw DataError("write failure: " + path.string());
}

}  // namespace klasr
