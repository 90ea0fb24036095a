#pragma once

#include <filesystem>
#include <string>

#include "klasr/signal.hpp"

namespace klasr {

enum class AudioFormat { pcm8, pcm16, wav };

/// Parses "pcm8" / "pcm16" / "wav"; throws DataError otherwise.
AudioFormat parse_audio_format(const std::string& name);

/// Loads an audio file and maps integer samples affinely to [-1, 1).
/// 8-bit PCM is unsigned with offset 128; 16-bit is signed little-endian.
/// Raw PCM takes its rate from raw_rate_hz; WAV reads it from the header
/// and must be mono uncompressed PCM (8 or 16 bit).
Signal load_signal(const std::filesystem::path& path, AudioFormat format,
                   int raw_rate_hz = 8000);

/// Inverse of load_signal's sample mapping. Out-of-range amplitudes are
/// clipped to the representable integer range. WAV output is 16-bit mono.
void save_signal(const Signal& s, const std::filesystem::path& path,
                 AudioFormat format);

}  // namespace klasr
