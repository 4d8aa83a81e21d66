#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace spikefeat {

inline constexpr int kSampleRate = 8000;

/// One labeled recording: 16-bit PCM at 8 kHz.
struct Utterance {
    std::string id;
    int label = 0;
    std::vector<std::int16_t> samples;
    int sample_rate = kSampleRate;
};

/// Throws Error("wav", ...) unless sample_rate == 8000, samples is non-empty
/// and label is a digit.
void validate(const Utterance& utt);

/// Decodes a RIFF/WAVE file holding PCM 16-bit little-endian mono audio.
/// Any other encoding, channel count or sample rate is rejected with a
/// diagnostic naming the offending field.
std::vector<std::int16_t> decode_wav(std::span<const std::uint8_t> bytes, int* sample_rate_out = nullptr);
std::vector<std::int16_t> read_wav(const std::filesystem::path& path, int* sample_rate_out = nullptr);

/// Serializes mono 16-bit PCM (used by tests and the corpus tooling).
std::vector<std::uint8_t> encode_wav(std::span<const std::int16_t> samples, int sample_rate);
void write_wav(const std::filesystem::path& path, std::span<const std::int16_t> samples, int sample_rate);

} // namespace spikefeat
