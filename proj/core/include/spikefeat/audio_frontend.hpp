#pragma once

#include "spikefeat/wav.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace spikefeat {

/// 25 ms at 8 kHz, hopped by half a frame.
inline constexpr std::size_t kFrameLength = 200;
inline constexpr std::size_t kFrameHop = 100;
/// Bins 1..100 of the 200-point DFT (40 Hz spacing, DC dropped).
inline constexpr std::size_t kSpectrumBins = 100;
inline constexpr double kBinHz = static_cast<double>(kSampleRate) / kFrameLength;

enum class WindowKind { kHamming, kRectangular };

struct FrontendConfig {
    WindowKind window = WindowKind::kHamming;
};

using FrameWindow = std::array<double, kFrameLength>;

struct FrameSpectrum {
    std::size_t frame_index = 0;
    std::array<double, kSpectrumBins> magnitudes{};
};

/// Splits an utterance into 200-sample windows starting every 100 samples.
/// A start k*100 is emitted while k*100 + 100 < n; the last window is
/// zero-padded. Throws Error("frontend") for fewer than 200 samples.
std::vector<FrameWindow> frame(const Utterance& utterance);

/// Number of windows frame() yields for n samples (0 when n < 200).
std::size_t frame_count(std::size_t n_samples) noexcept;

/// Magnitudes of all 200 DFT bins of the (optionally windowed) frame.
std::array<double, kFrameLength> full_magnitudes(std::span<const double, kFrameLength> samples,
                                                 const FrontendConfig& config = {});

/// Bins 1..100 of full_magnitudes().
FrameSpectrum magnitude_spectrum(std::span<const double, kFrameLength> samples,
                                 const FrontendConfig& config = {}, std::size_t frame_index = 0);

/// frame() followed by magnitude_spectrum() on each window.
std::vector<FrameSpectrum> analyze(const Utterance& utterance, const FrontendConfig& config = {});

} // namespace spikefeat
