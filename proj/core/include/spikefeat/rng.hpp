#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace spikefeat {

/// Reproducible random stream keyed by (seed, stream_id).
///
/// The engine is std::mt19937_64 seeded through std::seed_seq with the four
/// 32-bit halves of seed and stream_id. Both are fully specified by the C++
/// standard, and every draw below is derived from raw engine output with
/// explicit arithmetic (no std:: distributions), so a given key produces the
/// same bits on every conforming platform.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform double on the open interval (0, 1).
    double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    /// Uniform integer on [0, n) by rejection, n > 0.
    std::uint64_t below(std::uint64_t n);

    /// Standard normal via Box-Muller (cos branch only, no cached pair).
    double normal();

    /// Identity string recorded in run metadata.
    static std::string_view generator_identity() noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

/// Stream ids used by the pipeline. Per-frame encoder streams pack the
/// utterance ordinal into the high 32 bits and the frame ordinal into the
/// low 32; the reserved ids below sit above any realistic utterance count.
namespace streams {
inline constexpr std::uint64_t frame(std::uint64_t utterance, std::uint64_t frame) {
    return (utterance << 32) | (frame & 0xffffffffu);
}
inline constexpr std::uint64_t kWeightInit = 0xfffff00000000000ULL;
inline constexpr std::uint64_t kEpochShuffle = 0xfffff10000000000ULL; // + epoch
inline constexpr std::uint64_t kHmmInit = 0xfffff20000000000ULL;      // + class
} // namespace streams

} // namespace spikefeat
