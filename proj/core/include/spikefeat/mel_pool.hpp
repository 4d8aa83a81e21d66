#pragma once

#include "spikefeat/spiking_conv.hpp"

#include <iosfwd>
#include <vector>

namespace spikefeat {

inline constexpr std::size_t kPoolWindows = 28;
inline constexpr std::size_t kPooledChannels = kFeatureMaps * kPoolWindows; // 196

/// 1125 * ln(1 + f / 700). Throws Error("pool") for negative f.
double mel(double frequency_hz);
double mel_to_hz(double mel_value);

struct PoolWindow {
    std::size_t start_bin = 0; // 1-based spectrum bin
    std::size_t stride = 0;

    bool operator==(const PoolWindow&) const = default;
};

/// Contiguous windows partitioning bins 1..100.
struct PoolSchedule {
    std::vector<PoolWindow> windows;

    bool operator==(const PoolSchedule&) const = default;
};

/// 13 stride-2 windows over bins 1..26, then 15 windows over bins 27..100
/// from an equal-Mel split of [1040 Hz, 4000 Hz], repaired so strides are
/// nondecreasing, within [2, 10], sum to 74 and end in 10. The result is
/// validated before it is returned.
PoolSchedule build_schedule();

/// Throws Error("pool") describing the first violated invariant: 28
/// windows, first 13 of stride 2, nondecreasing strides, final stride 10,
/// contiguous exact coverage of bins 1..100.
void validate_schedule(const PoolSchedule& schedule);

/// One line per window: `index start stride` (index 1-based).
void write_schedule(std::ostream& out, const PoolSchedule& schedule);

/// Max pooling per map and window. The winner is the neuron with the most
/// spikes over the whole frame (ties go to the lowest bin); its full train
/// becomes output channel map * 28 + window.
SpikeRaster pool(const FeatureMaps& maps, const PoolSchedule& schedule);

} // namespace spikefeat
