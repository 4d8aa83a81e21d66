#pragma once

#include "spikefeat/spike_raster.hpp"

#include <array>
#include <cstddef>

namespace spikefeat {

inline constexpr std::size_t kFilterTaps = 7;
inline constexpr std::size_t kFeatureMaps = 7;

/// N(x; 0, 1) - N(x; 0, 6).
double difference_of_gaussians(double x) noexcept;

/// Seven 7-tap DoG filters. Filter k (0-based) is the DoG centred at offset
/// k - 3 within the window x = -3..3; taps whose argument falls outside
/// [-3, 3] are zero. Filter 3 is the unshifted, even-symmetric kernel.
struct DogFilterBank {
    std::array<std::array<double, kFilterTaps>, kFeatureMaps> taps{};
};

DogFilterBank build_dog_bank();

/// How a presynaptic spike injects current over one step.
enum class SynapticInput {
    /// Current held for the whole step: u' = u*a + R*I*(1 - a).
    kPulse,
    /// Spike delivers its charge instantly: u' = u*a + R*I*dt/tau.
    kImpulse,
};

struct LifParams {
    double tau_ms = 1.0;     // R*C = 1 ohm * 1 mF
    double resistance = 1.0; // ohm
    double threshold = 0.4;
    double dt_ms = 1.0;
    SynapticInput input = SynapticInput::kImpulse;

    /// exp(-dt/tau)
    double decay() const;
    /// Coefficient multiplying the input current in the update.
    double input_gain() const;
};

/// Convolutional-layer defaults (threshold 0.4).
LifParams conv_lif_params();

struct LifStep {
    double potential = 0.0;
    bool spiked = false;
};

/// One exact-exponential LIF update followed by threshold/reset to 0.
LifStep lif_step(double potential, double current, const LifParams& params);

/// Seven spike rasters, one per filter, each the same size as the input.
struct FeatureMaps {
    std::array<SpikeRaster, kFeatureMaps> maps;
};

/// Convolves the input spike trains with every filter (zero padding at
/// both edges) and integrates the resulting current with one LIF neuron
/// per (map, position). Neuron m of map k receives at step t
///   I = sum_{i=0..6} taps[k][i] * s(m - 3 + i, t)
/// summed in tap order.
FeatureMaps convolve_integrate(const SpikeRaster& input, const DogFilterBank& bank, const LifParams& params);

} // namespace spikefeat
