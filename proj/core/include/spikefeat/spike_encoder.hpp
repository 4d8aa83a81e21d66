#pragma once

#include "spikefeat/audio_frontend.hpp"
#include "spikefeat/rng.hpp"
#include "spikefeat/spike_raster.hpp"

#include <array>
#include <span>

namespace spikefeat {

/// Per-channel firing probability per 1 ms step: magnitude / frame max,
/// all zeros for a silent frame.
std::array<double, kSpectrumBins> firing_probabilities(const FrameSpectrum& spectrum);

/// Poisson rate coding as independent Bernoulli trials per step. Draws are
/// consumed step-major (all channels at t=0, then t=1, ...) and channel i
/// fires at step t iff u(t, i) < p_i, so raising p_i never removes a spike.
SpikeRaster encode(const FrameSpectrum& spectrum, RngStream& rng, std::size_t steps = kSteps);

/// Same as encode() but with explicit probabilities (any length).
SpikeRaster encode_probabilities(std::span<const double> probabilities, RngStream& rng,
                                 std::size_t steps = kSteps);

} // namespace spikefeat
