#include "spikefeat/spike_encoder.hpp"

#include "spikefeat/error.hpp"

#include <algorithm>

namespace spikefeat {

std::array<double, kSpectrumBins> firing_probabilities(const FrameSpectrum& spectrum) {
    std::array<double, kSpectrumBins> p{};
    for (std::size_t i = 0; i < kSpectrumBins; ++i) {
        if (!(spectrum.magnitudes[i] >= 0.0)) {
            throw Error("encoder", "bin " + std::to_string(i + 1) + " magnitude is negative or NaN");
        }
    }
    const double peak = *std::max_element(spectrum.magnitudes.begin(), spectrum.magnitudes.end());
    if (peak == 0.0) return p;
    for (std::size_t i = 0; i < kSpectrumBins; ++i) p[i] = spectrum.magnitudes[i] / peak;
    return p;
}

SpikeRaster encode_probabilities(std::span<const double> probabilities, RngStream& rng, std::size_t steps) {
    SpikeRaster raster(probabilities.size(), steps);
    for (std::size_t t = 0; t < steps; ++t) {
        for (std::size_t i = 0; i < probabilities.size(); ++i) {
            if (rng.uniform() < probabilities[i]) raster.set(i, t);
        }
    }
    return raster;
}

SpikeRaster encode(const FrameSpectrum& spectrum, RngStream& rng, std::size_t steps) {
    const auto p = firing_probabilities(spectrum);
    return encode_probabilities(p, rng, steps);
}

} // namespace spikefeat
