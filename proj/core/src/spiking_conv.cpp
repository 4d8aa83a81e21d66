#include "spikefeat/spiking_conv.hpp"

#include "spikefeat/error.hpp"

#include <cmath>
#include <numbers>

namespace spikefeat {

namespace {

double gaussian_pdf(double x, double variance) {
    return std::exp(-x * x / (2.0 * variance)) / std::sqrt(2.0 * std::numbers::pi * variance);
}

constexpr std::size_t kPad = kFilterTaps / 2;
constexpr std::size_t kPatterns = std::size_t{1} << kFilterTaps;

// Channels packed per step with kPad zero channels on each side so any
// 7-channel neighbourhood is a contiguous bit field.
struct StepBits {
    std::array<std::uint64_t, 4> words{};

    void set(std::size_t padded_channel) { words[padded_channel / 64] |= std::uint64_t{1} << (padded_channel % 64); }

    // Bits [pos, pos + 7) as a 7-bit pattern, bit i = tap i.
    unsigned window(std::size_t pos) const {
        const std::size_t w = pos / 64;
        const std::size_t b = pos % 64;
        std::uint64_t v = words[w] >> b;
        if (b > 64 - kFilterTaps && w + 1 < words.size()) v |= words[w + 1] << (64 - b);
        return static_cast<unsigned>(v & (kPatterns - 1));
    }
};

} // namespace

double difference_of_gaussians(double x) noexcept {
    return gaussian_pdf(x, 1.0) - gaussian_pdf(x, 6.0);
}

DogFilterBank build_dog_bank() {
    DogFilterBank bank;
    const int half = static_cast<int>(kPad);
    for (std::size_t k = 0; k < kFeatureMaps; ++k) {
        const int shift = static_cast<int>(k) - half;
        for (std::size_t i = 0; i < kFilterTaps; ++i) {
            const int z = static_cast<int>(i) - half - shift;
            bank.taps[k][i] = (z >= -half && z <= half) ? difference_of_gaussians(z) : 0.0;
        }
    }
    return bank;
}

double LifParams::decay() const { return std::exp(-dt_ms / tau_ms); }

double LifParams::input_gain() const {
    return input == SynapticInput::kPulse ? resistance * (1.0 - decay()) : resistance * (dt_ms / tau_ms);
}

LifParams conv_lif_params() { return LifParams{}; }

LifStep lif_step(double potential, double current, const LifParams& params) {
    LifStep out;
    out.potential = potential * params.decay() + params.input_gain() * current;
    if (out.potential >= params.threshold) {
        out.spiked = true;
        out.potential = 0.0;
    }
    return out;
}

FeatureMaps convolve_integrate(const SpikeRaster& input, const DogFilterBank& bank, const LifParams& params) {
    const std::size_t n = input.channels();
    if (n == 0 || n + 2 * kPad > 4 * 64) {
        throw Error("conv", "input has " + std::to_string(n) + " channels, expected 1.." +
                                std::to_string(4 * 64 - 2 * kPad));
    }
    const std::size_t steps = input.steps();
    const double decay = params.decay();
    const double gain = params.input_gain();

    // current[k][pattern]: filter k applied to a 7-bit neighbourhood, summed
    // in tap order exactly as the straight loop would.
    std::array<std::array<double, kPatterns>, kFeatureMaps> current{};
    for (std::size_t k = 0; k < kFeatureMaps; ++k) {
        for (std::size_t p = 0; p < kPatterns; ++p) {
            double sum = 0.0;
            for (std::size_t i = 0; i < kFilterTaps; ++i) {
                if ((p >> i) & 1u) sum += bank.taps[k][i];
            }
            current[k][p] = sum;
        }
    }

    FeatureMaps out;
    for (auto& m : out.maps) m = SpikeRaster(n, steps);
    std::vector<double> potential(kFeatureMaps * n, 0.0);

    for (std::size_t t = 0; t < steps; ++t) {
        StepBits bits;
        for (std::size_t c = 0; c < n; ++c) {
            if (input.spike(c, t)) bits.set(c + kPad);
        }
        for (std::size_t m = 0; m < n; ++m) {
            const unsigned pattern = bits.window(m);
            for (std::size_t k = 0; k < kFeatureMaps; ++k) {
                double& u = potential[k * n + m];
                u = u * decay + gain * current[k][pattern];
                if (u >= params.threshold) {
                    u = 0.0;
                    out.maps[k].set(m, t);
                }
            }
        }
    }
    return out;
}

} // namespace spikefeat
