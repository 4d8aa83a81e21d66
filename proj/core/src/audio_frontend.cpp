#include "spikefeat/audio_frontend.hpp"

#include "spikefeat/error.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>

namespace spikefeat {

namespace {

constexpr std::size_t kHalfBins = kFrameLength / 2 + 1;

// fftw plan creation is not thread-safe; execution with the new-array
// interface is, so one shared unaligned plan serves every caller.
class RealDft {
public:
    RealDft() {
        auto* in = fftw_alloc_real(kFrameLength);
        auto* out = fftw_alloc_complex(kHalfBins);
        plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(kFrameLength), in, out,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT);
        fftw_free(in);
        fftw_free(out);
        if (!plan_) throw Error("frontend", "fftw plan creation failed");
    }
    ~RealDft() { fftw_destroy_plan(plan_); }
    RealDft(const RealDft&) = delete;
    RealDft& operator=(const RealDft&) = delete;

    void run(std::array<double, kFrameLength>& in, std::array<std::complex<double>, kHalfBins>& out) const {
        fftw_execute_dft_r2c(plan_, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    }

private:
    fftw_plan plan_ = nullptr;
};

const RealDft& real_dft() {
    static const RealDft dft;
    return dft;
}

const std::array<double, kFrameLength>& hamming() {
    static const auto window = [] {
        std::array<double, kFrameLength> w{};
        for (std::size_t n = 0; n < kFrameLength; ++n) {
            w[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                          static_cast<double>(kFrameLength - 1));
        }
        return w;
    }();
    return window;
}

} // namespace

std::size_t frame_count(std::size_t n_samples) noexcept {
    if (n_samples < kFrameLength) return 0;
    // Starts k*hop with k*hop + hop < n.
    return (n_samples - kFrameHop - 1) / kFrameHop + 1;
}

std::vector<FrameWindow> frame(const Utterance& utterance) {
    const std::size_t n = utterance.samples.size();
    if (n < kFrameLength) {
        throw Error("frontend", utterance.id + ": " + std::to_string(n) +
                                    " samples, need at least " + std::to_string(kFrameLength));
    }
    std::vector<FrameWindow> windows(frame_count(n));
    for (std::size_t k = 0; k < windows.size(); ++k) {
        auto& w = windows[k];
        w.fill(0.0);
        const std::size_t start = k * kFrameHop;
        const std::size_t len = std::min(kFrameLength, n - start);
        for (std::size_t i = 0; i < len; ++i) w[i] = utterance.samples[start + i];
    }
    return windows;
}

std::array<double, kFrameLength> full_magnitudes(std::span<const double, kFrameLength> samples,
                                                 const FrontendConfig& config) {
    std::array<double, kFrameLength> in{};
    if (config.window == WindowKind::kHamming) {
        const auto& w = hamming();
        for (std::size_t n = 0; n < kFrameLength; ++n) in[n] = samples[n] * w[n];
    } else {
        std::copy(samples.begin(), samples.end(), in.begin());
    }
    std::array<std::complex<double>, kHalfBins> spectrum{};
    real_dft().run(in, spectrum);

    std::array<double, kFrameLength> mags{};
    for (std::size_t k = 0; k < kHalfBins; ++k) mags[k] = std::abs(spectrum[k]);
    // Real input: X[N-k] = conj(X[k]).
    for (std::size_t k = kHalfBins; k < kFrameLength; ++k) mags[k] = mags[kFrameLength - k];
    return mags;
}

FrameSpectrum magnitude_spectrum(std::span<const double, kFrameLength> samples, const FrontendConfig& config,
                                 std::size_t frame_index) {
    const auto full = full_magnitudes(samples, config);
    FrameSpectrum out;
    out.frame_index = frame_index;
    std::copy(full.begin() + 1, full.begin() + 1 + kSpectrumBins, out.magnitudes.begin());
    return out;
}

std::vector<FrameSpectrum> analyze(const Utterance& utterance, const FrontendConfig& config) {
    const auto windows = frame(utterance);
    std::vector<FrameSpectrum> spectra;
    spectra.reserve(windows.size());
    for (std::size_t k = 0; k < windows.size(); ++k) {
        spectra.push_back(magnitude_spectrum(windows[k], config, k));
    }
    return spectra;
}

} // namespace spikefeat
