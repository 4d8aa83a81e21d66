#include "spikefeat/mel_pool.hpp"

#include "spikefeat/audio_frontend.hpp"
#include "spikefeat/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace spikefeat {

namespace {

constexpr std::size_t kLowWindows = 13;
constexpr std::size_t kLowStride = 2;
constexpr std::size_t kHighWindows = kPoolWindows - kLowWindows;
constexpr std::size_t kMinStride = 2;
constexpr std::size_t kMaxStride = 10;

void repair(std::vector<std::size_t>& s, std::size_t total) {
    s.back() = kMaxStride;
    for (auto& v : s) v = std::clamp(v, kMinStride, kMaxStride);
    for (std::size_t j = 1; j < s.size(); ++j) s[j] = std::max(s[j], s[j - 1]);

    const std::size_t last = s.size() - 1;
    auto sum = [&] { return std::accumulate(s.begin(), s.end(), std::size_t{0}); };
    // Decrementing the first element of a run, or incrementing the last,
    // keeps the sequence nondecreasing. The final stride stays pinned.
    while (sum() > total) {
        const auto it = std::max_element(s.begin(), s.begin() + last);
        if (*it <= kMinStride) throw Error("pool", "cannot shrink schedule to " + std::to_string(total) + " bins");
        --*it;
    }
    while (sum() < total) {
        std::size_t j = 0;
        for (std::size_t i = 0; i < last; ++i) {
            if (s[i] <= s[j]) j = i;
        }
        if (s[j] + 1 > s[last]) throw Error("pool", "cannot grow schedule to " + std::to_string(total) + " bins");
        ++s[j];
    }
}

} // namespace

double mel(double frequency_hz) {
    if (!(frequency_hz >= 0.0)) throw Error("pool", "mel() of negative frequency " + std::to_string(frequency_hz));
    return 1125.0 * std::log1p(frequency_hz / 700.0);
}

double mel_to_hz(double mel_value) { return 700.0 * std::expm1(mel_value / 1125.0); }

PoolSchedule build_schedule() {
    PoolSchedule schedule;
    std::size_t bin = 1;
    for (std::size_t w = 0; w < kLowWindows; ++w, bin += kLowStride) schedule.windows.push_back({bin, kLowStride});

    const std::size_t first_high = bin; // 27
    const double lo = mel(static_cast<double>(first_high - 1) * kBinHz);
    const double hi = mel(static_cast<double>(kSpectrumBins) * kBinHz);
    std::vector<std::size_t> boundary(kHighWindows + 1);
    boundary.front() = first_high - 1;
    boundary.back() = kSpectrumBins;
    for (std::size_t j = 1; j < kHighWindows; ++j) {
        const double m = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(kHighWindows);
        boundary[j] = static_cast<std::size_t>(std::lround(mel_to_hz(m) / kBinHz));
    }
    std::vector<std::size_t> strides(kHighWindows);
    for (std::size_t j = 0; j < kHighWindows; ++j) strides[j] = boundary[j + 1] - boundary[j];
    repair(strides, kSpectrumBins - (first_high - 1));

    for (std::size_t s : strides) {
        schedule.windows.push_back({bin, s});
        bin += s;
    }
    validate_schedule(schedule);
    return schedule;
}

void validate_schedule(const PoolSchedule& schedule) {
    const auto& w = schedule.windows;
    if (w.size() != kPoolWindows) {
        throw Error("pool", "schedule has " + std::to_string(w.size()) + " windows, expected 28");
    }
    std::size_t next = 1;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const std::string where = "window " + std::to_string(i + 1);
        if (w[i].start_bin != next) throw Error("pool", where + " does not start where the previous ended");
        if (w[i].stride < kMinStride) throw Error("pool", where + " stride below 2");
        if (i < kLowWindows && w[i].stride != kLowStride) throw Error("pool", where + " must have stride 2");
        if (i > 0 && w[i].stride < w[i - 1].stride) throw Error("pool", where + " stride decreases");
        next += w[i].stride;
    }
    if (w.back().stride != kMaxStride) throw Error("pool", "final stride is not 10");
    if (next != kSpectrumBins + 1) throw Error("pool", "schedule covers " + std::to_string(next - 1) + " bins, expected 100");
}

void write_schedule(std::ostream& out, const PoolSchedule& schedule) {
    for (std::size_t i = 0; i < schedule.windows.size(); ++i) {
        out << (i + 1) << ' ' << schedule.windows[i].start_bin << ' ' << schedule.windows[i].stride << '\n';
    }
}

SpikeRaster pool(const FeatureMaps& maps, const PoolSchedule& schedule) {
    const std::size_t windows = schedule.windows.size();
    const std::size_t covered = schedule.windows.empty()
                                    ? 0
                                    : schedule.windows.back().start_bin + schedule.windows.back().stride - 1;
    const std::size_t steps = maps.maps[0].steps();
    SpikeRaster out(kFeatureMaps * windows, steps);
    for (std::size_t k = 0; k < kFeatureMaps; ++k) {
        const SpikeRaster& map = maps.maps[k];
        if (map.channels() != covered || map.steps() != steps) {
            throw Error("pool", "feature map " + std::to_string(k) + " is " + std::to_string(map.channels()) + "x" +
                                    std::to_string(map.steps()) + ", schedule expects " + std::to_string(covered) +
                                    " channels");
        }
        for (std::size_t w = 0; w < windows; ++w) {
            const std::size_t first = schedule.windows[w].start_bin - 1;
            std::size_t winner = first;
            int best = map.count(first);
            for (std::size_t c = first + 1; c < first + schedule.windows[w].stride; ++c) {
                const int n = map.count(c);
                if (n > best) {
                    best = n;
                    winner = c;
                }
            }
            out.set_train(k * windows + w, map.train(winner));
        }
    }
    return out;
}

} // namespace spikefeat
