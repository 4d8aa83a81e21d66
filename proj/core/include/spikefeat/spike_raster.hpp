#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace spikefeat {

/// Number of 1 ms simulation steps per presented frame.
inline constexpr std::size_t kSteps = 40;

/// Binary spike matrix, channels x steps. Each channel's train is packed
/// into one 64-bit word (bit t set = spike at step t), so steps <= 64.
class SpikeRaster {
public:
    using Train = std::uint64_t;
    static constexpr std::size_t kMaxSteps = 64;

    SpikeRaster() = default;
    SpikeRaster(std::size_t channels, std::size_t steps);

    std::size_t channels() const noexcept { return trains_.size(); }
    std::size_t steps() const noexcept { return steps_; }

    bool spike(std::size_t channel, std::size_t step) const noexcept {
        return (trains_[channel] >> step) & 1u;
    }
    void set(std::size_t channel, std::size_t step, bool value = true) noexcept {
        const Train bit = Train{1} << step;
        trains_[channel] = value ? (trains_[channel] | bit) : (trains_[channel] & ~bit);
    }

    Train train(std::size_t channel) const noexcept { return trains_[channel]; }
    void set_train(std::size_t channel, Train t) noexcept { trains_[channel] = t & step_mask(); }

    int count(std::size_t channel) const noexcept { return std::popcount(trains_[channel]); }
    std::size_t total_spikes() const noexcept;

    std::span<const Train> trains() const noexcept { return trains_; }

    Train step_mask() const noexcept {
        return steps_ == kMaxSteps ? ~Train{0} : ((Train{1} << steps_) - 1);
    }

    bool operator==(const SpikeRaster&) const = default;

private:
    std::size_t steps_ = 0;
    std::vector<Train> trains_;
};

/// Text dump: header `channels=<C> steps=<T>`, then one line of '0'/'1'
/// characters per channel.
void write_raster(std::ostream& out, const SpikeRaster& raster);
SpikeRaster read_raster(std::istream& in);

} // namespace spikefeat
