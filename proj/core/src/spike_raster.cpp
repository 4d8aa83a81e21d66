#include "spikefeat/spike_raster.hpp"

#include "spikefeat/error.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace spikefeat {

SpikeRaster::SpikeRaster(std::size_t channels, std::size_t steps)
    : steps_(steps), trains_(channels, 0) {
    if (steps == 0 || steps > kMaxSteps) {
        throw Error("raster", "steps must be in 1.." + std::to_string(kMaxSteps) +
                                  ", got " + std::to_string(steps));
    }
}

std::size_t SpikeRaster::total_spikes() const noexcept {
    std::size_t n = 0;
    for (Train t : trains_) n += static_cast<std::size_t>(std::popcount(t));
    return n;
}

void write_raster(std::ostream& out, const SpikeRaster& raster) {
    out << "channels=" << raster.channels() << " steps=" << raster.steps() << '\n';
    std::string line(raster.steps(), '0');
    for (std::size_t c = 0; c < raster.channels(); ++c) {
        for (std::size_t t = 0; t < raster.steps(); ++t) line[t] = raster.spike(c, t) ? '1' : '0';
        out << line << '\n';
    }
}

SpikeRaster read_raster(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw Error("raster", "missing header line");
    std::size_t channels = 0;
    std::size_t steps = 0;
    if (std::sscanf(header.c_str(), "channels=%zu steps=%zu", &channels, &steps) != 2) {
        throw Error("raster", "malformed header: " + header);
    }
    SpikeRaster raster(channels, steps);
    std::string line;
    for (std::size_t c = 0; c < channels; ++c) {
        if (!std::getline(in, line) || line.size() != steps) {
            throw Error("raster", "channel line " + std::to_string(c) + " has wrong length");
        }
        for (std::size_t t = 0; t < steps; ++t) {
            if (line[t] == '1') {
                raster.set(c, t);
            } else if (line[t] != '0') {
                throw Error("raster", "non-binary character in channel " + std::to_string(c));
            }
        }
    }
    return raster;
}

} // namespace spikefeat
