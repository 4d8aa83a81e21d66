#include "spikefeat/rng.hpp"

#include <cmath>
#include <numbers>

namespace spikefeat {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed & 0xffffffffu),
        static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream_id & 0xffffffffu),
        static_cast<std::uint32_t>(stream_id >> 32),
    };
    return std::mt19937_64(seq);
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

std::uint64_t RngStream::below(std::uint64_t n) {
    // Largest multiple of n representable in 64 bits bounds the accepted range.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

double RngStream::normal() {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::string_view RngStream::generator_identity() noexcept {
    return "mt19937_64 seeded by seed_seq(seed.lo,seed.hi,stream.lo,stream.hi); "
           "uniform=(x>>11)*2^-53";
}

} // namespace spikefeat
