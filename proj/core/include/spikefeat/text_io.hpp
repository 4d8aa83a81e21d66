#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace spikefeat {

/// Shortest representation that parses back to the identical double.
std::string format_double(double value);

/// Strict parse of a whole token; throws Error(stage) on failure.
double parse_double(std::string_view token, const char* stage = "parse");
long long parse_int(std::string_view token, const char* stage = "parse");

std::vector<std::string_view> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

/// Splits on runs of spaces/tabs.
std::vector<std::string_view> tokens(std::string_view text);

/// 64-bit FNV-1a, used for manifest and artifact fingerprints.
class Fnv1a64 {
public:
    void update(std::string_view bytes) noexcept;
    void update(const void* data, std::size_t size) noexcept;
    std::uint64_t value() const noexcept { return hash_; }
    std::string hex() const;

private:
    std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

} // namespace spikefeat
