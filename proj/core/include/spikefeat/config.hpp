#pragma once

#include "spikefeat/audio_frontend.hpp"
#include "spikefeat/features.hpp"
#include "spikefeat/network.hpp"
#include "spikefeat/spiking_conv.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace spikefeat {

enum class SplitPolicy { kSpeaker, kFiles };

/// Run configuration. Defaults are the published model constants; the
/// HMM grid defaults to a single S=10, G=4 cell.
struct RunConfig {
    std::uint64_t seed = 2018;
    std::size_t hidden = 30;
    double theta_conv = 0.4;
    double theta_h = 3.0;
    double a_plus = 1e-3;
    double a_minus = 0.75e-3;
    int epsilon_ms = 5;
    int epochs = 10;
    std::size_t steps = 40;
    DeltaMode delta_mode = DeltaMode::kNone;
    std::vector<std::size_t> hmm_states{10};
    std::vector<std::size_t> hmm_mixtures{4};
    int em_iterations = 20;
    double em_tolerance = 1e-4;
    double variance_floor = 1e-4;
    WindowKind window = WindowKind::kHamming;
    SynapticInput synapse = SynapticInput::kImpulse;
    std::string dataset_dir;
    std::string output_dir = "run";
    SplitPolicy split = SplitPolicy::kSpeaker;
    std::vector<std::string> test_speakers;
    std::string test_list;
    /// Worker threads for stateless stages; 0 = hardware concurrency.
    /// Never affects results.
    std::size_t threads = 0;

    bool operator==(const RunConfig&) const = default;
};

/// Applies one `key = value` setting; throws Error("config") for unknown
/// keys or bad values. Keys starting with `meta.` are accepted and ignored.
void set_option(RunConfig& config, std::string_view key, std::string_view value);

/// Line-based `key = value` text, `#` starts a comment.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

/// Every key, one per line, in a fixed order; parse_config() of the output
/// returns an equal RunConfig.
void write_config(std::ostream& out, const RunConfig& config);

NetworkConfig network_config(const RunConfig& config);

} // namespace spikefeat
