#pragma once

#include "spikefeat/wav.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spikefeat {

/// Fields of a `<digit>_<speaker>_<index>.wav` file name.
struct UtteranceName {
    int label = 0;
    std::string speaker;
    int index = 0;
};

std::optional<UtteranceName> parse_utterance_name(std::string_view filename);

struct ManifestEntry {
    std::filesystem::path path;
    std::string id; // file stem, e.g. 3_jackson_0
    int label = 0;
    std::string speaker;
    int index = 0;
};

struct Manifest {
    std::vector<ManifestEntry> entries; // sorted by file name
    std::vector<std::string> warnings;

    std::vector<std::string> speakers() const; // sorted, unique
};

/// Recursively collects conforming WAV files. Non-conforming names are
/// skipped with a warning; the same file name in two directories and an
/// empty result are errors.
Manifest ingest(const std::filesystem::path& dataset_dir);

/// FNV-1a over every entry's file name and bytes, in manifest order.
std::string manifest_hash(const Manifest& manifest);

void write_manifest(std::ostream& out, const Manifest& manifest);

Utterance load_utterance(const ManifestEntry& entry);

/// Indices into Manifest::entries.
struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Holds out the listed speakers; with an empty list, the last
/// ceil(n / 6) speakers in sorted order.
Split split_by_speaker(const Manifest& manifest, const std::vector<std::string>& test_speakers);

/// Holds out the listed file names or stems.
Split split_by_files(const Manifest& manifest, const std::vector<std::string>& test_files);

} // namespace spikefeat
