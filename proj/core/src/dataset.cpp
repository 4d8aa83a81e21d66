#include "spikefeat/dataset.hpp"

#include "spikefeat/error.hpp"
#include "spikefeat/text_io.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <map>
#include <ostream>
#include <set>

namespace spikefeat {

std::optional<UtteranceName> parse_utterance_name(std::string_view filename) {
    constexpr std::string_view ext = ".wav";
    if (filename.size() <= ext.size() || filename.substr(filename.size() - ext.size()) != ext) return std::nullopt;
    const auto parts = split(filename.substr(0, filename.size() - ext.size()), '_');
    if (parts.size() != 3 || parts[0].size() != 1 || parts[1].empty() || parts[2].empty()) return std::nullopt;
    if (parts[0][0] < '0' || parts[0][0] > '9') return std::nullopt;
    if (!std::all_of(parts[2].begin(), parts[2].end(), [](char c) { return c >= '0' && c <= '9'; })) {
        return std::nullopt;
    }
    UtteranceName name;
    name.label = parts[0][0] - '0';
    name.speaker = std::string(parts[1]);
    name.index = static_cast<int>(parse_int(parts[2], "ingest"));
    return name;
}

std::vector<std::string> Manifest::speakers() const {
    std::set<std::string> s;
    for (const auto& e : entries) s.insert(e.speaker);
    return {s.begin(), s.end()};
}

Manifest ingest(const std::filesystem::path& dataset_dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dataset_dir)) throw Error("ingest", "not a directory: " + dataset_dir.string());
    Manifest manifest;
    std::map<std::string, fs::path> seen;
    for (const auto& item : fs::recursive_directory_iterator(dataset_dir)) {
        if (!item.is_regular_file()) continue;
        const std::string filename = item.path().filename().string();
        if (item.path().extension() != ".wav") continue;
        const auto name = parse_utterance_name(filename);
        if (!name) {
            manifest.warnings.push_back("skipping " + filename + ": expected <digit>_<speaker>_<index>.wav");
            continue;
        }
        if (const auto it = seen.find(filename); it != seen.end()) {
            throw Error("ingest", "duplicate file name " + filename + " in " + it->second.parent_path().string() +
                                      " and " + item.path().parent_path().string());
        }
        seen.emplace(filename, item.path());
        manifest.entries.push_back({item.path(), item.path().stem().string(), name->label, name->speaker, name->index});
    }
    if (manifest.entries.empty()) throw Error("ingest", "no usable WAV files under " + dataset_dir.string());
    std::sort(manifest.entries.begin(), manifest.entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.path.filename() < b.path.filename(); });
    std::sort(manifest.warnings.begin(), manifest.warnings.end());
    return manifest;
}

std::string manifest_hash(const Manifest& manifest) {
    Fnv1a64 h;
    for (const auto& e : manifest.entries) {
        h.update(e.path.filename().string());
        std::ifstream in(e.path, std::ios::binary);
        if (!in) throw Error("ingest", "cannot read " + e.path.string());
        const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        h.update(bytes);
    }
    return h.hex();
}

void write_manifest(std::ostream& out, const Manifest& manifest) {
    out << "# id label speaker index\n";
    for (const auto& e : manifest.entries) {
        out << e.id << ' ' << e.label << ' ' << e.speaker << ' ' << e.index << '\n';
    }
}

Utterance load_utterance(const ManifestEntry& entry) {
    Utterance utt;
    utt.id = entry.id;
    utt.label = entry.label;
    utt.samples = read_wav(entry.path, &utt.sample_rate);
    validate(utt);
    return utt;
}

Split split_by_speaker(const Manifest& manifest, const std::vector<std::string>& test_speakers) {
    std::set<std::string> held(test_speakers.begin(), test_speakers.end());
    if (held.empty()) {
        const auto all = manifest.speakers();
        const std::size_t n_test = (all.size() + 5) / 6;
        held.insert(all.end() - static_cast<std::ptrdiff_t>(n_test), all.end());
    }
    Split split;
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
        (held.count(manifest.entries[i].speaker) ? split.test : split.train).push_back(i);
    }
    if (split.train.empty()) throw Error("split", "speaker split leaves no training utterances");
    if (split.test.empty()) throw Error("split", "speaker split leaves no test utterances");
    return split;
}

Split split_by_files(const Manifest& manifest, const std::vector<std::string>& test_files) {
    std::set<std::string> held;
    for (const auto& f : test_files) {
        std::string stem = f;
        if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".wav") stem.resize(stem.size() - 4);
        held.insert(std::filesystem::path(stem).filename().string());
    }
    Split split;
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
        (held.count(manifest.entries[i].id) ? split.test : split.train).push_back(i);
    }
    if (split.train.empty() || split.test.empty()) throw Error("split", "file-list split leaves an empty side");
    return split;
}

} // namespace spikefeat
