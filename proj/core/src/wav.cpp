#include "spikefeat/wav.hpp"

#include "spikefeat/error.hpp"

#include <cstring>
#include <fstream>
#include <iterator>

namespace spikefeat {

namespace {

std::uint32_t le32(const std::uint8_t* p) {
    return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) | (std::uint32_t{p[2]} << 16) |
           (std::uint32_t{p[3]} << 24);
}

std::uint16_t le16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

bool tag_is(const std::uint8_t* p, const char* tag) { return std::memcmp(p, tag, 4) == 0; }

} // namespace

void validate(const Utterance& utt) {
    if (utt.sample_rate != kSampleRate) {
        throw Error("wav", utt.id + ": sample_rate " + std::to_string(utt.sample_rate) +
                               " Hz, expected 8000 Hz");
    }
    if (utt.samples.empty()) throw Error("wav", utt.id + ": no samples");
    if (utt.label < 0 || utt.label > 9) {
        throw Error("wav", utt.id + ": label " + std::to_string(utt.label) + " outside 0..9");
    }
}

std::vector<std::int16_t> decode_wav(std::span<const std::uint8_t> bytes, int* sample_rate_out) {
    if (bytes.size() < 12 || !tag_is(bytes.data(), "RIFF") || !tag_is(bytes.data() + 8, "WAVE")) {
        throw Error("wav", "not a RIFF/WAVE file");
    }
    bool have_fmt = false;
    std::uint32_t rate = 0;
    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const std::uint8_t* chunk = bytes.data() + pos;
        const std::uint32_t size = le32(chunk + 4);
        const std::size_t body = pos + 8;
        if (body + size > bytes.size() && !tag_is(chunk, "data")) {
            throw Error("wav", "truncated chunk");
        }
        if (tag_is(chunk, "fmt ")) {
            if (size < 16) throw Error("wav", "fmt chunk too small");
            const std::uint8_t* f = bytes.data() + body;
            const std::uint16_t format = le16(f);
            const std::uint16_t channels = le16(f + 2);
            rate = le32(f + 4);
            const std::uint16_t bits = le16(f + 14);
            std::uint16_t effective_format = format;
            if (format == 0xfffe && size >= 40) effective_format = le16(f + 24); // WAVE_FORMAT_EXTENSIBLE
            if (effective_format != 1) {
                throw Error("wav", "audio_format " + std::to_string(format) + " unsupported, expected 1 (PCM)");
            }
            if (channels != 1) {
                throw Error("wav", "num_channels " + std::to_string(channels) + " unsupported, expected 1 (mono)");
            }
            if (bits != 16) {
                throw Error("wav", "bits_per_sample " + std::to_string(bits) + " unsupported, expected 16");
            }
            if (rate != static_cast<std::uint32_t>(kSampleRate)) {
                throw Error("wav", "sample_rate " + std::to_string(rate) + " unsupported, expected 8000");
            }
            have_fmt = true;
        } else if (tag_is(chunk, "data")) {
            if (!have_fmt) throw Error("wav", "data chunk before fmt chunk");
            // Tolerate writers that leave a bogus size in streamed files.
            const std::size_t avail = std::min<std::size_t>(size, bytes.size() - body);
            std::vector<std::int16_t> samples(avail / 2);
            for (std::size_t i = 0; i < samples.size(); ++i) {
                samples[i] = static_cast<std::int16_t>(le16(bytes.data() + body + 2 * i));
            }
            if (sample_rate_out) *sample_rate_out = static_cast<int>(rate);
            return samples;
        }
        pos = body + size + (size & 1u);
    }
    throw Error("wav", have_fmt ? "missing data chunk" : "missing fmt chunk");
}

std::vector<std::int16_t> read_wav(const std::filesystem::path& path, int* sample_rate_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("wav", "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return decode_wav(bytes, sample_rate_out);
    } catch (const Error& e) {
        throw Error("wav", path.filename().string() + ": " + e.message());
    }
}

std::vector<std::uint8_t> encode_wav(std::span<const std::int16_t> samples, int sample_rate) {
    std::vector<std::uint8_t> out;
    const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
    out.reserve(44 + data_bytes);
    out.insert(out.end(), {'R', 'I', 'F', 'F'});
    put32(out, 36 + data_bytes);
    out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
    put32(out, 16);
    put16(out, 1);
    put16(out, 1);
    put32(out, static_cast<std::uint32_t>(sample_rate));
    put32(out, static_cast<std::uint32_t>(sample_rate * 2));
    put16(out, 2);
    put16(out, 16);
    out.insert(out.end(), {'d', 'a', 't', 'a'});
    put32(out, data_bytes);
    for (std::int16_t s : samples) put16(out, static_cast<std::uint16_t>(s));
    return out;
}

void write_wav(const std::filesystem::path& path, std::span<const std::int16_t> samples, int sample_rate) {
    const auto bytes = encode_wav(samples, sample_rate);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("wav", "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

} // namespace spikefeat
