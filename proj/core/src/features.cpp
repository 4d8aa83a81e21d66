#include "spikefeat/features.hpp"

#include "spikefeat/error.hpp"
#include "spikefeat/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace spikefeat {

const char* to_string(DeltaMode mode) noexcept {
    switch (mode) {
    case DeltaMode::kNone: return "none";
    case DeltaMode::kDelta: return "D";
    case DeltaMode::kDeltaAccel: return "DA";
    }
    return "none";
}

DeltaMode parse_delta_mode(std::string_view text) {
    if (text == "none" || text == "F") return DeltaMode::kNone;
    if (text == "D" || text == "FD") return DeltaMode::kDelta;
    if (text == "DA" || text == "FDA") return DeltaMode::kDeltaAccel;
    throw Error("config", "delta_mode must be none, D or DA, got '" + std::string(text) + "'");
}

std::size_t delta_multiplier(DeltaMode mode) noexcept {
    return mode == DeltaMode::kNone ? 1 : (mode == DeltaMode::kDelta ? 2 : 3);
}

std::vector<FeatureFrame> delta_block(const std::vector<FeatureFrame>& frames) {
    const auto n = static_cast<std::ptrdiff_t>(frames.size());
    if (n == 0) throw Error("hmm", "deltas of an empty sequence");
    const std::size_t dim = frames.front().size();
    auto at = [&](std::ptrdiff_t t) -> const FeatureFrame& { return frames[std::clamp<std::ptrdiff_t>(t, 0, n - 1)]; };

    std::vector<FeatureFrame> out(frames.size(), FeatureFrame(dim, 0.0));
    for (std::ptrdiff_t t = 0; t < n; ++t) {
        const auto& prev1 = at(t - 1);
        const auto& next1 = at(t + 1);
        const auto& prev2 = at(t - 2);
        const auto& next2 = at(t + 2);
        for (std::size_t d = 0; d < dim; ++d) {
            const double num = 1.0 * (next1[d] - prev1[d]) + 2.0 * (next2[d] - prev2[d]);
            out[static_cast<std::size_t>(t)][d] = num / 10.0;
        }
    }
    return out;
}

FeatureSequence deltas(const FeatureSequence& seq, int order) {
    if (order != 1 && order != 2) throw Error("hmm", "delta order must be 1 or 2");
    if (seq.frames.empty()) throw Error("hmm", seq.id + ": deltas of an empty sequence");
    const auto d1 = delta_block(seq.frames);
    std::vector<FeatureFrame> d2;
    if (order == 2) d2 = delta_block(d1);

    FeatureSequence out{seq.id, seq.label, {}};
    out.frames.reserve(seq.frames.size());
    for (std::size_t t = 0; t < seq.frames.size(); ++t) {
        FeatureFrame f = seq.frames[t];
        f.insert(f.end(), d1[t].begin(), d1[t].end());
        if (order == 2) f.insert(f.end(), d2[t].begin(), d2[t].end());
        out.frames.push_back(std::move(f));
    }
    return out;
}

FeatureSequence with_deltas(const FeatureSequence& seq, DeltaMode mode) {
    switch (mode) {
    case DeltaMode::kNone: return seq;
    case DeltaMode::kDelta: return deltas(seq, 1);
    case DeltaMode::kDeltaAccel: return deltas(seq, 2);
    }
    return seq;
}

Standardizer Standardizer::fit(std::span<const FeatureSequence> sequences) {
    std::size_t dim = 0;
    std::size_t count = 0;
    for (const auto& s : sequences) {
        for (const auto& f : s.frames) {
            if (dim == 0) dim = f.size();
            if (f.size() != dim) throw Error("hmm", s.id + ": inconsistent feature dimension");
            ++count;
        }
    }
    if (count == 0) throw Error("hmm", "cannot fit standardization on zero frames");

    Standardizer st;
    st.mean.assign(dim, 0.0);
    st.scale.assign(dim, 1.0);
    for (const auto& s : sequences) {
        for (const auto& f : s.frames) {
            for (std::size_t d = 0; d < dim; ++d) st.mean[d] += f[d];
        }
    }
    for (double& m : st.mean) m /= static_cast<double>(count);
    std::vector<double> var(dim, 0.0);
    for (const auto& s : sequences) {
        for (const auto& f : s.frames) {
            for (std::size_t d = 0; d < dim; ++d) {
                const double e = f[d] - st.mean[d];
                var[d] += e * e;
            }
        }
    }
    for (std::size_t d = 0; d < dim; ++d) {
        const double v = var[d] / static_cast<double>(count);
        st.scale[d] = v > 0.0 ? std::sqrt(v) : 1.0;
    }
    return st;
}

FeatureFrame Standardizer::apply(const FeatureFrame& frame) const {
    if (frame.size() != mean.size()) {
        throw Error("hmm", "frame dimension " + std::to_string(frame.size()) + " does not match standardizer " +
                               std::to_string(mean.size()));
    }
    FeatureFrame out(frame.size());
    for (std::size_t d = 0; d < frame.size(); ++d) out[d] = (frame[d] - mean[d]) / scale[d];
    return out;
}

FeatureSequence Standardizer::apply(const FeatureSequence& seq) const {
    FeatureSequence out{seq.id, seq.label, {}};
    out.frames.reserve(seq.frames.size());
    for (const auto& f : seq.frames) out.frames.push_back(apply(f));
    return out;
}

void write_features_csv(std::ostream& out, std::span<const FeatureSequence> sequences, std::size_t dim) {
    out << "utt_id,label,frame";
    for (std::size_t d = 1; d <= dim; ++d) out << ",f" << d;
    out << '\n';
    for (const auto& s : sequences) {
        for (std::size_t t = 0; t < s.frames.size(); ++t) {
            if (s.frames[t].size() != dim) throw Error("features", s.id + ": frame dimension mismatch");
            out << s.id << ',' << s.label << ',' << t;
            for (double v : s.frames[t]) out << ',' << format_double(v);
            out << '\n';
        }
    }
}

} // namespace spikefeat
