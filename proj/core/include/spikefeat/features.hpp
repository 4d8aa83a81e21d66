#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace spikefeat {

using FeatureFrame = std::vector<double>;

struct FeatureSequence {
    std::string id;
    int label = 0;
    std::vector<FeatureFrame> frames;

    std::size_t dim() const noexcept { return frames.empty() ? 0 : frames.front().size(); }
};

/// none (F), D (F + delta), DA (F + delta + acceleration).
enum class DeltaMode { kNone, kDelta, kDeltaAccel };

const char* to_string(DeltaMode mode) noexcept;
DeltaMode parse_delta_mode(std::string_view text);
std::size_t delta_multiplier(DeltaMode mode) noexcept;

/// Regression deltas over a +/-2 frame window,
///   d_t = sum_{n=1,2} n (c_{t+n} - c_{t-n}) / 10,
/// with the first and last frames replicated past the edges.
std::vector<FeatureFrame> delta_block(const std::vector<FeatureFrame>& frames);

/// Appends delta (order 1) or delta + delta-delta (order 2) blocks.
FeatureSequence deltas(const FeatureSequence& seq, int order);
FeatureSequence with_deltas(const FeatureSequence& seq, DeltaMode mode);

/// Per-dimension affine map to zero mean and unit variance, fitted on
/// training frames. Dimensions with zero variance keep scale 1.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;

    static Standardizer fit(std::span<const FeatureSequence> sequences);
    FeatureFrame apply(const FeatureFrame& frame) const;
    FeatureSequence apply(const FeatureSequence& seq) const;
    std::size_t dim() const noexcept { return mean.size(); }

    bool operator==(const Standardizer&) const = default;
};

/// CSV rows `utt_id,label,frame,f1..fd`, header included.
void write_features_csv(std::ostream& out, std::span<const FeatureSequence> sequences, std::size_t dim);

} // namespace spikefeat
