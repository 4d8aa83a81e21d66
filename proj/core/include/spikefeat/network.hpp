#pragma once

#include "spikefeat/audio_frontend.hpp"
#include "spikefeat/feature_discovery.hpp"
#include "spikefeat/features.hpp"
#include "spikefeat/mel_pool.hpp"
#include "spikefeat/spiking_conv.hpp"
#include "spikefeat/wav.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace spikefeat {

/// Everything fixed ahead of the learned layer.
struct NetworkConfig {
    FrontendConfig frontend;
    LifParams conv = conv_lif_params();
    DiscoveryParams discovery;
    std::size_t hidden = kDefaultHidden;
    std::size_t steps = kSteps;
    std::uint64_t seed = 0;
};

/// Pooled rasters of one utterance, one per frame in temporal order.
using PooledUtterance = std::vector<SpikeRaster>;

/// Spectrum -> Poisson spikes -> DoG/LIF feature maps -> Mel max pooling.
/// Frame f of the utterance with ordinal k draws from stream
/// streams::frame(k, f) of the configured seed, so results do not depend
/// on processing order.
class SpikingFrontEnd {
public:
    explicit SpikingFrontEnd(NetworkConfig config);

    const NetworkConfig& config() const noexcept { return config_; }
    const DogFilterBank& bank() const noexcept { return bank_; }
    const PoolSchedule& schedule() const noexcept { return schedule_; }

    SpikeRaster encode_frame(const FrameSpectrum& spectrum, std::uint64_t utterance_ordinal) const;
    SpikeRaster pool_frame(const FrameSpectrum& spectrum, std::uint64_t utterance_ordinal) const;
    PooledUtterance pool_utterance(const Utterance& utt, std::uint64_t utterance_ordinal) const;

private:
    NetworkConfig config_;
    DogFilterBank bank_;
    PoolSchedule schedule_;
};

struct TrainingLog {
    /// Utterance presentation order per epoch (indices into the input).
    std::vector<std::vector<std::size_t>> epoch_order;
    /// Discovery-layer spikes (= STDP events) per epoch.
    std::vector<std::size_t> epoch_spikes;
};

/// Unsupervised training of the discovery layer. Weights start uniform on
/// (0, 1) from stream kWeightInit; each epoch visits the utterances in an
/// order shuffled from stream kEpochShuffle + epoch and presents every frame
/// in temporal order with online STDP. Labels are never read.
DiscoveryWeights train_discovery(std::span<const PooledUtterance> dataset, const NetworkConfig& config, int epochs,
                                 TrainingLog* log = nullptr,
                                 const std::function<void(int epoch)>& on_epoch = {});

/// Convenience overload: pools each utterance (ordinal = position in the
/// span) and trains on the result.
DiscoveryWeights train_discovery(std::span<const Utterance> dataset, const SpikingFrontEnd& frontend, int epochs,
                                 TrainingLog* log = nullptr);

/// Inference: one feature vector (accumulated membrane potentials) per
/// frame, no learning.
std::vector<FeatureFrame> extract(const PooledUtterance& pooled, const DiscoveryWeights& weights,
                                  const DiscoveryParams& params);
std::vector<FeatureFrame> extract(const Utterance& utt, std::uint64_t utterance_ordinal,
                                  const SpikingFrontEnd& frontend, const DiscoveryWeights& weights);

} // namespace spikefeat
