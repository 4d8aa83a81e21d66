#include "spikefeat/network.hpp"

#include "spikefeat/error.hpp"
#include "spikefeat/rng.hpp"
#include "spikefeat/spike_encoder.hpp"

#include <numeric>

namespace spikefeat {

SpikingFrontEnd::SpikingFrontEnd(NetworkConfig config)
    : config_(std::move(config)), bank_(build_dog_bank()), schedule_(build_schedule()) {}

SpikeRaster SpikingFrontEnd::encode_frame(const FrameSpectrum& spectrum, std::uint64_t utterance_ordinal) const {
    RngStream rng(config_.seed, streams::frame(utterance_ordinal, spectrum.frame_index));
    return encode(spectrum, rng, config_.steps);
}

SpikeRaster SpikingFrontEnd::pool_frame(const FrameSpectrum& spectrum, std::uint64_t utterance_ordinal) const {
    const SpikeRaster input = encode_frame(spectrum, utterance_ordinal);
    return pool(convolve_integrate(input, bank_, config_.conv), schedule_);
}

PooledUtterance SpikingFrontEnd::pool_utterance(const Utterance& utt, std::uint64_t utterance_ordinal) const {
    validate(utt);
    PooledUtterance out;
    for (const auto& spectrum : analyze(utt, config_.frontend)) out.push_back(pool_frame(spectrum, utterance_ordinal));
    return out;
}

DiscoveryWeights train_discovery(std::span<const PooledUtterance> dataset, const NetworkConfig& config, int epochs,
                                 TrainingLog* log, const std::function<void(int)>& on_epoch) {
    if (dataset.empty()) throw Error("train-snn", "empty training set");
    if (epochs < 0) throw Error("train-snn", "negative epoch count");

    RngStream init(config.seed, streams::kWeightInit);
    DiscoveryWeights weights = DiscoveryWeights::random(config.hidden, kPooledChannels, init);

    std::vector<std::size_t> order(dataset.size());
    for (int epoch = 0; epoch < epochs; ++epoch) {
        std::iota(order.begin(), order.end(), 0);
        RngStream shuffle(config.seed, streams::kEpochShuffle + static_cast<std::uint64_t>(epoch));
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[shuffle.below(i)]);
        }
        std::size_t spikes = 0;
        for (std::size_t u : order) {
            for (const auto& frame : dataset[u]) spikes += train_frame(frame, weights, config.discovery).spikes.size();
        }
        if (log) {
            log->epoch_order.push_back(order);
            log->epoch_spikes.push_back(spikes);
        }
        if (on_epoch) on_epoch(epoch);
    }
    return weights;
}

DiscoveryWeights train_discovery(std::span<const Utterance> dataset, const SpikingFrontEnd& frontend, int epochs,
                                 TrainingLog* log) {
    std::vector<PooledUtterance> pooled;
    pooled.reserve(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) pooled.push_back(frontend.pool_utterance(dataset[i], i));
    return train_discovery(pooled, frontend.config(), epochs, log);
}

std::vector<FeatureFrame> extract(const PooledUtterance& pooled, const DiscoveryWeights& weights,
                                  const DiscoveryParams& params) {
    std::vector<FeatureFrame> out;
    out.reserve(pooled.size());
    for (const auto& frame : pooled) out.push_back(forward_frame(frame, weights, params).features);
    return out;
}

std::vector<FeatureFrame> extract(const Utterance& utt, std::uint64_t utterance_ordinal,
                                  const SpikingFrontEnd& frontend, const DiscoveryWeights& weights) {
    return extract(frontend.pool_utterance(utt, utterance_ordinal), weights, frontend.config().discovery);
}

} // namespace spikefeat
