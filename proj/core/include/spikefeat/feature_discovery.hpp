#pragma once

#include "spikefeat/mel_pool.hpp"
#include "spikefeat/rng.hpp"
#include "spikefeat/spiking_conv.hpp"

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

namespace spikefeat {

inline constexpr std::size_t kDefaultHidden = 30;

/// H x inputs synaptic weights, every entry in [0, 1].
class DiscoveryWeights {
public:
    DiscoveryWeights() = default;
    DiscoveryWeights(std::size_t hidden, std::size_t inputs, double fill = 0.0);

    /// Independent uniform draws on (0, 1), row-major.
    static DiscoveryWeights random(std::size_t hidden, std::size_t inputs, RngStream& rng);

    std::size_t hidden() const noexcept { return hidden_; }
    std::size_t inputs() const noexcept { return inputs_; }

    std::span<double> row(std::size_t h) noexcept { return {values_.data() + h * inputs_, inputs_}; }
    std::span<const double> row(std::size_t h) const noexcept { return {values_.data() + h * inputs_, inputs_}; }
    double& at(std::size_t h, std::size_t i) noexcept { return values_[h * inputs_ + i]; }
    double at(std::size_t h, std::size_t i) const noexcept { return values_[h * inputs_ + i]; }

    std::span<const double> values() const noexcept { return values_; }

    bool operator==(const DiscoveryWeights&) const = default;

private:
    std::size_t hidden_ = 0;
    std::size_t inputs_ = 0;
    std::vector<double> values_;
};

/// Persistence: header `snnw v1 H=<H> inputs=<N>`, then H lines of N
/// shortest-round-trip decimals.
void write_weights(std::ostream& out, const DiscoveryWeights& weights);
DiscoveryWeights read_weights(std::istream& in);

struct StdpParams {
    double a_plus = 1e-3;
    double a_minus = 0.75e-3;
    int epsilon_ms = 5;
    double theta_h = 3.0;
};

/// Neuron and learning constants for the discovery layer. The membrane
/// shares the convolutional layer's time constant.
struct DiscoveryParams {
    StdpParams stdp;
    double tau_ms = 1.0;
    double resistance = 1.0;
    SynapticInput input = SynapticInput::kImpulse;

    LifParams membrane() const {
        return LifParams{tau_ms, resistance, stdp.theta_h, 1.0, input};
    }
};

/// Indices of the inputs spiking at one step, ascending.
using ActiveInputs = std::vector<std::size_t>;

ActiveInputs active_at(const SpikeRaster& raster, std::size_t step);

/// W_h . y for every neuron, summed over active inputs in index order.
std::vector<double> activations(const DiscoveryWeights& weights, const ActiveInputs& active);

/// Softmax with max subtraction.
std::vector<double> softmax(std::span<const double> activation);

/// exp(W_h.y) / sum_j exp(W_j.y) for a binary input vector y.
std::vector<double> posterior(const DiscoveryWeights& weights, const ActiveInputs& active);
std::vector<double> posterior(const DiscoveryWeights& weights, std::span<const std::uint8_t> y);

/// Sentinel for "input never spiked".
inline constexpr int kNeverSpiked = std::numeric_limits<int>::min() / 2;

/// Probabilistic STDP on row h after neuron h fires at step t. Input i is
/// potentiated by a_plus*exp(-w) when its last spike lies in [t - eps, t],
/// otherwise depressed by a_minus; results are clamped to [0, 1].
void stdp_update(DiscoveryWeights& weights, std::size_t h, std::span<const int> last_spike, int t,
                 const StdpParams& params);

/// Change stdp_update applies to one synapse (before clamping).
double stdp_delta(double w, bool in_window, const StdpParams& params) noexcept;

struct SpikeEvent {
    std::size_t neuron = 0;
    std::size_t step = 0;

    bool operator==(const SpikeEvent&) const = default;
};

struct FrameResult {
    /// Accumulated membrane potential per neuron (sum of post-update values
    /// over all steps, resets included).
    std::vector<double> features;
    std::vector<SpikeEvent> spikes;
};

/// Runs one pooled frame through the layer without learning. A neuron
/// fires when its potential reaches theta_h and its posterior exceeds 0.5,
/// then resets to 0.
FrameResult forward_frame(const SpikeRaster& pooled, const DiscoveryWeights& weights, const DiscoveryParams& params);

/// forward_frame with STDP applied to the firing neuron's row at every
/// spike; later steps of the same frame see the updated weights.
FrameResult train_frame(const SpikeRaster& pooled, DiscoveryWeights& weights, const DiscoveryParams& params);

} // namespace spikefeat
