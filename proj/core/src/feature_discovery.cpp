#include "spikefeat/feature_discovery.hpp"

#include "spikefeat/error.hpp"
#include "spikefeat/text_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace spikefeat {

DiscoveryWeights::DiscoveryWeights(std::size_t hidden, std::size_t inputs, double fill)
    : hidden_(hidden), inputs_(inputs), values_(hidden * inputs, fill) {}

DiscoveryWeights DiscoveryWeights::random(std::size_t hidden, std::size_t inputs, RngStream& rng) {
    DiscoveryWeights w(hidden, inputs);
    for (double& v : w.values_) v = rng.uniform_open();
    return w;
}

void write_weights(std::ostream& out, const DiscoveryWeights& weights) {
    out << "snnw v1 H=" << weights.hidden() << " inputs=" << weights.inputs() << '\n';
    for (std::size_t h = 0; h < weights.hidden(); ++h) {
        const auto row = weights.row(h);
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ' ';
            out << format_double(row[i]);
        }
        out << '\n';
    }
}

DiscoveryWeights read_weights(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error("weights", "empty weight file");
    std::size_t hidden = 0;
    std::size_t inputs = 0;
    if (std::sscanf(line.c_str(), "snnw v1 H=%zu inputs=%zu", &hidden, &inputs) != 2) {
        throw Error("weights", "bad header: " + line);
    }
    DiscoveryWeights w(hidden, inputs);
    for (std::size_t h = 0; h < hidden; ++h) {
        if (!std::getline(in, line)) throw Error("weights", "missing row " + std::to_string(h));
        const auto fields = tokens(line);
        if (fields.size() != inputs) {
            throw Error("weights", "row " + std::to_string(h) + " has " + std::to_string(fields.size()) +
                                       " values, expected " + std::to_string(inputs));
        }
        for (std::size_t i = 0; i < inputs; ++i) {
            const double v = parse_double(fields[i], "weights");
            if (!(v >= 0.0 && v <= 1.0)) throw Error("weights", "weight outside [0,1] in row " + std::to_string(h));
            w.at(h, i) = v;
        }
    }
    return w;
}

ActiveInputs active_at(const SpikeRaster& raster, std::size_t step) {
    ActiveInputs active;
    for (std::size_t c = 0; c < raster.channels(); ++c) {
        if (raster.spike(c, step)) active.push_back(c);
    }
    return active;
}

std::vector<double> activations(const DiscoveryWeights& weights, const ActiveInputs& active) {
    std::vector<double> a(weights.hidden(), 0.0);
    for (std::size_t h = 0; h < weights.hidden(); ++h) {
        const auto row = weights.row(h);
        double sum = 0.0;
        for (std::size_t i : active) sum += row[i];
        a[h] = sum;
    }
    return a;
}

std::vector<double> softmax(std::span<const double> activation) {
    std::vector<double> p(activation.size());
    if (activation.empty()) return p;
    const double peak = *std::max_element(activation.begin(), activation.end());
    double total = 0.0;
    for (std::size_t h = 0; h < activation.size(); ++h) {
        p[h] = std::exp(activation[h] - peak);
        total += p[h];
    }
    for (double& v : p) v /= total;
    return p;
}

std::vector<double> posterior(const DiscoveryWeights& weights, const ActiveInputs& active) {
    return softmax(activations(weights, active));
}

std::vector<double> posterior(const DiscoveryWeights& weights, std::span<const std::uint8_t> y) {
    if (y.size() != weights.inputs()) {
        throw Error("discovery", "spike vector has " + std::to_string(y.size()) + " entries, weights expect " +
                                     std::to_string(weights.inputs()));
    }
    ActiveInputs active;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i]) active.push_back(i);
    }
    return posterior(weights, active);
}

double stdp_delta(double w, bool in_window, const StdpParams& params) noexcept {
    return in_window ? params.a_plus * std::exp(-w) : -params.a_minus;
}

void stdp_update(DiscoveryWeights& weights, std::size_t h, std::span<const int> last_spike, int t,
                 const StdpParams& params) {
    if (last_spike.size() != weights.inputs()) {
        throw Error("discovery", "last_spike has " + std::to_string(last_spike.size()) + " entries, expected " +
                                     std::to_string(weights.inputs()));
    }
    auto row = weights.row(h);
    const int earliest = t - params.epsilon_ms;
    for (std::size_t i = 0; i < row.size(); ++i) {
        const bool in_window = last_spike[i] >= earliest && last_spike[i] <= t;
        row[i] = std::clamp(row[i] + stdp_delta(row[i], in_window, params), 0.0, 1.0);
    }
}

namespace {

FrameResult run_frame(const SpikeRaster& pooled, const DiscoveryWeights& weights, DiscoveryWeights* learn,
                      const DiscoveryParams& params) {
    if (pooled.channels() != weights.inputs()) {
        throw Error("discovery", "pooled raster has " + std::to_string(pooled.channels()) +
                                     " channels, weights expect " + std::to_string(weights.inputs()));
    }
    const std::size_t hidden = weights.hidden();
    const LifParams lif = params.membrane();
    const double decay = lif.decay();
    const double gain = lif.input_gain();

    FrameResult result;
    result.features.assign(hidden, 0.0);
    std::vector<double> potential(hidden, 0.0);
    std::vector<int> last_spike(learn ? weights.inputs() : 0, kNeverSpiked);

    for (std::size_t t = 0; t < pooled.steps(); ++t) {
        const ActiveInputs active = active_at(pooled, t);
        if (learn) {
            for (std::size_t i : active) last_spike[i] = static_cast<int>(t);
        }
        const std::vector<double> drive = activations(weights, active);
        const std::vector<double> prob = softmax(drive);

        std::size_t fired = hidden;
        for (std::size_t h = 0; h < hidden; ++h) {
            double& u = potential[h];
            u = u * decay + gain * drive[h];
            if (u >= lif.threshold && prob[h] > 0.5) {
                u = 0.0;
                fired = h;
                result.spikes.push_back({h, t});
            }
            result.features[h] += u;
        }
        // Posteriors sum to one, so at most one neuron clears 0.5.
        if (learn && fired < hidden) {
            stdp_update(*learn, fired, last_spike, static_cast<int>(t), params.stdp);
        }
    }
    return result;
}

} // namespace

FrameResult forward_frame(const SpikeRaster& pooled, const DiscoveryWeights& weights, const DiscoveryParams& params) {
    return run_frame(pooled, weights, nullptr, params);
}

FrameResult train_frame(const SpikeRaster& pooled, DiscoveryWeights& weights, const DiscoveryParams& params) {
    return run_frame(pooled, weights, &weights, params);
}

} // namespace spikefeat
