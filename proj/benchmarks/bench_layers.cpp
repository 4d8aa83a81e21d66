#include "spikefeat/audio_frontend.hpp"
#include "spikefeat/feature_discovery.hpp"
#include "spikefeat/hmm.hpp"
#include "spikefeat/mel_pool.hpp"
#include "spikefeat/network.hpp"
#include "spikefeat/rng.hpp"
#include "spikefeat/spike_encoder.hpp"
#include "spikefeat/spiking_conv.hpp"

#include <benchmark/benchmark.h>

using namespace spikefeat;

namespace {

SpikeRaster random_raster(std::size_t channels, double p, std::uint64_t seed) {
    RngStream rng(seed, 0);
    SpikeRaster r(channels, kSteps);
    for (std::size_t c = 0; c < channels; ++c)
        for (std::size_t t = 0; t < kSteps; ++t) r.set(c, t, rng.uniform() < p);
    return r;
}

FrameSpectrum random_spectrum() {
    RngStream rng(1, 1);
    FrameSpectrum s;
    for (double& m : s.magnitudes) m = rng.uniform();
    return s;
}

void BM_Spectrum(benchmark::State& state) {
    FrameWindow w{};
    RngStream rng(2, 2);
    for (double& x : w) x = rng.uniform() - 0.5;
    for (auto _ : state) benchmark::DoNotOptimize(magnitude_spectrum(w));
}
BENCHMARK(BM_Spectrum);

void BM_Encode(benchmark::State& state) {
    const auto s = random_spectrum();
    std::uint64_t frame = 0;
    for (auto _ : state) {
        RngStream rng(2018, streams::frame(0, frame++));
        benchmark::DoNotOptimize(encode(s, rng));
    }
}
BENCHMARK(BM_Encode);

void BM_ConvolveIntegrate(benchmark::State& state) {
    const auto in = random_raster(kSpectrumBins, static_cast<double>(state.range(0)) / 100.0, 3);
    const auto bank = build_dog_bank();
    const auto params = conv_lif_params();
    for (auto _ : state) benchmark::DoNotOptimize(convolve_integrate(in, bank, params));
}
BENCHMARK(BM_ConvolveIntegrate)->Arg(5)->Arg(30)->Arg(80);

void BM_Pool(benchmark::State& state) {
    const auto maps = convolve_integrate(random_raster(kSpectrumBins, 0.3, 4), build_dog_bank(), conv_lif_params());
    const auto schedule = build_schedule();
    for (auto _ : state) benchmark::DoNotOptimize(pool(maps, schedule));
}
BENCHMARK(BM_Pool);

void BM_PoolFrame(benchmark::State& state) {
    const SpikingFrontEnd frontend(NetworkConfig{});
    const auto s = random_spectrum();
    for (auto _ : state) benchmark::DoNotOptimize(frontend.pool_frame(s, 0));
}
BENCHMARK(BM_PoolFrame);

void BM_DiscoveryForward(benchmark::State& state) {
    RngStream rng(5, 5);
    const auto w = DiscoveryWeights::random(static_cast<std::size_t>(state.range(0)), kPooledChannels, rng);
    const auto in = random_raster(kPooledChannels, 0.1, 6);
    const DiscoveryParams params;
    for (auto _ : state) benchmark::DoNotOptimize(forward_frame(in, w, params));
}
BENCHMARK(BM_DiscoveryForward)->Arg(10)->Arg(30)->Arg(100);

void BM_DiscoveryTrain(benchmark::State& state) {
    RngStream rng(5, 5);
    auto w = DiscoveryWeights::random(30, kPooledChannels, rng);
    const auto in = random_raster(kPooledChannels, 0.1, 6);
    const DiscoveryParams params;
    for (auto _ : state) benchmark::DoNotOptimize(train_frame(in, w, params));
}
BENCHMARK(BM_DiscoveryTrain);

HmmModel trained_model(std::size_t states, std::size_t mixtures, std::vector<FeatureSequence>& seqs) {
    RngStream rng(7, 7);
    seqs.resize(20);
    for (auto& s : seqs) {
        s.frames.clear();
        for (int t = 0; t < 40; ++t) {
            FeatureFrame f(30);
            for (double& v : f) v = rng.normal() + 0.1 * t;
            s.frames.push_back(f);
        }
    }
    HmmTrainOptions opt;
    opt.states = states;
    opt.mixtures = mixtures;
    opt.max_iterations = 3;
    return train_model(seqs, opt, 0);
}

void BM_HmmLogLikelihood(benchmark::State& state) {
    std::vector<FeatureSequence> seqs;
    const auto m = trained_model(10, static_cast<std::size_t>(state.range(0)), seqs);
    for (auto _ : state) benchmark::DoNotOptimize(log_likelihood(m, seqs[0].frames));
}
BENCHMARK(BM_HmmLogLikelihood)->Arg(2)->Arg(4)->Arg(8);

void BM_HmmForwardBackward(benchmark::State& state) {
    std::vector<FeatureSequence> seqs;
    const auto m = trained_model(10, 4, seqs);
    for (auto _ : state) benchmark::DoNotOptimize(forward_backward(m, seqs[0].frames));
}
BENCHMARK(BM_HmmForwardBackward);

void BM_HmmTrain(benchmark::State& state) {
    std::vector<FeatureSequence> seqs;
    trained_model(10, 4, seqs);
    HmmTrainOptions opt;
    opt.max_iterations = 5;
    for (auto _ : state) benchmark::DoNotOptimize(train_model(seqs, opt, 0));
}
BENCHMARK(BM_HmmTrain)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
