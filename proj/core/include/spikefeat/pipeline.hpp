#pragma once

#include "spikefeat/config.hpp"
#include "spikefeat/dataset.hpp"
#include "spikefeat/feature_discovery.hpp"
#include "spikefeat/features.hpp"
#include "spikefeat/hmm.hpp"
#include "spikefeat/network.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace spikefeat {

std::string_view version() noexcept;

/// Manifest, split and decoded audio for a run.
struct Dataset {
    Manifest manifest;
    Split split;
    std::vector<Utterance> utterances; // parallel to manifest.entries
};

Dataset load_dataset(const RunConfig& config);

/// Pools every utterance; utterance i uses encoder streams of ordinal i.
std::vector<PooledUtterance> pool_dataset(const SpikingFrontEnd& frontend, const std::vector<Utterance>& utterances,
                                          std::size_t threads);

/// Feature sequences (deltas applied per config) for the given manifest
/// indices.
std::vector<FeatureSequence> extract_sequences(const std::vector<PooledUtterance>& pooled,
                                               const std::vector<Utterance>& utterances,
                                               const std::vector<std::size_t>& indices,
                                               const DiscoveryWeights& weights, const RunConfig& config);

/// Inverse of write_features_csv().
std::vector<FeatureSequence> read_features_csv(std::istream& in);

using ConfusionMatrix = std::array<std::array<std::size_t, kDigitClasses>, kDigitClasses>;

struct EvaluationCell {
    std::size_t states = 0;
    std::size_t mixtures = 0;
    ConfusionMatrix confusion{}; // [true][predicted]
    std::size_t correct = 0;     // tallied per utterance
    std::size_t total = 0;

    /// Trace of the confusion matrix over its sum.
    double accuracy() const;
};

EvaluationCell evaluate(const HmmModelSet& models, const std::vector<FeatureSequence>& test, std::size_t threads);

struct PipelineReport {
    std::size_t train_utterances = 0;
    std::size_t test_utterances = 0;
    std::size_t feature_dim = 0;
    std::vector<EvaluationCell> cells;
};

/// Plain-text report: summary, one confusion matrix per cell and, for more
/// than one cell, an accuracy grid with S rows and G columns.
void write_report(std::ostream& out, const RunConfig& config, const PipelineReport& report);

/// Config snapshot plus `meta.*` lines (version, generator, schedule,
/// manifest hash, split sizes, per-epoch spike counts). Loads back as the
/// same RunConfig.
void write_metadata(std::ostream& out, const RunConfig& config, const PoolSchedule& schedule,
                    const std::string& manifest_digest, const Split& split, const TrainingLog* log);

std::string model_file_name(std::size_t states, std::size_t mixtures);

/// Progress sink; may be null.
using Progress = std::ostream*;

/// Stage entry points used by the CLI. Each writes its artifacts into
/// config.output_dir.
void stage_ingest(const RunConfig& config, Progress progress);
DiscoveryWeights stage_train_snn(const RunConfig& config, Progress progress);
void stage_extract(const RunConfig& config, Progress progress);
void stage_train_hmm(const RunConfig& config, Progress progress);
PipelineReport stage_evaluate(const RunConfig& config, Progress progress);

/// ingest -> pool -> train SNN -> extract -> train HMMs -> evaluate, with
/// every artifact written to config.output_dir.
PipelineReport run_pipeline(const RunConfig& config, Progress progress);

} // namespace spikefeat
