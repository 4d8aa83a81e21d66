#include "spikefeat/pipeline.hpp"

#include "spikefeat/error.hpp"
#include "spikefeat/parallel.hpp"
#include "spikefeat/rng.hpp"
#include "spikefeat/text_io.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#ifndef SPIKEFEAT_VERSION
#define SPIKEFEAT_VERSION "dev"
#endif

namespace spikefeat {

namespace fs = std::filesystem;

namespace {

std::size_t worker_count(const RunConfig& config) {
    return config.threads == 0 ? default_threads() : config.threads;
}

class StageTimer {
public:
    StageTimer(Progress out, std::string name) : out_(out), name_(std::move(name)), start_(Clock::now()) {
        if (out_) *out_ << "[" << name_ << "] start" << std::endl;
    }
    ~StageTimer() {
        if (!out_) return;
        const auto s = std::chrono::duration<double>(Clock::now() - start_).count();
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.1f", s);
        *out_ << "[" << name_ << "] done in " << buf << " s" << std::endl;
    }

private:
    using Clock = std::chrono::steady_clock;
    Progress out_;
    std::string name_;
    Clock::time_point start_;
};

fs::path output_path(const RunConfig& config, const std::string& name) { return fs::path(config.output_dir) / name; }

std::ofstream open_out(const fs::path& path, const char* stage) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(stage, "cannot write " + path.string());
    return out;
}

std::ifstream open_in(const fs::path& path, const char* stage) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(stage, "cannot read " + path.string());
    return in;
}

std::vector<std::string> read_list_file(const fs::path& path) {
    auto in = open_in(path, "split");
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (!t.empty() && t.front() != '#') out.emplace_back(t);
    }
    return out;
}

std::vector<PooledUtterance> pool_subset(const SpikingFrontEnd& frontend, const Dataset& data,
                                         const std::vector<std::size_t>& indices, std::size_t threads) {
    std::vector<PooledUtterance> out(indices.size());
    parallel_for(indices.size(), threads, [&](std::size_t k) {
        out[k] = frontend.pool_utterance(data.utterances[indices[k]], indices[k]);
    });
    return out;
}

void write_feature_file(const fs::path& path, const std::vector<FeatureSequence>& seqs, std::size_t dim) {
    auto out = open_out(path, "extract");
    write_features_csv(out, seqs, dim);
}

std::vector<FeatureSequence> load_feature_file(const fs::path& path) {
    auto in = open_in(path, "train-hmm");
    return read_features_csv(in);
}

HmmTrainOptions hmm_options(const RunConfig& config, std::size_t states, std::size_t mixtures) {
    HmmTrainOptions o;
    o.states = states;
    o.mixtures = mixtures;
    o.max_iterations = config.em_iterations;
    o.tolerance = config.em_tolerance;
    o.variance_floor = config.variance_floor;
    o.seed = config.seed;
    return o;
}

std::string format_fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

} // namespace

std::string_view version() noexcept { return SPIKEFEAT_VERSION; }

Dataset load_dataset(const RunConfig& config) {
    if (config.dataset_dir.empty()) throw Error("ingest", "dataset_dir is not set");
    Dataset data;
    data.manifest = ingest(config.dataset_dir);
    if (config.split == SplitPolicy::kSpeaker) {
        data.split = split_by_speaker(data.manifest, config.test_speakers);
    } else {
        if (config.test_list.empty()) throw Error("split", "split = files needs test_list");
        data.split = split_by_files(data.manifest, read_list_file(config.test_list));
    }
    data.utterances.resize(data.manifest.entries.size());
    parallel_for(data.utterances.size(), worker_count(config), [&](std::size_t i) {
        data.utterances[i] = load_utterance(data.manifest.entries[i]);
    });
    return data;
}

std::vector<PooledUtterance> pool_dataset(const SpikingFrontEnd& frontend, const std::vector<Utterance>& utterances,
                                          std::size_t threads) {
    std::vector<PooledUtterance> out(utterances.size());
    parallel_for(utterances.size(), threads, [&](std::size_t i) { out[i] = frontend.pool_utterance(utterances[i], i); });
    return out;
}

std::vector<FeatureSequence> extract_sequences(const std::vector<PooledUtterance>& pooled,
                                               const std::vector<Utterance>& utterances,
                                               const std::vector<std::size_t>& indices,
                                               const DiscoveryWeights& weights, const RunConfig& config) {
    const NetworkConfig net = network_config(config);
    std::vector<FeatureSequence> out(indices.size());
    parallel_for(indices.size(), worker_count(config), [&](std::size_t k) {
        const std::size_t i = indices[k];
        FeatureSequence seq{utterances[i].id, utterances[i].label, extract(pooled[i], weights, net.discovery)};
        out[k] = with_deltas(seq, config.delta_mode);
    });
    return out;
}

std::vector<FeatureSequence> read_features_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error("features", "empty feature file");
    const auto header = split(line, ',');
    if (header.size() < 3 || header[0] != "utt_id" || header[1] != "label" || header[2] != "frame") {
        throw Error("features", "bad CSV header: " + line);
    }
    const std::size_t dim = header.size() - 3;
    std::vector<FeatureSequence> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != dim + 3) throw Error("features", "line " + std::to_string(lineno) + ": wrong column count");
        const std::string id(fields[0]);
        const int label = static_cast<int>(parse_int(fields[1], "features"));
        const auto frame = static_cast<std::size_t>(parse_int(fields[2], "features"));
        if (out.empty() || out.back().id != id) {
            out.push_back(FeatureSequence{id, label, {}});
        }
        if (frame != out.back().frames.size()) {
            throw Error("features", "line " + std::to_string(lineno) + ": frames of " + id + " out of order");
        }
        FeatureFrame f(dim);
        for (std::size_t d = 0; d < dim; ++d) f[d] = parse_double(fields[d + 3], "features");
        out.back().frames.push_back(std::move(f));
    }
    return out;
}

double EvaluationCell::accuracy() const {
    std::size_t diag = 0;
    std::size_t sum = 0;
    for (std::size_t i = 0; i < kDigitClasses; ++i) {
        for (std::size_t j = 0; j < kDigitClasses; ++j) {
            sum += confusion[i][j];
            if (i == j) diag += confusion[i][j];
        }
    }
    return sum == 0 ? 0.0 : static_cast<double>(diag) / static_cast<double>(sum);
}

EvaluationCell evaluate(const HmmModelSet& models, const std::vector<FeatureSequence>& test, std::size_t threads) {
    std::vector<int> predicted(test.size(), 0);
    parallel_for(test.size(), threads, [&](std::size_t i) { predicted[i] = classify(models, test[i]); });
    EvaluationCell cell;
    if (!models.models.empty() && !models.models.front().empty()) {
        cell.states = models.models.front().states;
        cell.mixtures = models.models.front().mixtures;
    }
    for (std::size_t i = 0; i < test.size(); ++i) {
        const int truth = test[i].label;
        if (truth < 0 || truth >= static_cast<int>(kDigitClasses)) throw Error("evaluate", test[i].id + ": bad label");
        ++cell.confusion[static_cast<std::size_t>(truth)][static_cast<std::size_t>(predicted[i])];
        if (predicted[i] == truth) ++cell.correct;
        ++cell.total;
    }
    return cell;
}

void write_report(std::ostream& out, const RunConfig& config, const PipelineReport& report) {
    out << "# spikefeat evaluation report\n"
        << "train_utterances = " << report.train_utterances << '\n'
        << "test_utterances = " << report.test_utterances << '\n'
        << "hidden = " << config.hidden << '\n'
        << "delta_mode = " << to_string(config.delta_mode) << '\n'
        << "feature_dim = " << report.feature_dim << '\n';
    for (const auto& cell : report.cells) {
        out << "\ncell S=" << cell.states << " G=" << cell.mixtures << " accuracy=" << format_fixed(cell.accuracy(), 6)
            << " correct=" << cell.correct << " total=" << cell.total << '\n';
        out << "confusion (rows true digit, columns predicted)\n";
        for (std::size_t i = 0; i < kDigitClasses; ++i) {
            out << i << ':';
            for (std::size_t j = 0; j < kDigitClasses; ++j) out << ' ' << cell.confusion[i][j];
            out << '\n';
        }
    }
    if (report.cells.size() > 1) {
        out << "\naccuracy grid (%; rows S, columns G)\nS\\G";
        for (std::size_t g : config.hmm_mixtures) out << '\t' << g;
        out << '\n';
        for (std::size_t s : config.hmm_states) {
            out << s;
            for (std::size_t g : config.hmm_mixtures) {
                for (const auto& cell : report.cells) {
                    if (cell.states == s && cell.mixtures == g) out << '\t' << format_fixed(100.0 * cell.accuracy(), 2);
                }
            }
            out << '\n';
        }
    }
}

void write_metadata(std::ostream& out, const RunConfig& config, const PoolSchedule& schedule,
                    const std::string& manifest_digest, const Split& split, const TrainingLog* log) {
    out << "# spikefeat run metadata\n";
    write_config(out, config);
    out << "meta.version = " << version() << '\n' << "meta.generator = " << RngStream::generator_identity() << '\n';
    out << "meta.schedule_strides =";
    for (std::size_t i = 0; i < schedule.windows.size(); ++i) out << (i ? "," : " ") << schedule.windows[i].stride;
    out << '\n'
        << "meta.manifest_hash = " << manifest_digest << '\n'
        << "meta.train_utterances = " << split.train.size() << '\n'
        << "meta.test_utterances = " << split.test.size() << '\n';
    if (log) {
        out << "meta.epoch_spikes =";
        for (std::size_t i = 0; i < log->epoch_spikes.size(); ++i) out << (i ? "," : " ") << log->epoch_spikes[i];
        out << '\n';
    }
}

std::string model_file_name(std::size_t states, std::size_t mixtures) {
    return "models_S" + std::to_string(states) + "_G" + std::to_string(mixtures) + ".txt";
}

void stage_ingest(const RunConfig& config, Progress progress) {
    StageTimer timer(progress, "ingest");
    const Manifest manifest = ingest(config.dataset_dir);
    if (progress) {
        for (const auto& w : manifest.warnings) *progress << "[ingest] warning: " << w << '\n';
    }
    auto out = open_out(output_path(config, "manifest.txt"), "ingest");
    write_manifest(out, manifest);
}

namespace {

struct TrainedSnn {
    Dataset data;
    SpikingFrontEnd frontend;
    std::vector<PooledUtterance> pooled; // parallel to manifest
    DiscoveryWeights weights;
    TrainingLog log;
    std::string digest;
};

TrainedSnn train_snn(const RunConfig& config, Progress progress) {
    TrainedSnn run{load_dataset(config), SpikingFrontEnd(network_config(config)), {}, {}, {}, {}};
    if (progress) {
        for (const auto& w : run.data.manifest.warnings) *progress << "[ingest] warning: " << w << '\n';
        *progress << "[ingest] " << run.data.manifest.entries.size() << " utterances, " << run.data.split.train.size()
                  << " train / " << run.data.split.test.size() << " test" << std::endl;
    }
    run.digest = manifest_hash(run.data.manifest);
    {
        StageTimer timer(progress, "pool");
        run.pooled = pool_dataset(run.frontend, run.data.utterances, worker_count(config));
    }
    {
        StageTimer timer(progress, "train-snn");
        std::vector<PooledUtterance> train;
        train.reserve(run.data.split.train.size());
        for (std::size_t i : run.data.split.train) train.push_back(run.pooled[i]);
        run.weights = train_discovery(train, run.frontend.config(), config.epochs, &run.log, [&](int epoch) {
            if (progress) {
                *progress << "[train-snn] epoch " << (epoch + 1) << '/' << config.epochs << " spikes "
                          << run.log.epoch_spikes.back() << std::endl;
            }
        });
    }
    auto wout = open_out(output_path(config, "weights.txt"), "train-snn");
    write_weights(wout, run.weights);
    auto order = open_out(output_path(config, "training_order.txt"), "train-snn");
    for (const auto& epoch : run.log.epoch_order) {
        for (std::size_t i = 0; i < epoch.size(); ++i) order << (i ? " " : "") << run.data.split.train[epoch[i]];
        order << '\n';
    }
    auto sched = open_out(output_path(config, "schedule.txt"), "train-snn");
    write_schedule(sched, run.frontend.schedule());
    auto meta = open_out(output_path(config, "metadata.txt"), "train-snn");
    write_metadata(meta, config, run.frontend.schedule(), run.digest, run.data.split, &run.log);
    return run;
}

std::size_t write_features(const RunConfig& config, const TrainedSnn& run, Progress progress) {
    StageTimer timer(progress, "extract");
    const std::size_t dim = config.hidden * delta_multiplier(config.delta_mode);
    const auto train = extract_sequences(run.pooled, run.data.utterances, run.data.split.train, run.weights, config);
    write_feature_file(output_path(config, "features_train.csv"), train, dim);
    const auto test = extract_sequences(run.pooled, run.data.utterances, run.data.split.test, run.weights, config);
    write_feature_file(output_path(config, "features_test.csv"), test, dim);
    return dim;
}

} // namespace

DiscoveryWeights stage_train_snn(const RunConfig& config, Progress progress) {
    return train_snn(config, progress).weights;
}

void stage_extract(const RunConfig& config, Progress progress) {
    Dataset data = load_dataset(config);
    auto in = open_in(output_path(config, "weights.txt"), "extract");
    const DiscoveryWeights weights = read_weights(in);
    if (weights.hidden() != config.hidden) {
        throw Error("extract", "weights have H=" + std::to_string(weights.hidden()) + " but config says hidden=" +
                                   std::to_string(config.hidden));
    }
    const SpikingFrontEnd frontend(network_config(config));
    const std::size_t threads = worker_count(config);
    std::vector<PooledUtterance> pooled(data.utterances.size());
    std::vector<std::size_t> all;
    all.insert(all.end(), data.split.train.begin(), data.split.train.end());
    all.insert(all.end(), data.split.test.begin(), data.split.test.end());
    const auto subset = pool_subset(frontend, data, all, threads);
    for (std::size_t k = 0; k < all.size(); ++k) pooled[all[k]] = subset[k];

    StageTimer timer(progress, "extract");
    const std::size_t dim = config.hidden * delta_multiplier(config.delta_mode);
    write_feature_file(output_path(config, "features_train.csv"),
                       extract_sequences(pooled, data.utterances, data.split.train, weights, config), dim);
    write_feature_file(output_path(config, "features_test.csv"),
                       extract_sequences(pooled, data.utterances, data.split.test, weights, config), dim);
}

void stage_train_hmm(const RunConfig& config, Progress progress) {
    const auto train = load_feature_file(output_path(config, "features_train.csv"));
    const std::size_t threads = worker_count(config);
    for (std::size_t s : config.hmm_states) {
        for (std::size_t g : config.hmm_mixtures) {
            StageTimer timer(progress, "train-hmm S=" + std::to_string(s) + " G=" + std::to_string(g));
            std::vector<HmmTrainTrace> traces;
            const HmmModelSet models = train_models(train, hmm_options(config, s, g), &traces, threads);
            if (progress) {
                for (const auto& t : traces) {
                    for (const auto& w : t.warnings) *progress << "[train-hmm] warning: " << w << '\n';
                }
            }
            auto out = open_out(output_path(config, model_file_name(s, g)), "train-hmm");
            write_model_set(out, models);
        }
    }
}

PipelineReport stage_evaluate(const RunConfig& config, Progress progress) {
    StageTimer timer(progress, "evaluate");
    const auto train = load_feature_file(output_path(config, "features_train.csv"));
    const auto test = load_feature_file(output_path(config, "features_test.csv"));
    PipelineReport report;
    report.train_utterances = train.size();
    report.test_utterances = test.size();
    report.feature_dim = test.empty() ? 0 : test.front().dim();
    for (std::size_t s : config.hmm_states) {
        for (std::size_t g : config.hmm_mixtures) {
            auto in = open_in(output_path(config, model_file_name(s, g)), "evaluate");
            const HmmModelSet models = read_model_set(in);
            report.cells.push_back(evaluate(models, test, worker_count(config)));
        }
    }
    auto out = open_out(output_path(config, "report.txt"), "evaluate");
    write_report(out, config, report);
    return report;
}

PipelineReport run_pipeline(const RunConfig& config, Progress progress) {
    TrainedSnn run = train_snn(config, progress);
    {
        auto out = open_out(output_path(config, "manifest.txt"), "ingest");
        write_manifest(out, run.data.manifest);
    }
    write_features(config, run, progress);
    // Release the spike caches before HMM training.
    run.pooled.clear();
    run.pooled.shrink_to_fit();
    stage_train_hmm(config, progress);
    return stage_evaluate(config, progress);
}

} // namespace spikefeat
