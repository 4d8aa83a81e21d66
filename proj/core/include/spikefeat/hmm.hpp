#pragma once

#include "spikefeat/features.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace spikefeat {

/// Diagonal-covariance Gaussian mixture of one HMM state.
struct StateMixture {
    std::vector<double> weights;                // G
    std::vector<std::vector<double>> means;     // G x dim
    std::vector<std::vector<double>> variances; // G x dim

    bool operator==(const StateMixture&) const = default;
};

/// Left-to-right GMM-HMM entered in state 0. Each state loops on itself or
/// advances one state; the final state only loops.
struct HmmModel {
    std::size_t states = 0;
    std::size_t mixtures = 0;
    std::size_t dim = 0;
    std::vector<double> transitions; // states x states, row-major
    std::vector<StateMixture> emissions;

    double transition(std::size_t from, std::size_t to) const { return transitions[from * states + to]; }
    bool empty() const noexcept { return states == 0; }

    bool operator==(const HmmModel&) const = default;
};

inline constexpr std::size_t kDigitClasses = 10;

/// One model per digit plus the feature standardization they share.
struct HmmModelSet {
    Standardizer standardizer;
    std::vector<HmmModel> models; // indexed by digit; empty() = no model

    bool operator==(const HmmModelSet&) const = default;
};

struct HmmTrainOptions {
    std::size_t states = 10;
    std::size_t mixtures = 4;
    int max_iterations = 20;
    /// Stop once (L_new - L_old) < tolerance * |L_old|.
    double tolerance = 1e-4;
    double variance_floor = 1e-4;
    int kmeans_iterations = 10;
    std::uint64_t seed = 0;
};

struct HmmTrainTrace {
    /// Total training log-likelihood before the first and after every
    /// re-estimation.
    std::vector<double> log_likelihood;
    std::vector<std::string> warnings;
};

/// log sum_g w_g N(x; mu_g, diag(var_g)) for every state.
std::vector<double> state_log_densities(const HmmModel& model, const FeatureFrame& x);

/// log P(frames | model) by the scaled forward recursion.
double log_likelihood(const HmmModel& model, const std::vector<FeatureFrame>& frames);

struct ForwardBackward {
    double log_likelihood = 0.0;
    /// frames x states state posteriors.
    std::vector<std::vector<double>> gamma;
};

ForwardBackward forward_backward(const HmmModel& model, const std::vector<FeatureFrame>& frames);

struct ViterbiPath {
    double log_probability = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> states;
};

ViterbiPath viterbi(const HmmModel& model, const std::vector<FeatureFrame>& frames);

/// Fits one model by uniform segmentation, per-state k-means and
/// Baum-Welch. Sequences shorter than options.states are skipped with a
/// warning. Frames are used as given (no standardization here).
HmmModel train_model(std::span<const FeatureSequence> sequences, const HmmTrainOptions& options,
                     std::uint64_t stream_id, HmmTrainTrace* trace = nullptr);

/// Fits the standardizer on all training frames, then one model per digit.
/// Throws Error("hmm") when a digit has no usable sequence.
HmmModelSet train_models(std::span<const FeatureSequence> train, const HmmTrainOptions& options,
                         std::vector<HmmTrainTrace>* traces = nullptr, std::size_t threads = 1);

/// Per-digit log-likelihoods of an already standardized sequence (-inf for
/// missing models).
std::vector<double> class_scores(const HmmModelSet& models, const std::vector<FeatureFrame>& standardized);

/// Argmax of class_scores after standardization; ties go to the lower digit.
int classify(const HmmModelSet& models, const FeatureSequence& seq);

/// `ghmm v1 S=<S> G=<G> dim=<d>` followed by the transition matrix and each
/// state's mixture, all values shortest-round-trip.
void write_model(std::ostream& out, const HmmModel& model);
HmmModel read_model(std::istream& in);

/// `ghmmset v1 classes=<n> dim=<d>`, the standardizer, then one model per
/// class (`class <k>` or `class <k> empty`).
void write_model_set(std::ostream& out, const HmmModelSet& set);
HmmModelSet read_model_set(std::istream& in);

} // namespace spikefeat
