#include "spikefeat/hmm.hpp"

#include "spikefeat/error.hpp"
#include "spikefeat/parallel.hpp"
#include "spikefeat/rng.hpp"
#include "spikefeat/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>

namespace spikefeat {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kEmptyComponentMass = 1e-8;

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

// Per-component constants: log w_g - 0.5 * sum_d log(2 pi var_d) and 1/var.
struct CompiledEmissions {
    std::size_t states = 0;
    std::size_t mixtures = 0;
    std::size_t dim = 0;
    std::vector<double> bias;    // states * mixtures
    std::vector<double> inv_var; // states * mixtures * dim
    const HmmModel* model = nullptr;

    explicit CompiledEmissions(const HmmModel& m)
        : states(m.states), mixtures(m.mixtures), dim(m.dim), bias(m.states * m.mixtures),
          inv_var(m.states * m.mixtures * m.dim), model(&m) {
        const double log2pi = std::log(2.0 * std::numbers::pi);
        for (std::size_t j = 0; j < states; ++j) {
            const auto& mix = m.emissions[j];
            for (std::size_t g = 0; g < mixtures; ++g) {
                double c = safe_log(mix.weights[g]);
                for (std::size_t d = 0; d < dim; ++d) {
                    c -= 0.5 * (log2pi + std::log(mix.variances[g][d]));
                    inv_var[(j * mixtures + g) * dim + d] = 1.0 / mix.variances[g][d];
                }
                bias[j * mixtures + g] = c;
            }
        }
    }

    // Fills comp (states * mixtures) with component log densities and
    // returns per-state mixture log densities in state_out.
    void evaluate(const FeatureFrame& x, std::vector<double>& comp, std::vector<double>& state_out) const {
        comp.resize(states * mixtures);
        state_out.resize(states);
        for (std::size_t j = 0; j < states; ++j) {
            const auto& mix = model->emissions[j];
            double best = kNegInf;
            for (std::size_t g = 0; g < mixtures; ++g) {
                const std::size_t idx = j * mixtures + g;
                double q = 0.0;
                const double* iv = &inv_var[idx * dim];
                const auto& mu = mix.means[g];
                for (std::size_t d = 0; d < dim; ++d) {
                    const double e = x[d] - mu[d];
                    q += e * e * iv[d];
                }
                comp[idx] = bias[idx] - 0.5 * q;
                best = std::max(best, comp[idx]);
            }
            double s = 0.0;
            if (best != kNegInf) {
                for (std::size_t g = 0; g < mixtures; ++g) s += std::exp(comp[j * mixtures + g] - best);
            }
            state_out[j] = best == kNegInf ? kNegInf : best + std::log(s);
        }
    }
};

void check_dims(const HmmModel& model, const std::vector<FeatureFrame>& frames) {
    if (model.empty()) throw Error("hmm", "model has no states");
    for (const auto& f : frames) {
        if (f.size() != model.dim) {
            throw Error("hmm", "frame dimension " + std::to_string(f.size()) + " does not match model dimension " +
                                   std::to_string(model.dim));
        }
    }
}

std::vector<double> log_transitions(const HmmModel& model) {
    std::vector<double> out(model.transitions.size());
    std::transform(model.transitions.begin(), model.transitions.end(), out.begin(), safe_log);
    return out;
}

struct SufficientStats {
    std::vector<double> transition; // states * states
    std::vector<double> occupancy;  // states * mixtures
    std::vector<double> sum;        // states * mixtures * dim
    std::vector<double> sum_sq;     // states * mixtures * dim

    SufficientStats(std::size_t s, std::size_t g, std::size_t d)
        : transition(s * s, 0.0), occupancy(s * g, 0.0), sum(s * g * d, 0.0), sum_sq(s * g * d, 0.0) {}
};

// Log-domain forward-backward on one sequence; accumulates EM statistics
// when stats is non-null and returns log P(frames | model).
double accumulate(const HmmModel& model, const CompiledEmissions& em, const std::vector<double>& log_a,
                  const std::vector<FeatureFrame>& frames, SufficientStats* stats,
                  std::vector<std::vector<double>>* gamma_out) {
    const std::size_t S = model.states;
    const std::size_t G = model.mixtures;
    const std::size_t D = model.dim;
    const std::size_t T = frames.size();

    std::vector<double> comp(T * S * G);
    std::vector<double> log_b(T * S);
    std::vector<double> comp_t;
    std::vector<double> state_t;
    for (std::size_t t = 0; t < T; ++t) {
        em.evaluate(frames[t], comp_t, state_t);
        std::copy(comp_t.begin(), comp_t.end(), comp.begin() + static_cast<std::ptrdiff_t>(t * S * G));
        std::copy(state_t.begin(), state_t.end(), log_b.begin() + static_cast<std::ptrdiff_t>(t * S));
    }

    std::vector<double> log_alpha(T * S, kNegInf);
    log_alpha[0] = log_b[0];
    for (std::size_t t = 1; t < T; ++t) {
        for (std::size_t j = 0; j < S; ++j) {
            double acc = kNegInf;
            for (std::size_t i = 0; i < S; ++i) {
                const double la = log_a[i * S + j];
                if (la == kNegInf) continue;
                acc = log_add(acc, log_alpha[(t - 1) * S + i] + la);
            }
            log_alpha[t * S + j] = acc + log_b[t * S + j];
        }
    }
    double total = kNegInf;
    for (std::size_t j = 0; j < S; ++j) total = log_add(total, log_alpha[(T - 1) * S + j]);
    if (!stats && !gamma_out) return total;
    if (total == kNegInf) return total;

    std::vector<double> log_beta(T * S, kNegInf);
    for (std::size_t j = 0; j < S; ++j) log_beta[(T - 1) * S + j] = 0.0;
    for (std::size_t t = T - 1; t-- > 0;) {
        for (std::size_t i = 0; i < S; ++i) {
            double acc = kNegInf;
            for (std::size_t j = 0; j < S; ++j) {
                const double la = log_a[i * S + j];
                if (la == kNegInf) continue;
                acc = log_add(acc, la + log_b[(t + 1) * S + j] + log_beta[(t + 1) * S + j]);
            }
            log_beta[t * S + i] = acc;
        }
    }

    if (gamma_out) gamma_out->assign(T, std::vector<double>(S, 0.0));
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t j = 0; j < S; ++j) {
            const double lg = log_alpha[t * S + j] + log_beta[t * S + j] - total;
            const double g = lg == kNegInf ? 0.0 : std::exp(lg);
            if (gamma_out) (*gamma_out)[t][j] = g;
            if (!stats || g == 0.0) continue;
            const double lb = log_b[t * S + j];
            for (std::size_t m = 0; m < G; ++m) {
                const double r = g * std::exp(comp[(t * S + j) * G + m] - lb);
                if (r == 0.0) continue;
                const std::size_t idx = j * G + m;
                stats->occupancy[idx] += r;
                double* s1 = &stats->sum[idx * D];
                double* s2 = &stats->sum_sq[idx * D];
                const auto& x = frames[t];
                for (std::size_t d = 0; d < D; ++d) {
                    s1[d] += r * x[d];
                    s2[d] += r * x[d] * x[d];
                }
            }
        }
        if (stats && t + 1 < T) {
            for (std::size_t i = 0; i < S; ++i) {
                const double la_i = log_alpha[t * S + i];
                if (la_i == kNegInf) continue;
                for (std::size_t j = 0; j < S; ++j) {
                    const double la = log_a[i * S + j];
                    if (la == kNegInf) continue;
                    const double lx = la_i + la + log_b[(t + 1) * S + j] + log_beta[(t + 1) * S + j] - total;
                    stats->transition[i * S + j] += std::exp(lx);
                }
            }
        }
    }
    return total;
}

void reestimate(HmmModel& model, const SufficientStats& stats, double floor) {
    const std::size_t S = model.states;
    const std::size_t G = model.mixtures;
    const std::size_t D = model.dim;
    for (std::size_t i = 0; i < S; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < S; ++j) row += stats.transition[i * S + j];
        if (row > 0.0) {
            for (std::size_t j = 0; j < S; ++j) model.transitions[i * S + j] = stats.transition[i * S + j] / row;
        }
    }
    for (std::size_t j = 0; j < S; ++j) {
        auto& mix = model.emissions[j];
        double state_occ = 0.0;
        for (std::size_t m = 0; m < G; ++m) state_occ += stats.occupancy[j * G + m];
        if (state_occ <= 0.0) continue;

        // State-level moments for reseeding starved components.
        std::vector<double> state_mean(D, 0.0);
        std::vector<double> state_var(D, 0.0);
        for (std::size_t m = 0; m < G; ++m) {
            for (std::size_t d = 0; d < D; ++d) {
                state_mean[d] += stats.sum[(j * G + m) * D + d];
                state_var[d] += stats.sum_sq[(j * G + m) * D + d];
            }
        }
        for (std::size_t d = 0; d < D; ++d) {
            state_mean[d] /= state_occ;
            state_var[d] = std::max(state_var[d] / state_occ - state_mean[d] * state_mean[d], floor);
        }

        bool reseeded = false;
        for (std::size_t m = 0; m < G; ++m) {
            const std::size_t idx = j * G + m;
            const double occ = stats.occupancy[idx];
            if (occ < kEmptyComponentMass) {
                const auto widest = static_cast<std::size_t>(
                    std::max_element(state_var.begin(), state_var.end()) - state_var.begin());
                mix.means[m] = state_mean;
                mix.means[m][widest] += (m % 2 == 0 ? 1.0 : -1.0) * 0.5 * std::sqrt(state_var[widest]);
                mix.variances[m] = state_var;
                mix.weights[m] = kEmptyComponentMass;
                reseeded = true;
                continue;
            }
            mix.weights[m] = occ / state_occ;
            for (std::size_t d = 0; d < D; ++d) {
                const double mu = stats.sum[idx * D + d] / occ;
                const double var = stats.sum_sq[idx * D + d] / occ - mu * mu;
                mix.means[m][d] = mu;
                mix.variances[m][d] = std::max(var, floor);
            }
        }
        if (reseeded) {
            const double total = std::accumulate(mix.weights.begin(), mix.weights.end(), 0.0);
            for (double& w : mix.weights) w /= total;
        }
    }
}

double squared_distance(const FeatureFrame& a, const FeatureFrame& b) {
    double s = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double e = a[d] - b[d];
        s += e * e;
    }
    return s;
}

StateMixture kmeans_mixture(const std::vector<const FeatureFrame*>& pool, std::size_t G, std::size_t D,
                            int iterations, double floor, RngStream& rng) {
    const std::size_t n = pool.size();
    // Pool moments; starved clusters fall back to them.
    std::vector<double> mean(D, 0.0);
    std::vector<double> var(D, 0.0);
    for (const auto* x : pool) {
        for (std::size_t d = 0; d < D; ++d) mean[d] += (*x)[d];
    }
    for (double& m : mean) m /= static_cast<double>(n);
    for (const auto* x : pool) {
        for (std::size_t d = 0; d < D; ++d) {
            const double e = (*x)[d] - mean[d];
            var[d] += e * e;
        }
    }
    for (double& v : var) v = std::max(v / static_cast<double>(n), floor);

    // Distinct random frames as initial centres (partial Fisher-Yates);
    // when the pool is smaller than G the picks wrap around.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<FeatureFrame> centers(G);
    for (std::size_t g = 0; g < G; ++g) {
        const std::size_t k = g % n;
        if (k == g) {
            const std::size_t pick = k + static_cast<std::size_t>(rng.below(n - k));
            std::swap(order[k], order[pick]);
        }
        centers[g] = *pool[order[k]];
    }

    std::vector<std::size_t> assign(n, 0);
    for (int it = 0; it < iterations; ++it) {
        bool changed = it == 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d = squared_distance(*pool[i], centers[0]);
            for (std::size_t g = 1; g < G; ++g) {
                const double dist = squared_distance(*pool[i], centers[g]);
                if (dist < best_d) {
                    best_d = dist;
                    best = g;
                }
            }
            if (assign[i] != best) changed = true;
            assign[i] = best;
        }
        std::vector<std::size_t> counts(G, 0);
        std::vector<FeatureFrame> sums(G, FeatureFrame(D, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            ++counts[assign[i]];
            for (std::size_t d = 0; d < D; ++d) sums[assign[i]][d] += (*pool[i])[d];
        }
        for (std::size_t g = 0; g < G; ++g) {
            if (counts[g] == 0) continue;
            for (std::size_t d = 0; d < D; ++d) centers[g][d] = sums[g][d] / static_cast<double>(counts[g]);
        }
        if (!changed) break;
    }

    StateMixture mix;
    mix.weights.assign(G, 0.0);
    mix.means = centers;
    mix.variances.assign(G, var);
    std::vector<std::size_t> counts(G, 0);
    std::vector<FeatureFrame> sq(G, FeatureFrame(D, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t g = assign[i];
        ++counts[g];
        for (std::size_t d = 0; d < D; ++d) {
            const double e = (*pool[i])[d] - centers[g][d];
            sq[g][d] += e * e;
        }
    }
    double total = 0.0;
    for (std::size_t g = 0; g < G; ++g) {
        mix.weights[g] = std::max(static_cast<double>(counts[g]), 1e-3);
        total += mix.weights[g];
        if (counts[g] >= 2) {
            for (std::size_t d = 0; d < D; ++d) {
                mix.variances[g][d] = std::max(sq[g][d] / static_cast<double>(counts[g]), floor);
            }
        }
    }
    for (double& w : mix.weights) w /= total;
    return mix;
}

} // namespace

std::vector<double> state_log_densities(const HmmModel& model, const FeatureFrame& x) {
    check_dims(model, {x});
    const CompiledEmissions em(model);
    std::vector<double> comp;
    std::vector<double> out;
    em.evaluate(x, comp, out);
    return out;
}

double log_likelihood(const HmmModel& model, const std::vector<FeatureFrame>& frames) {
    check_dims(model, frames);
    if (frames.empty()) return 0.0;
    const std::size_t S = model.states;
    const CompiledEmissions em(model);
    std::vector<double> comp;
    std::vector<double> log_b;
    std::vector<double> pred(S, 0.0);
    std::vector<double> alpha(S, 0.0);
    pred[0] = 1.0;

    double total = 0.0;
    for (std::size_t t = 0; t < frames.size(); ++t) {
        em.evaluate(frames[t], comp, log_b);
        if (t > 0) {
            std::fill(pred.begin(), pred.end(), 0.0);
            for (std::size_t i = 0; i < S; ++i) {
                if (alpha[i] == 0.0) continue;
                for (std::size_t j = 0; j < S; ++j) pred[j] += alpha[i] * model.transitions[i * S + j];
            }
        }
        // Shift by the largest reachable term so the best state scales to 1.
        double shift = kNegInf;
        for (std::size_t j = 0; j < S; ++j) {
            if (pred[j] > 0.0) shift = std::max(shift, std::log(pred[j]) + log_b[j]);
        }
        if (shift == kNegInf) return kNegInf;
        double scale = 0.0;
        for (std::size_t j = 0; j < S; ++j) {
            alpha[j] = pred[j] > 0.0 ? std::exp(std::log(pred[j]) + log_b[j] - shift) : 0.0;
            scale += alpha[j];
        }
        for (double& a : alpha) a /= scale;
        total += shift + std::log(scale);
    }
    return total;
}

ForwardBackward forward_backward(const HmmModel& model, const std::vector<FeatureFrame>& frames) {
    check_dims(model, frames);
    ForwardBackward fb;
    if (frames.empty()) return fb;
    const CompiledEmissions em(model);
    fb.log_likelihood = accumulate(model, em, log_transitions(model), frames, nullptr, &fb.gamma);
    return fb;
}

ViterbiPath viterbi(const HmmModel& model, const std::vector<FeatureFrame>& frames) {
    check_dims(model, frames);
    ViterbiPath path;
    if (frames.empty()) return path;
    const std::size_t S = model.states;
    const std::size_t T = frames.size();
    const CompiledEmissions em(model);
    const auto log_a = log_transitions(model);
    std::vector<double> comp;
    std::vector<double> log_b;
    std::vector<double> delta(S, kNegInf);
    std::vector<double> next(S);
    std::vector<std::size_t> back(T * S, 0);

    em.evaluate(frames[0], comp, log_b);
    delta[0] = log_b[0];
    for (std::size_t t = 1; t < T; ++t) {
        em.evaluate(frames[t], comp, log_b);
        for (std::size_t j = 0; j < S; ++j) {
            double best = kNegInf;
            std::size_t arg = 0;
            for (std::size_t i = 0; i < S; ++i) {
                const double v = delta[i] + log_a[i * S + j];
                if (v > best) {
                    best = v;
                    arg = i;
                }
            }
            next[j] = best + log_b[j];
            back[t * S + j] = arg;
        }
        delta.swap(next);
    }
    const auto last = static_cast<std::size_t>(std::max_element(delta.begin(), delta.end()) - delta.begin());
    path.log_probability = delta[last];
    path.states.assign(T, 0);
    path.states[T - 1] = last;
    for (std::size_t t = T - 1; t > 0; --t) path.states[t - 1] = back[t * S + path.states[t]];
    return path;
}

HmmModel train_model(std::span<const FeatureSequence> sequences, const HmmTrainOptions& options,
                     std::uint64_t stream_id, HmmTrainTrace* trace) {
    const std::size_t S = options.states;
    const std::size_t G = options.mixtures;
    if (S == 0 || G == 0) throw Error("hmm", "states and mixtures must be positive");

    std::vector<const FeatureSequence*> usable;
    for (const auto& s : sequences) {
        if (s.frames.size() < S) {
            if (trace) {
                trace->warnings.push_back(s.id + ": " + std::to_string(s.frames.size()) + " frames < " +
                                          std::to_string(S) + " states, skipped");
            }
            continue;
        }
        usable.push_back(&s);
    }
    if (usable.empty()) throw Error("hmm", "no training sequence with at least " + std::to_string(S) + " frames");
    const std::size_t D = usable.front()->dim();
    for (const auto* s : usable) {
        for (const auto& f : s->frames) {
            if (f.size() != D) throw Error("hmm", s->id + ": inconsistent feature dimension");
        }
    }

    HmmModel model;
    model.states = S;
    model.mixtures = G;
    model.dim = D;
    model.transitions.assign(S * S, 0.0);

    // Uniform segmentation: frame t of a T-frame sequence goes to state
    // floor(t * S / T).
    std::vector<std::vector<const FeatureFrame*>> pools(S);
    for (const auto* s : usable) {
        const std::size_t T = s->frames.size();
        for (std::size_t t = 0; t < T; ++t) pools[t * S / T].push_back(&s->frames[t]);
    }
    RngStream rng(options.seed, stream_id);
    for (std::size_t j = 0; j < S; ++j) {
        const double dwell = static_cast<double>(pools[j].size()) / static_cast<double>(usable.size());
        const double stay = j + 1 == S ? 1.0 : std::clamp(1.0 - 1.0 / dwell, 0.5, 0.95);
        model.transitions[j * S + j] = stay;
        if (j + 1 < S) model.transitions[j * S + j + 1] = 1.0 - stay;
        model.emissions.push_back(kmeans_mixture(pools[j], G, D, options.kmeans_iterations, options.variance_floor, rng));
    }

    auto e_step = [&](SufficientStats& stats) {
        const CompiledEmissions em(model);
        const auto log_a = log_transitions(model);
        double total = 0.0;
        for (const auto* s : usable) total += accumulate(model, em, log_a, s->frames, &stats, nullptr);
        return total;
    };

    SufficientStats stats(S, G, D);
    double previous = e_step(stats);
    if (trace) trace->log_likelihood.push_back(previous);
    for (int it = 0; it < options.max_iterations; ++it) {
        reestimate(model, stats, options.variance_floor);
        stats = SufficientStats(S, G, D);
        const double current = e_step(stats);
        if (trace) trace->log_likelihood.push_back(current);
        const bool converged = current - previous < options.tolerance * std::abs(previous);
        previous = current;
        if (converged) break;
    }
    return model;
}

HmmModelSet train_models(std::span<const FeatureSequence> train, const HmmTrainOptions& options,
                         std::vector<HmmTrainTrace>* traces, std::size_t threads) {
    HmmModelSet set;
    set.standardizer = Standardizer::fit(train);
    std::vector<std::vector<FeatureSequence>> by_class(kDigitClasses);
    for (const auto& s : train) {
        if (s.label < 0 || s.label >= static_cast<int>(kDigitClasses)) {
            throw Error("hmm", s.id + ": label " + std::to_string(s.label) + " outside 0..9");
        }
        by_class[static_cast<std::size_t>(s.label)].push_back(set.standardizer.apply(s));
    }
    for (std::size_t c = 0; c < kDigitClasses; ++c) {
        if (by_class[c].empty()) throw Error("hmm", "digit " + std::to_string(c) + " has no training sequences");
    }
    set.models.resize(kDigitClasses);
    std::vector<HmmTrainTrace> local(kDigitClasses);
    parallel_for(kDigitClasses, threads, [&](std::size_t c) {
        set.models[c] = train_model(by_class[c], options, streams::kHmmInit + c, &local[c]);
    });
    if (traces) *traces = std::move(local);
    return set;
}

std::vector<double> class_scores(const HmmModelSet& models, const std::vector<FeatureFrame>& standardized) {
    std::vector<double> scores(models.models.size(), kNegInf);
    for (std::size_t c = 0; c < models.models.size(); ++c) {
        if (!models.models[c].empty()) scores[c] = log_likelihood(models.models[c], standardized);
    }
    return scores;
}

int classify(const HmmModelSet& models, const FeatureSequence& seq) {
    const auto scores = class_scores(models, models.standardizer.apply(seq).frames);
    int best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c) {
        if (scores[c] > scores[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
    }
    return best;
}

namespace {

void write_row(std::ostream& out, const char* tag, std::span<const double> values) {
    out << tag;
    for (double v : values) out << ' ' << format_double(v);
    out << '\n';
}

std::vector<double> read_row(std::istream& in, std::string_view tag, std::size_t n) {
    std::string line;
    if (!std::getline(in, line)) throw Error("hmm", "unexpected end of model file, wanted '" + std::string(tag) + "'");
    auto fields = tokens(line);
    if (fields.empty() || fields.front() != tag || fields.size() != n + 1) {
        throw Error("hmm", "malformed '" + std::string(tag) + "' line: " + line);
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = parse_double(fields[i + 1], "hmm");
    return out;
}

} // namespace

void write_model(std::ostream& out, const HmmModel& model) {
    out << "ghmm v1 S=" << model.states << " G=" << model.mixtures << " dim=" << model.dim << '\n';
    for (std::size_t i = 0; i < model.states; ++i) {
        write_row(out, "trans", std::span(model.transitions).subspan(i * model.states, model.states));
    }
    for (std::size_t j = 0; j < model.states; ++j) {
        const auto& mix = model.emissions[j];
        write_row(out, "weights", mix.weights);
        for (std::size_t g = 0; g < model.mixtures; ++g) {
            write_row(out, "mean", mix.means[g]);
            write_row(out, "var", mix.variances[g]);
        }
    }
}

HmmModel read_model(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error("hmm", "empty model file");
    HmmModel model;
    if (std::sscanf(line.c_str(), "ghmm v1 S=%zu G=%zu dim=%zu", &model.states, &model.mixtures, &model.dim) != 3) {
        throw Error("hmm", "bad model header: " + line);
    }
    for (std::size_t i = 0; i < model.states; ++i) {
        const auto row = read_row(in, "trans", model.states);
        model.transitions.insert(model.transitions.end(), row.begin(), row.end());
    }
    for (std::size_t j = 0; j < model.states; ++j) {
        StateMixture mix;
        mix.weights = read_row(in, "weights", model.mixtures);
        for (std::size_t g = 0; g < model.mixtures; ++g) {
            mix.means.push_back(read_row(in, "mean", model.dim));
            mix.variances.push_back(read_row(in, "var", model.dim));
        }
        model.emissions.push_back(std::move(mix));
    }
    return model;
}

void write_model_set(std::ostream& out, const HmmModelSet& set) {
    out << "ghmmset v1 classes=" << set.models.size() << " dim=" << set.standardizer.dim() << '\n';
    write_row(out, "std_mean", set.standardizer.mean);
    write_row(out, "std_scale", set.standardizer.scale);
    for (std::size_t c = 0; c < set.models.size(); ++c) {
        if (set.models[c].empty()) {
            out << "class " << c << " empty\n";
        } else {
            out << "class " << c << '\n';
            write_model(out, set.models[c]);
        }
    }
}

HmmModelSet read_model_set(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error("hmm", "empty model set file");
    std::size_t classes = 0;
    std::size_t dim = 0;
    if (std::sscanf(line.c_str(), "ghmmset v1 classes=%zu dim=%zu", &classes, &dim) != 2) {
        throw Error("hmm", "bad model set header: " + line);
    }
    HmmModelSet set;
    set.standardizer.mean = read_row(in, "std_mean", dim);
    set.standardizer.scale = read_row(in, "std_scale", dim);
    set.models.resize(classes);
    for (std::size_t c = 0; c < classes; ++c) {
        if (!std::getline(in, line)) throw Error("hmm", "missing class " + std::to_string(c));
        const auto fields = tokens(line);
        if (fields.size() < 2 || fields[0] != "class" || parse_int(fields[1], "hmm") != static_cast<long long>(c)) {
            throw Error("hmm", "expected 'class " + std::to_string(c) + "', got: " + line);
        }
        if (fields.size() == 3 && fields[2] == "empty") continue;
        set.models[c] = read_model(in);
        if (set.models[c].dim != dim) throw Error("hmm", "class " + std::to_string(c) + " dimension mismatch");
    }
    return set;
}

} // namespace spikefeat
