#include "spikefeat/config.hpp"

#include "spikefeat/error.hpp"
#include "spikefeat/text_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace spikefeat {

namespace {

std::vector<std::size_t> parse_size_list(std::string_view value) {
    std::vector<std::size_t> out;
    for (auto item : split(value, ',')) {
        const long long v = parse_int(item, "config");
        if (v <= 0) throw Error("config", "list entries must be positive: " + std::string(value));
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

std::vector<std::string> parse_string_list(std::string_view value) {
    std::vector<std::string> out;
    if (trim(value).empty()) return out;
    for (auto item : split(value, ',')) out.emplace_back(trim(item));
    return out;
}

template <typename T>
std::string join(const std::vector<T>& items) {
    std::ostringstream out;
    for (std::size_t i = 0; i < items.size(); ++i) out << (i ? "," : "") << items[i];
    return out.str();
}

double positive(std::string_view key, double v) {
    if (!(v > 0.0)) throw Error("config", std::string(key) + " must be positive");
    return v;
}

} // namespace

void set_option(RunConfig& c, std::string_view key, std::string_view value) {
    value = trim(value);
    if (key.starts_with("meta.")) return;
    if (key == "seed") {
        c.seed = static_cast<std::uint64_t>(parse_int(value, "config"));
    } else if (key == "hidden") {
        c.hidden = static_cast<std::size_t>(positive(key, static_cast<double>(parse_int(value, "config"))));
    } else if (key == "theta_conv") {
        c.theta_conv = positive(key, parse_double(value, "config"));
    } else if (key == "theta_h") {
        c.theta_h = positive(key, parse_double(value, "config"));
    } else if (key == "a_plus") {
        c.a_plus = positive(key, parse_double(value, "config"));
    } else if (key == "a_minus") {
        c.a_minus = positive(key, parse_double(value, "config"));
    } else if (key == "epsilon_ms") {
        c.epsilon_ms = static_cast<int>(parse_int(value, "config"));
        if (c.epsilon_ms < 0) throw Error("config", "epsilon_ms must be >= 0");
    } else if (key == "epochs") {
        c.epochs = static_cast<int>(parse_int(value, "config"));
        if (c.epochs < 0) throw Error("config", "epochs must be >= 0");
    } else if (key == "steps") {
        const long long v = parse_int(value, "config");
        if (v < 1 || v > 64) throw Error("config", "steps must be in 1..64");
        c.steps = static_cast<std::size_t>(v);
    } else if (key == "delta_mode") {
        c.delta_mode = parse_delta_mode(value);
    } else if (key == "hmm_states") {
        c.hmm_states = parse_size_list(value);
    } else if (key == "hmm_mixtures") {
        c.hmm_mixtures = parse_size_list(value);
    } else if (key == "em_iterations") {
        c.em_iterations = static_cast<int>(parse_int(value, "config"));
    } else if (key == "em_tolerance") {
        c.em_tolerance = parse_double(value, "config");
    } else if (key == "variance_floor") {
        c.variance_floor = positive(key, parse_double(value, "config"));
    } else if (key == "window") {
        if (value == "hamming") {
            c.window = WindowKind::kHamming;
        } else if (value == "rectangular") {
            c.window = WindowKind::kRectangular;
        } else {
            throw Error("config", "window must be hamming or rectangular");
        }
    } else if (key == "synapse") {
        if (value == "impulse") {
            c.synapse = SynapticInput::kImpulse;
        } else if (value == "pulse") {
            c.synapse = SynapticInput::kPulse;
        } else {
            throw Error("config", "synapse must be impulse or pulse");
        }
    } else if (key == "dataset_dir") {
        c.dataset_dir = std::string(value);
    } else if (key == "output_dir") {
        c.output_dir = std::string(value);
    } else if (key == "split") {
        if (value == "speaker") {
            c.split = SplitPolicy::kSpeaker;
        } else if (value == "files") {
            c.split = SplitPolicy::kFiles;
        } else {
            throw Error("config", "split must be speaker or files");
        }
    } else if (key == "test_speakers") {
        c.test_speakers = parse_string_list(value);
    } else if (key == "test_list") {
        c.test_list = std::string(value);
    } else if (key == "threads") {
        c.threads = static_cast<std::size_t>(parse_int(value, "config"));
    } else {
        throw Error("config", "unknown key '" + std::string(key) + "'");
    }
}

RunConfig parse_config(std::istream& in) {
    RunConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw Error("config", "line " + std::to_string(lineno) + ": expected key = value");
        }
        try {
            set_option(c, trim(view.substr(0, eq)), view.substr(eq + 1));
        } catch (const Error& e) {
            throw Error("config", "line " + std::to_string(lineno) + ": " + e.message());
        }
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("config", "cannot open " + path.string());
    return parse_config(in);
}

void write_config(std::ostream& out, const RunConfig& c) {
    out << "seed = " << c.seed << '\n'
        << "hidden = " << c.hidden << '\n'
        << "theta_conv = " << format_double(c.theta_conv) << '\n'
        << "theta_h = " << format_double(c.theta_h) << '\n'
        << "a_plus = " << format_double(c.a_plus) << '\n'
        << "a_minus = " << format_double(c.a_minus) << '\n'
        << "epsilon_ms = " << c.epsilon_ms << '\n'
        << "epochs = " << c.epochs << '\n'
        << "steps = " << c.steps << '\n'
        << "delta_mode = " << to_string(c.delta_mode) << '\n'
        << "hmm_states = " << join(c.hmm_states) << '\n'
        << "hmm_mixtures = " << join(c.hmm_mixtures) << '\n'
        << "em_iterations = " << c.em_iterations << '\n'
        << "em_tolerance = " << format_double(c.em_tolerance) << '\n'
        << "variance_floor = " << format_double(c.variance_floor) << '\n'
        << "window = " << (c.window == WindowKind::kHamming ? "hamming" : "rectangular") << '\n'
        << "synapse = " << (c.synapse == SynapticInput::kImpulse ? "impulse" : "pulse") << '\n'
        << "dataset_dir = " << c.dataset_dir << '\n'
        << "output_dir = " << c.output_dir << '\n'
        << "split = " << (c.split == SplitPolicy::kSpeaker ? "speaker" : "files") << '\n'
        << "test_speakers = " << join(c.test_speakers) << '\n'
        << "test_list = " << c.test_list << '\n'
        << "threads = " << c.threads << '\n';
}

NetworkConfig network_config(const RunConfig& c) {
    NetworkConfig n;
    n.frontend.window = c.window;
    n.conv.threshold = c.theta_conv;
    n.conv.input = c.synapse;
    n.discovery.stdp = StdpParams{c.a_plus, c.a_minus, c.epsilon_ms, c.theta_h};
    n.discovery.input = c.synapse;
    n.hidden = c.hidden;
    n.steps = c.steps;
    n.seed = c.seed;
    return n;
}

} // namespace spikefeat
