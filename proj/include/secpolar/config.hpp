#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "secpolar/bits.hpp"
#include "secpolar/channels.hpp"
#include "secpolar/schemes.hpp"

namespace secpolar {

/// Invalid configuration; the CLI maps this to exit code 2.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class WiretapModel : std::uint8_t {
    BlockStates, // block varying over the stationary states
    Arbitrary,   // per-symbol varying over the states
    Menu3        // stable-B experiment menu: each state stationary plus one mixed block
};

enum class DumpMode : std::uint8_t { None, First, All };

/// Full experiment description: a (scheme, N, beta) grid plus channel,
/// adversary and execution settings. Parsed from a plain key = value file.
struct ExperimentConfig {
    SchemeKind scheme = SchemeKind::Weak;
    std::vector<std::size_t> n_list;
    std::vector<double> beta_list;
    std::uint32_t T = 1;
    double main_eps = 0.0;
    std::vector<double> states;
    WiretapModel wiretap = WiretapModel::BlockStates;
    PolicyKind policy = PolicyKind::UniformIid;
    std::vector<std::uint32_t> sequence;
    double r_add = 0.0;
    std::uint64_t seed = 1;
    std::uint32_t trials = 1;
    std::uint32_t threads = 1;
    std::string out_dir = "out";
    DumpMode dump = DumpMode::First;
    MessageMode message_mode = MessageMode::Random;
    std::string payload_path;

    void validate() const {
        if (n_list.empty()) throw config_error("N: at least one block length required");
        for (std::size_t n : n_list)
            if (!is_power_of_two(n))
                throw config_error("N: block length must be a power of two, got " + std::to_string(n));
        if (beta_list.empty()) throw config_error("beta: at least one value required");
        for (double b : beta_list)
            if (!(b > 0.0 && b < 0.5))
                throw config_error("beta: values must lie in (0, 1/2), got " + std::to_string(b));
        if (T < 1) throw config_error("T: must be >= 1");
        if (!(main_eps >= 0.0 && main_eps <= 1.0)) throw config_error("main_eps: out of [0,1]");
        if (states.empty()) throw config_error("states: list must not be empty");
        for (double s : states)
            if (!(s >= 0.0 && s <= 1.0)) throw config_error("states: erasure probability out of [0,1]");
        if (!(r_add >= 0.0 && r_add < 1.0)) throw config_error("r_add: out of [0,1)");
        if (r_add > 0.0 && wiretap == WiretapModel::Arbitrary)
            throw config_error("r_add: stable-B construction needs a block-varying wiretap model");
        if (trials < 1) throw config_error("trials: must be >= 1");
        if (threads < 1) throw config_error("threads: must be >= 1");
        if (policy == PolicyKind::FixedSequence) {
            const std::size_t need = wiretap == WiretapModel::Arbitrary
                                         ? static_cast<std::size_t>(T + 1) * n_list.back()
                                         : static_cast<std::size_t>(T + 1);
            if (sequence.size() < need)
                throw config_error("sequence: fixed policy needs " + std::to_string(need) +
                                   " entries, got " + std::to_string(sequence.size()));
            const std::size_t n_states = wiretap == WiretapModel::Menu3 ? states.size() + 1 : states.size();
            for (std::uint32_t s : sequence)
                if (s >= n_states) throw config_error("sequence: state index out of range");
        }
        if (wiretapped_menu_size() < 1) throw config_error("states: empty effective menu");
        if (message_mode == MessageMode::Payload && payload_path.empty())
            throw config_error("payload: path required for payload message mode");
    }

    std::size_t wiretapped_menu_size() const {
        return wiretap == WiretapModel::Menu3 ? states.size() + 1 : states.size();
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_one(const std::string& key, const std::string& tok);

template <>
inline double parse_one<double>(const std::string& key, const std::string& tok) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (...) {
        throw config_error(key + ": cannot parse number '" + tok + "'");
    }
}

template <>
inline std::uint64_t parse_one<std::uint64_t>(const std::string& key, const std::string& tok) {
    try {
        std::size_t pos = 0;
        std::uint64_t v = std::stoull(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (...) {
        throw config_error(key + ": cannot parse integer '" + tok + "'");
    }
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& value) {
    std::vector<T> out;
    std::istringstream in(value);
    std::string tok;
    while (in >> tok) out.push_back(static_cast<T>(parse_one<std::conditional_t<
        std::is_floating_point_v<T>, double, std::uint64_t>>(key, tok)));
    return out;
}

} // namespace detail

inline std::map<std::string, std::string> parse_key_values(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) + ": expected 'key = value'");
        kv[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
    }
    return kv;
}

inline ExperimentConfig config_from_map(const std::map<std::string, std::string>& kv) {
    ExperimentConfig cfg;
    for (const auto& [key, value] : kv) {
        if (key == "scheme") {
            if (value == "weak") cfg.scheme = SchemeKind::Weak;
            else if (value == "strong") cfg.scheme = SchemeKind::Strong;
            else throw config_error("scheme: expected weak|strong, got '" + value + "'");
        } else if (key == "N") {
            cfg.n_list = detail::parse_list<std::size_t>(key, value);
        } else if (key == "beta") {
            cfg.beta_list = detail::parse_list<double>(key, value);
        } else if (key == "T") {
            cfg.T = static_cast<std::uint32_t>(detail::parse_one<std::uint64_t>(key, value));
        } else if (key == "main_eps") {
            cfg.main_eps = detail::parse_one<double>(key, value);
        } else if (key == "states") {
            cfg.states = detail::parse_list<double>(key, value);
        } else if (key == "wiretap") {
            if (value == "block") cfg.wiretap = WiretapModel::BlockStates;
            else if (value == "arbitrary") cfg.wiretap = WiretapModel::Arbitrary;
            else if (value == "menu3") cfg.wiretap = WiretapModel::Menu3;
            else throw config_error("wiretap: expected block|arbitrary|menu3, got '" + value + "'");
        } else if (key == "policy") {
            if (value == "uniform") cfg.policy = PolicyKind::UniformIid;
            else if (value == "fixed") cfg.policy = PolicyKind::FixedSequence;
            else if (value == "sweep") cfg.policy = PolicyKind::WorstCaseSweep;
            else throw config_error("policy: expected uniform|fixed|sweep, got '" + value + "'");
        } else if (key == "sequence") {
            cfg.sequence = detail::parse_list<std::uint32_t>(key, value);
        } else if (key == "r_add") {
            cfg.r_add = detail::parse_one<double>(key, value);
        } else if (key == "seed") {
            cfg.seed = detail::parse_one<std::uint64_t>(key, value);
        } else if (key == "trials") {
            cfg.trials = static_cast<std::uint32_t>(detail::parse_one<std::uint64_t>(key, value));
        } else if (key == "threads") {
            cfg.threads = static_cast<std::uint32_t>(detail::parse_one<std::uint64_t>(key, value));
        } else if (key == "out") {
            cfg.out_dir = value;
        } else if (key == "dump") {
            if (value == "none") cfg.dump = DumpMode::None;
            else if (value == "first") cfg.dump = DumpMode::First;
            else if (value == "all") cfg.dump = DumpMode::All;
            else throw config_error("dump: expected none|first|all, got '" + value + "'");
        } else if (key == "message") {
            if (value == "random") cfg.message_mode = MessageMode::Random;
            else if (value == "zeros") cfg.message_mode = MessageMode::Zeros;
            else throw config_error("message: expected random|zeros, got '" + value + "'");
        } else if (key == "payload") {
            cfg.payload_path = value;
            cfg.message_mode = MessageMode::Payload;
        } else {
            throw config_error("unknown config key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw config_error("cannot open config file: " + path);
    return config_from_map(parse_key_values(f));
}

} // namespace secpolar
