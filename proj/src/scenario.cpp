#include "uavls/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "uavls/errors.hpp"

namespace uavls::cli {

namespace {

struct Entry {
    std::string value;
    int line;
};

using SectionMap = std::map<std::string, std::map<std::string, Entry>>;

const std::map<std::string, std::set<std::string>> kSchema = {
    {"", {"mode"}},
    {"geometry", {"tx", "rx", "interferer", "interferer_lock", "interferer_distance"}},
    {"environment",
     {"preset", "zeta", "nu", "mu", "alpha_los", "alpha_nlos", "k_los", "k_nlos"}},
    {"radio", {"p_m", "p_i", "n_o", "gamma_t", "rt_bps", "bandwidth_hz"}},
    {"network",
     {"lambda_i", "nakagami_m", "deployment_radius", "interferer_height", "association"}},
    {"sweep", {"axis", "min", "max", "steps"}},
    {"sim", {"trials", "seed", "model"}},
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const Entry& e, const std::string& key) {
    char* end = nullptr;
    const double v = std::strtod(e.value.c_str(), &end);
    if (end == e.value.c_str() || *end != '\0') {
        throw config_error("key '" + key + "': expected a number, got '" + e.value + "'",
                           e.line);
    }
    return v;
}

std::uint64_t parse_u64(const Entry& e, const std::string& key) {
    const double v = parse_double(e, key);
    if (v < 0.0 || v != std::floor(v)) {
        throw config_error("key '" + key + "': expected a non-negative integer", e.line);
    }
    return static_cast<std::uint64_t>(v);
}

Position parse_position(const Entry& e, const std::string& key) {
    std::istringstream in(e.value);
    Position p;
    if (!(in >> p.x >> p.y >> p.z)) {
        throw config_error("key '" + key + "': expected 'x y z' in meters", e.line);
    }
    std::string rest;
    if (in >> rest) {
        throw config_error("key '" + key + "': trailing content '" + rest + "'", e.line);
    }
    return p;
}

SectionMap tokenize(const std::string& text) {
    SectionMap sections;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw config_error("unterminated section header", line_no);
            section = trim(line.substr(1, line.size() - 2));
            if (kSchema.find(section) == kSchema.end() || section.empty()) {
                throw config_error("unknown section [" + section + "]", line_no);
            }
            sections[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error("expected 'key = value' or '[section]'", line_no);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw config_error("empty key or value", line_no);
        }
        const auto schema_it = kSchema.find(section);
        if (schema_it == kSchema.end() || !schema_it->second.count(key)) {
            throw config_error("unknown key '" + key + "' in section [" + section + "]",
                               line_no);
        }
        auto [it, inserted] = sections[section].emplace(key, Entry{value, line_no});
        if (!inserted) {
            throw config_error("duplicate key '" + key + "' (first on line " +
                                   std::to_string(it->second.line) + ")",
                               line_no);
        }
    }
    return sections;
}

const Entry* find(const SectionMap& s, const std::string& section, const std::string& key) {
    const auto sit = s.find(section);
    if (sit == s.end()) return nullptr;
    const auto kit = sit->second.find(key);
    return kit == sit->second.end() ? nullptr : &kit->second;
}

int line_of(const SectionMap& s, const std::string& section, const std::string& key) {
    const Entry* e = find(s, section, key);
    return e ? e->line : 0;
}

}  // namespace

const char* axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::interferer_dh: return "interferer_dh";
        case SweepAxis::main_dh: return "main_dh";
        case SweepAxis::rx_height: return "rx_height";
        case SweepAxis::tx_height: return "tx_height";
    }
    return "?";
}

ScenarioConfig parse_config(const std::string& text) {
    const SectionMap s = tokenize(text);
    ScenarioConfig cfg;

    // mode
    const Entry* mode = find(s, "", "mode");
    if (!mode) throw config_error("missing mandatory top-level key 'mode'");
    static const std::map<std::string, Mode> kModes = {
        {"general", Mode::general},   {"sir", Mode::sir},
        {"network", Mode::network},   {"nearest", Mode::nearest},
        {"simulate", Mode::simulate}, {"crossover", Mode::crossover},
        {"optimal-height", Mode::optimal_height}};
    const auto mit = kModes.find(mode->value);
    if (mit == kModes.end()) throw config_error("unknown mode '" + mode->value + "'", mode->line);
    cfg.mode = mit->second;

    // geometry
    if (const Entry* e = find(s, "geometry", "tx")) {
        cfg.tx = parse_position(*e, "tx");
        cfg.has_tx = true;
    }
    if (const Entry* e = find(s, "geometry", "rx")) {
        cfg.rx = parse_position(*e, "rx");
    } else if (s.count("geometry")) {
        throw config_error("section [geometry] needs key 'rx'");
    }
    if (const Entry* e = find(s, "geometry", "interferer")) {
        cfg.interferer = parse_position(*e, "interferer");
        cfg.has_interferer = true;
    }
    if (const Entry* e = find(s, "geometry", "interferer_lock")) {
        if (e->value == "none") {
            cfg.interferer_lock = InterfererLock::none;
        } else if (e->value == "fixed-link-distance") {
            cfg.interferer_lock = InterfererLock::fixed_link_distance;
        } else {
            throw config_error("interferer_lock must be 'none' or 'fixed-link-distance'",
                               e->line);
        }
    }
    if (const Entry* e = find(s, "geometry", "interferer_distance")) {
        cfg.interferer_distance = parse_double(*e, "interferer_distance");
        if (!(cfg.interferer_distance > 0.0)) {
            throw config_error("interferer_distance must be > 0", e->line);
        }
    }
    if (cfg.interferer_lock == InterfererLock::fixed_link_distance &&
        cfg.interferer_distance <= 0.0) {
        throw config_error("interferer_lock = fixed-link-distance needs interferer_distance",
                           line_of(s, "geometry", "interferer_lock"));
    }

    // environment
    cfg.env = channel::EnvironmentParams::dense_urban();
    bool env_given = false;
    if (const Entry* e = find(s, "environment", "preset")) {
        if (e->value != "dense-urban") {
            throw config_error("unknown environment preset '" + e->value + "'", e->line);
        }
        env_given = true;
    }
    struct EnvKey {
        const char* key;
        double channel::EnvironmentParams::* field;
    };
    static const EnvKey kEnvKeys[] = {
        {"zeta", &channel::EnvironmentParams::zeta},
        {"nu", &channel::EnvironmentParams::nu},
        {"mu", &channel::EnvironmentParams::mu},
        {"alpha_los", &channel::EnvironmentParams::alpha_los},
        {"alpha_nlos", &channel::EnvironmentParams::alpha_nlos},
        {"k_los", &channel::EnvironmentParams::k_los},
        {"k_nlos", &channel::EnvironmentParams::k_nlos}};
    for (const auto& ek : kEnvKeys) {
        if (const Entry* e = find(s, "environment", ek.key)) {
            cfg.env.*(ek.field) = parse_double(*e, ek.key);
            env_given = true;
        }
    }
    if (!env_given) cfg.applied_defaults.push_back("environment = dense-urban preset");
    try {
        cfg.env.validate();
    } catch (const std::invalid_argument& ex) {
        int line = 0;
        for (const auto& ek : kEnvKeys) line = std::max(line, line_of(s, "environment", ek.key));
        throw config_error(ex.what(), line);
    }

    // radio
    const Entry* gamma = find(s, "radio", "gamma_t");
    const Entry* rt = find(s, "radio", "rt_bps");
    const Entry* bw = find(s, "radio", "bandwidth_hz");
    if (gamma && rt) {
        throw config_error("gamma_t and rt_bps are mutually exclusive (ambiguous threshold)",
                           std::max(gamma->line, rt->line));
    }
    if (bw && !rt) {
        throw config_error("bandwidth_hz without rt_bps has no effect", bw->line);
    }
    if (const Entry* e = find(s, "radio", "p_m")) {
        cfg.radio.p_m = parse_double(*e, "p_m");
    } else {
        cfg.applied_defaults.push_back("p_m = 1e-8 W");
    }
    if (const Entry* e = find(s, "radio", "p_i")) {
        cfg.radio.p_i = parse_double(*e, "p_i");
    } else {
        cfg.radio.p_i = cfg.radio.p_m;
        cfg.applied_defaults.push_back("p_i = p_m");
    }
    if (const Entry* e = find(s, "radio", "n_o")) {
        cfg.radio.n_o = parse_double(*e, "n_o");
    } else {
        cfg.applied_defaults.push_back("n_o = 5e-17 W");
    }
    if (gamma) {
        cfg.radio.gamma_t = parse_double(*gamma, "gamma_t");
    } else if (rt) {
        double bandwidth = 1e4;
        if (bw) {
            bandwidth = parse_double(*bw, "bandwidth_hz");
        } else {
            cfg.applied_defaults.push_back("bandwidth_hz = 1e4");
        }
        cfg.radio.gamma_t =
            channel::RadioParams::threshold_from_rate(parse_double(*rt, "rt_bps"), bandwidth);
    } else {
        cfg.applied_defaults.push_back("gamma_t = 2");
    }
    try {
        cfg.radio.validate();
    } catch (const std::invalid_argument& ex) {
        throw config_error(ex.what(), line_of(s, "radio", "p_m"));
    }

    // network
    if (s.count("network")) {
        network::NetworkParams net;
        if (const Entry* e = find(s, "network", "lambda_i")) {
            net.lambda_i = parse_double(*e, "lambda_i");
        } else {
            throw config_error("section [network] needs key 'lambda_i'");
        }
        if (const Entry* e = find(s, "network", "nakagami_m")) {
            net.nakagami_m = static_cast<int>(parse_u64(*e, "nakagami_m"));
        } else {
            cfg.applied_defaults.push_back("nakagami_m = 1");
        }
        if (const Entry* e = find(s, "network", "deployment_radius")) {
            net.deployment_radius = parse_double(*e, "deployment_radius");
        } else {
            cfg.applied_defaults.push_back("deployment_radius = 5000 m");
        }
        if (const Entry* e = find(s, "network", "interferer_height")) {
            if (e->value == "track-rx") {
                cfg.interferer_height_tracks_rx = true;
            } else {
                net.interferer_height = parse_double(*e, "interferer_height");
            }
        }
        if (const Entry* e = find(s, "network", "association")) {
            if (e->value == "fixed") {
                cfg.association = Association::fixed;
            } else if (e->value == "nearest") {
                cfg.association = Association::nearest;
            } else {
                throw config_error("association must be 'fixed' or 'nearest'", e->line);
            }
        }
        net.rx_height = cfg.rx.z;
        try {
            net.validate();
        } catch (const std::invalid_argument& ex) {
            throw config_error(ex.what(), line_of(s, "network", "lambda_i"));
        }
        cfg.net = net;
    }

    // sweep
    if (s.count("sweep")) {
        SweepSpec sw{};
        const Entry* axis = find(s, "sweep", "axis");
        if (!axis) throw config_error("section [sweep] needs key 'axis'");
        static const std::map<std::string, SweepAxis> kAxes = {
            {"interferer_dh", SweepAxis::interferer_dh},
            {"main_dh", SweepAxis::main_dh},
            {"rx_height", SweepAxis::rx_height},
            {"tx_height", SweepAxis::tx_height}};
        const auto ait = kAxes.find(axis->value);
        if (ait == kAxes.end()) throw config_error("unknown sweep axis '" + axis->value + "'", axis->line);
        sw.axis = ait->second;
        const Entry* mn = find(s, "sweep", "min");
        const Entry* mx = find(s, "sweep", "max");
        const Entry* st = find(s, "sweep", "steps");
        if (!mn || !mx || !st) throw config_error("section [sweep] needs min, max and steps");
        sw.min = parse_double(*mn, "min");
        sw.max = parse_double(*mx, "max");
        sw.steps = static_cast<int>(parse_u64(*st, "steps"));
        if (sw.steps < 1) throw config_error("sweep steps must be >= 1", st->line);
        if (sw.steps > 1 && !(sw.max > sw.min)) {
            throw config_error("sweep needs max > min", mx->line);
        }
        cfg.sweep = sw;
    }

    // sim
    if (const Entry* e = find(s, "sim", "trials")) {
        cfg.trials = parse_u64(*e, "trials");
        if (cfg.trials < 1) throw config_error("trials must be >= 1", e->line);
    } else if (cfg.mode == Mode::simulate) {
        cfg.applied_defaults.push_back("trials = 1e6");
    }
    if (const Entry* e = find(s, "sim", "seed")) {
        cfg.seed = parse_u64(*e, "seed");
    } else if (cfg.mode == Mode::simulate) {
        cfg.applied_defaults.push_back("seed = 1");
    }
    if (const Entry* e = find(s, "sim", "model")) {
        if (e->value == "general") {
            cfg.sim_model = SimModel::general;
        } else if (e->value == "sir") {
            cfg.sim_model = SimModel::sir;
        } else {
            throw config_error("sim model must be 'general' or 'sir'", e->line);
        }
    }

    // cross-section requirements per mode
    const bool pair_mode = cfg.mode == Mode::general || cfg.mode == Mode::sir ||
                           cfg.mode == Mode::simulate || cfg.mode == Mode::crossover;
    if (pair_mode || cfg.mode == Mode::optimal_height || cfg.association == Association::fixed) {
        if (!s.count("geometry")) throw config_error("missing mandatory section [geometry]");
    }
    if (pair_mode) {
        if (!cfg.has_tx) throw config_error("this mode needs geometry key 'tx'");
        if (!cfg.has_interferer && cfg.interferer_lock == InterfererLock::none) {
            throw config_error("this mode needs geometry key 'interferer' (or an interferer_lock)");
        }
    }
    if ((cfg.mode == Mode::network || cfg.mode == Mode::nearest) && !cfg.net) {
        throw config_error("mode '" + mode->value + "' needs section [network]");
    }
    if (cfg.mode == Mode::network && cfg.association == Association::fixed && !cfg.has_tx) {
        throw config_error("network mode with fixed association needs geometry key 'tx'");
    }
    if (cfg.mode == Mode::nearest && !cfg.has_tx) {
        throw config_error("nearest mode needs geometry key 'tx'");
    }
    const bool needs_sweep = cfg.mode == Mode::general || cfg.mode == Mode::sir ||
                             cfg.mode == Mode::simulate || cfg.mode == Mode::network ||
                             cfg.mode == Mode::nearest || cfg.mode == Mode::optimal_height;
    if (needs_sweep && !cfg.sweep) {
        throw config_error("this mode produces a curve and needs section [sweep]");
    }
    if (cfg.mode == Mode::optimal_height && cfg.sweep &&
        cfg.sweep->axis != SweepAxis::rx_height && cfg.sweep->axis != SweepAxis::tx_height) {
        throw config_error("optimal-height needs a height sweep axis",
                           line_of(s, "sweep", "axis"));
    }
    return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace uavls::cli
