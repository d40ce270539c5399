#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uavls/channel.hpp"
#include "uavls/geometry.hpp"
#include "uavls/network.hpp"

namespace uavls::cli {

enum class Mode { general, sir, network, nearest, simulate, crossover, optimal_height };

enum class SweepAxis { interferer_dh, main_dh, rx_height, tx_height };

enum class InterfererLock {
    none,
    fixed_link_distance  // interferer rides at the receiver height, constant link distance
};

enum class Association { fixed, nearest };

enum class SimModel { general, sir };

struct SweepSpec {
    SweepAxis axis;
    double min;
    double max;
    int steps;
};

struct ScenarioConfig {
    Mode mode = Mode::general;

    Position tx;
    Position rx;
    Position interferer;
    bool has_tx = false;
    bool has_interferer = false;
    InterfererLock interferer_lock = InterfererLock::none;
    double interferer_distance = 0.0;

    channel::EnvironmentParams env;
    channel::RadioParams radio;

    std::optional<network::NetworkParams> net;
    bool interferer_height_tracks_rx = false;
    Association association = Association::fixed;

    std::optional<SweepSpec> sweep;

    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    SimModel sim_model = SimModel::general;

    std::vector<std::string> applied_defaults;
};

/// Parses the line-oriented `key = value` format with [section] headers.
/// Rejects unknown keys, duplicates and invariant violations with line
/// numbers; fills unspecified values from the dense-urban defaults.
ScenarioConfig parse_config(const std::string& text);

ScenarioConfig load_config_file(const std::string& path);

const char* axis_name(SweepAxis axis);

}  // namespace uavls::cli
