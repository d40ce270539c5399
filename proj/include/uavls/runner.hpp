#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "uavls/scenario.hpp"

namespace uavls::cli {

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::optional<double> tolerance;  // quadrature relative tolerance override
};

/// Executes a scenario, writing CSV rows to `out` and diagnostics (applied
/// defaults, per-row failures, warnings) to `diag`. Returns the process
/// exit code: 0 on success, 3 if any row hit a numerical failure.
int run_scenario(const ScenarioConfig& cfg, std::ostream& out, std::ostream& diag,
                 const RunOptions& opts = {});

struct OptimalHeightResult {
    double height;
    double outage;
    bool multimodal;
};

/// Coarse grid over the sweep axis followed by golden-section refinement
/// around the grid minimum; the height is resolved to +/- 0.5 m.
OptimalHeightResult optimal_height(const ScenarioConfig& cfg, const RunOptions& opts = {});

}  // namespace uavls::cli
