#pragma once

// Self-contained end-to-end runs over a freshly simulated chain. Each run
// collects named checks; the CLI prints them as PASS/FAIL lines.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "posrelay/relay/cost.hpp"
#include "posrelay/relay/types.hpp"

namespace posrelay::cli {

struct ScenarioOptions {
    relay::RelayConfig config = default_config();
    std::uint64_t seed = 7;
    std::uint64_t periods = 3;
    /// 0 means twice the committee size.
    std::uint64_t validators = 0;
    std::vector<relay::StorageMode> modes{relay::StorageMode::Store, relay::StorageMode::NoStore};
    /// Tampered updates per kind in `adversarial`.
    std::uint64_t trials = 1;
    relay::CostModel cost_model;

    /// Committee 32, 4-slot epochs, 4-epoch periods.
    static relay::RelayConfig default_config();
};

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ScenarioReport {
    std::string name;
    std::vector<Check> checks;
    /// Informational lines (cost reports), printed before the verdicts.
    std::vector<std::string> notes;

    bool passed() const;
};

inline constexpr std::array<std::string_view, 6> kScenarioNames = {
    "case1", "case2", "case3", "stall", "adversarial", "liveness"};

/// Throws std::invalid_argument for an unknown name or unusable options.
ScenarioReport run_scenario(std::string_view name, const ScenarioOptions& options);

/// One line of counters and modeled gas.
std::string format_costs(const relay::CostMeter& meter, const relay::CostModel& model);

}  // namespace posrelay::cli
