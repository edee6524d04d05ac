#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "lifopr/model.hpp"
#include "lifopr/simulator.hpp"

namespace lifopr {

/// Simulation settings a scenario file may pin; command-line flags win.
struct RunDefaults {
    std::optional<std::uint64_t> seed;
    std::optional<double> warmup_time;
    std::optional<std::size_t> jobs;
    std::optional<double> max_simulated_time;

    friend bool operator==(const RunDefaults&, const RunDefaults&) = default;
};

struct PolicyOverrides {
    std::optional<WithinClassOrder> within_class_order;
    std::optional<bool> equal_class_preemption;

    friend bool operator==(const PolicyOverrides&, const PolicyOverrides&) = default;
};

struct Scenario {
    SystemModel model;
    PolicyOverrides policy;
    RunDefaults run;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Line-oriented scenario format:
///
///     # comment
///     servers 3
///     class lambda=1 service=exp(5)        # one line per class, highest first
///     policy within_class=lifo preemption=equal
///     run seed=1 warmup=100 jobs=200000 max_time=1e7
///
/// `servers` and at least one `class` line are required; `policy` and `run`
/// are optional and every key on them is optional. Throws ParseError carrying
/// the offending line number.
Scenario parse_scenario(std::string_view text);

Scenario load_scenario_file(const std::string& path);

/// Canonical text form; parse_scenario(render_scenario(s)) == s.
std::string render_scenario(const Scenario& scenario);

} // namespace lifopr
