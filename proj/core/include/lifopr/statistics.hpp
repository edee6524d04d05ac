#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "lifopr/analytic.hpp"
#include "lifopr/simulator.hpp"

namespace lifopr {

enum class Metric { p, u, h, g, w, v };

inline constexpr std::array<Metric, 6> kAllMetrics{Metric::p, Metric::u, Metric::h,
                                                   Metric::g, Metric::w, Metric::v};

std::string_view to_string(Metric metric) noexcept;

double metric_value(const ClassMetrics& cm, Metric metric) noexcept;

/// Point estimate and 95% Student-t half-width across replications. `mean`
/// is empty when no replication observed the quantity.
struct ClassEstimate {
    Metric metric = Metric::v;
    std::optional<double> mean;
    double half_width = 0.0;
    std::size_t replications = 0;
};

struct ClassReport {
    std::size_t class_index = 0;
    std::array<ClassEstimate, 6> estimates{};

    const ClassEstimate& operator[](Metric m) const { return estimates[static_cast<std::size_t>(m)]; }
};

struct RunMetadata {
    std::vector<std::uint64_t> seeds;
    double warmup_time = 0.0;
    std::size_t completions_per_replication = 0;
    std::size_t truncated_replications = 0;
    double wall_clock_seconds = 0.0;
};

struct SimulationReport {
    std::vector<ClassReport> classes;
    RunMetadata metadata;

    bool truncated() const noexcept { return metadata.truncated_replications > 0; }
};

/// 0.975 quantile of Student's t with `dof` degrees of freedom.
double t_quantile_975(std::size_t dof);

/// Combines per-replication class aggregates. Each replication contributes
/// one value per metric (interruption length is a ratio of sums within the
/// replication); the estimate is the mean of those values and the half-width
/// t(0.975, n-1) * s / sqrt(n), or 0 with fewer than two values.
std::vector<ClassReport> summarize(const std::vector<std::vector<RawClassAggregate>>& replications,
                                   std::size_t class_count);

/// Runs n_reps independent simulations and summarizes them. Replication r of
/// a stochastic workload uses seed derive_seed(cfg.seed, r); a trace workload
/// is replayed unchanged in every replication. Replications run on up to
/// `threads` worker threads (0 = hardware concurrency); the result does not
/// depend on the thread count. Throws InputError if n_reps < 2.
SimulationReport replicate(const SystemModel& model, const PolicyConfig& policy, const Workload& workload,
                           std::size_t n_reps, std::size_t threads = 0);

enum class Coverage { covered, missed, not_applicable };

std::string_view to_string(Coverage c) noexcept;

struct ComparisonRow {
    std::size_t class_index = 0;
    Metric metric = Metric::v;
    double analytic = 0.0;           // NaN for unstable classes
    std::optional<double> sim_mean;
    double sim_ci95 = 0.0;
    double abs_err = 0.0;            // NaN when either side is missing
    double rel_err = 0.0;
    Coverage coverage = Coverage::not_applicable;
};

/// One row per class and metric, class-major in p,u,h,g,w,v order.
std::vector<ComparisonRow> compare(const SimulationReport& report, const std::vector<ClassMetrics>& analytic);

} // namespace lifopr
