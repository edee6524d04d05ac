#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "lifopr/model.hpp"

namespace lifopr {

enum class WithinClassOrder { lifo, fifo };

struct PolicyConfig {
    WithinClassOrder within_class_order = WithinClassOrder::lifo;
    /// When true an arrival may displace an in-service job of its own class;
    /// when false only strictly lower-priority jobs are displaced.
    bool equal_class_preemption = true;
};

/// Lifecycle of one completed job.
struct JobRecord {
    std::uint64_t id = 0;          // arrival order, 0-based
    std::size_t class_index = 0;   // 1-based priority
    double arrival_time = 0.0;
    double service_requirement = 0.0;
    std::optional<double> first_start_time;
    double completion_time = 0.0;
    int preemption_count = 0;
    double total_interruption_time = 0.0;
    std::vector<double> interruption_intervals;

    double sojourn() const noexcept { return completion_time - arrival_time; }
    double initial_delay() const noexcept { return first_start_time.value_or(completion_time) - arrival_time; }
};

struct RunConfig {
    std::uint64_t seed = 1;
    /// Only jobs arriving at or after this time are counted.
    double warmup_time = 0.0;
    /// The first target_completions jobs arriving after warm-up are counted;
    /// the run ends once all of them have completed.
    std::size_t target_completions = 100000;
    double max_simulated_time = std::numeric_limits<double>::infinity();
};

struct TraceArrival {
    double time;
    std::size_t class_index;  // 1-based
    double service_requirement;
};

/// Scripted workload replacing stochastic generation. Every job is counted.
struct TraceInput {
    std::vector<TraceArrival> arrivals;
    double max_simulated_time = std::numeric_limits<double>::infinity();
};

using Workload = std::variant<RunConfig, TraceInput>;

struct RunResult {
    /// Counted jobs that completed, ordered by arrival.
    std::vector<JobRecord> records;
    /// The time cap was reached before every counted job completed.
    bool truncated = false;
    std::size_t counted_target = 0;
    double end_time = 0.0;
    std::uint64_t events = 0;
};

/// Simulates the M/G/m system with preemptive-resume priorities.
///
/// Arrival of class i: start on the lowest-index idle server if any.
/// Otherwise pick the in-service job with the largest class index (ties:
/// earliest arrival, then lowest server index); if its class is > i, or == i
/// with equal_class_preemption, suspend it and start the arrival in its place.
/// Else the arrival joins the waiting pool.
///
/// A freed server takes the pool entry with the smallest class index; within
/// a class the latest arrival (LIFO) or earliest arrival (FIFO); then
/// insertion order. Suspended jobs resume with their remaining work.
/// Completions at a timestamp are handled before arrivals at that timestamp.
///
/// Stochastic workloads draw interarrival times for class k from sub-stream
/// 2(k-1) and service requirements from sub-stream 2(k-1)+1 of the seed, so
/// policy changes leave the sampled workload unchanged.
///
/// Throws InputError for an invalid model or a trace whose times decrease or
/// whose classes are out of range.
RunResult run(const SystemModel& model, const PolicyConfig& policy, const Workload& workload);

/// Per-class sample quantities over counted jobs. A field is empty when it
/// has no observations (e.g. conditional_delay when no job was delayed).
struct RawClassAggregate {
    std::size_t jobs = 0;
    std::optional<double> sojourn;            // mean(completion - arrival)
    std::optional<double> waiting;            // sojourn - mean service
    std::optional<double> mean_service;
    std::optional<double> delayed_fraction;   // share with first start > arrival
    std::optional<double> conditional_delay;  // mean initial delay given > 0
    std::optional<double> preemptions;        // mean preemption count
    std::optional<double> interruption_length;  // sum of intervals / number of intervals
    std::size_t interruption_count = 0;
    double interruption_total = 0.0;

    bool present() const noexcept { return jobs > 0; }
};

std::vector<RawClassAggregate> per_class_raw(const std::vector<JobRecord>& records, std::size_t class_count);

/// CSV dump: class,arrival,service,first_start,completion,preemptions,interruption_total
void write_job_records_csv(std::ostream& os, const std::vector<JobRecord>& records);

} // namespace lifopr
