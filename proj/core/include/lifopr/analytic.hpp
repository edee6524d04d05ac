#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "lifopr/model.hpp"

namespace lifopr {

/// Cumulative arrival rate and per-server load of the classes 1..i, with the
/// empty prefix (i = 0) stored explicitly.
class LoadProfile {
public:
    LoadProfile(std::vector<double> cumulative_rate, std::vector<double> cumulative_load)
        : rate_(std::move(cumulative_rate)), load_(std::move(cumulative_load)) {}

    /// Lambda_i = lambda_1 + ... + lambda_i; rate(0) == 0.
    double rate(std::size_t i) const { return rate_.at(i); }

    /// R_i = (lambda_1 b_1 + ... + lambda_i b_i) / m; load(0) == 0.
    double load(std::size_t i) const { return load_.at(i); }

    std::size_t class_count() const noexcept { return rate_.size() - 1; }

private:
    std::vector<double> rate_;
    std::vector<double> load_;
};

/// Mean-value characteristics of one priority class.
///
///   p  probability that service does not start on arrival
///   u  mean delay before first service, given that delay is positive
///   h  mean number of preemptions suffered by a job
///   g  mean length of one interruption
///   w  mean waiting time, initial delay plus all interruptions
///   v  mean sojourn time
///
/// When `stable` is false (R_i >= 1) all six values are NaN.
struct ClassMetrics {
    bool stable = false;
    double p = 0.0;
    double u = 0.0;
    double h = 0.0;
    double g = 0.0;
    double w = 0.0;
    double v = 0.0;
};

enum class AnalyticMode {
    approximate,        // arbitrary service laws, any m
    exact_single_channel,  // m == 1
    exact_mmm_identical,   // exponential service with one common rate
};

std::string_view to_string(AnalyticMode mode) noexcept;

/// Probability of waiting in M/M/m at per-server load R, via the Erlang-B
/// recurrence B_k = a B_{k-1} / (k + a B_{k-1}), a = mR, then
/// C = B_m / (1 - R (1 - B_m)). Throws DomainError unless m >= 1 and
/// 0 <= R < 1.
double erlang_c(int servers, double load);

LoadProfile loads(const SystemModel& model);

/// Approximate metrics for M/G/m with LIFO preemptive-resume priorities.
/// Classes whose cumulative load reaches 1 are reported unstable.
std::vector<ClassMetrics> approx_metrics(const SystemModel& model);

/// Exact metrics for a single server. Throws DomainError if servers != 1.
std::vector<ClassMetrics> exact_single_channel(const SystemModel& model);

/// Exact metrics when every class has exponential service with the same rate
/// (relative tolerance 1e-12). Throws DomainError otherwise.
std::vector<ClassMetrics> exact_mmm_identical(const SystemModel& model);

std::vector<ClassMetrics> evaluate(const SystemModel& model, AnalyticMode mode);

/// Per-class residuals of the conservation identities
///   waiting:    w_i - (p_i u_i + h_i g_i)
///   sojourn:    v_i - (w_i + b_i)
///   preemption: h_i - Lambda_i (c_i - c_{i-1}) / lambda_i
/// where c_{i-1} = p_i and c_i = erlang_c(m, R_i) is the probability that
/// every server is held by classes 1..i. Unstable classes get NaN residuals.
struct IdentityResiduals {
    double waiting = 0.0;
    double sojourn = 0.0;
    double preemption = 0.0;
};

std::vector<IdentityResiduals> check_identities(const std::vector<ClassMetrics>& metrics,
                                                const SystemModel& model);

} // namespace lifopr
