#include "lifopr/statistics.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "lifopr/errors.hpp"
#include "lifopr/random_stream.hpp"

namespace lifopr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::optional<double> raw_value(const RawClassAggregate& agg, Metric metric) {
    switch (metric) {
    case Metric::p: return agg.delayed_fraction;
    case Metric::u: return agg.conditional_delay;
    case Metric::h: return agg.preemptions;
    case Metric::g: return agg.interruption_length;
    case Metric::w: return agg.waiting;
    case Metric::v: return agg.sojourn;
    }
    return std::nullopt;
}

} // namespace

std::string_view to_string(Metric metric) noexcept {
    switch (metric) {
    case Metric::p: return "p";
    case Metric::u: return "u";
    case Metric::h: return "h";
    case Metric::g: return "g";
    case Metric::w: return "w";
    case Metric::v: return "v";
    }
    return "?";
}

double metric_value(const ClassMetrics& cm, Metric metric) noexcept {
    switch (metric) {
    case Metric::p: return cm.p;
    case Metric::u: return cm.u;
    case Metric::h: return cm.h;
    case Metric::g: return cm.g;
    case Metric::w: return cm.w;
    case Metric::v: return cm.v;
    }
    return kNaN;
}

std::string_view to_string(Coverage c) noexcept {
    switch (c) {
    case Coverage::covered: return "true";
    case Coverage::missed: return "false";
    case Coverage::not_applicable: return "na";
    }
    return "?";
}

double t_quantile_975(std::size_t dof) {
    if (dof == 0) throw InputError("t quantile needs at least one degree of freedom");
    const boost::math::students_t dist(static_cast<double>(dof));
    return boost::math::quantile(dist, 0.975);
}

std::vector<ClassReport> summarize(const std::vector<std::vector<RawClassAggregate>>& replications,
                                   std::size_t class_count) {
    std::vector<ClassReport> out(class_count);
    for (std::size_t k = 0; k < class_count; ++k) {
        out[k].class_index = k + 1;
        for (Metric metric : kAllMetrics) {
            std::vector<double> values;
            for (const auto& rep : replications) {
                if (const auto x = raw_value(rep.at(k), metric)) values.push_back(*x);
            }
            ClassEstimate& est = out[k].estimates[static_cast<std::size_t>(metric)];
            est.metric = metric;
            est.replications = values.size();
            if (values.empty()) continue;
            const double n = static_cast<double>(values.size());
            double mean = 0.0;
            for (double x : values) mean += x;
            mean /= n;
            est.mean = mean;
            if (values.size() < 2) continue;
            double ss = 0.0;
            for (double x : values) ss += (x - mean) * (x - mean);
            const double stddev = std::sqrt(ss / (n - 1.0));
            est.half_width = t_quantile_975(values.size() - 1) * stddev / std::sqrt(n);
        }
    }
    return out;
}

SimulationReport replicate(const SystemModel& model, const PolicyConfig& policy, const Workload& workload,
                           std::size_t n_reps, std::size_t threads) {
    if (n_reps < 2) throw InputError("replicate needs at least 2 replications");
    model.validate();
    const auto started = std::chrono::steady_clock::now();

    const auto* base_cfg = std::get_if<RunConfig>(&workload);
    std::vector<Workload> workloads;
    SimulationReport report;
    for (std::size_t r = 0; r < n_reps; ++r) {
        if (base_cfg != nullptr) {
            RunConfig cfg = *base_cfg;
            cfg.seed = derive_seed(base_cfg->seed, r);
            report.metadata.seeds.push_back(cfg.seed);
            workloads.emplace_back(cfg);
        } else {
            workloads.push_back(workload);
        }
    }

    std::vector<std::vector<RawClassAggregate>> raw(n_reps);
    std::vector<bool> truncated(n_reps, false);
    std::vector<std::exception_ptr> errors(n_reps);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t r = next++; r < n_reps; r = next++) {
            try {
                const RunResult res = run(model, policy, workloads[r]);
                truncated[r] = res.truncated;
                raw[r] = per_class_raw(res.records, model.class_count());
            } catch (...) {
                errors[r] = std::current_exception();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, n_reps);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    report.classes = summarize(raw, model.class_count());
    report.metadata.warmup_time = base_cfg ? base_cfg->warmup_time : 0.0;
    report.metadata.completions_per_replication =
        base_cfg ? base_cfg->target_completions : std::get<TraceInput>(workload).arrivals.size();
    report.metadata.truncated_replications =
        static_cast<std::size_t>(std::count(truncated.begin(), truncated.end(), true));
    report.metadata.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

std::vector<ComparisonRow> compare(const SimulationReport& report, const std::vector<ClassMetrics>& analytic) {
    if (report.classes.size() != analytic.size())
        throw InputError("report and analytic metrics disagree on the number of classes");
    std::vector<ComparisonRow> rows;
    rows.reserve(analytic.size() * kAllMetrics.size());
    for (std::size_t k = 0; k < analytic.size(); ++k) {
        for (Metric metric : kAllMetrics) {
            const ClassEstimate& est = report.classes[k][metric];
            ComparisonRow row;
            row.class_index = k + 1;
            row.metric = metric;
            row.analytic = analytic[k].stable ? metric_value(analytic[k], metric) : kNaN;
            row.sim_mean = est.mean;
            row.sim_ci95 = est.half_width;
            if (!est.mean || std::isnan(row.analytic)) {
                row.abs_err = kNaN;
                row.rel_err = kNaN;
                row.coverage = Coverage::not_applicable;
            } else {
                row.abs_err = std::abs(*est.mean - row.analytic);
                if (row.analytic != 0.0)
                    row.rel_err = row.abs_err / std::abs(row.analytic);
                else
                    row.rel_err = row.abs_err == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
                row.coverage = row.abs_err <= est.half_width ? Coverage::covered : Coverage::missed;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace lifopr
