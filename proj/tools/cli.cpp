#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "lifopr/errors.hpp"
#include "lifopr/random_stream.hpp"
#include "lifopr/scenario.hpp"

namespace lifopr::cli {

namespace {

std::string fmt_table(double x) {
    if (std::isnan(x)) return "-";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

std::string fmt_csv(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fmt_table(const std::optional<double>& x) { return x ? fmt_table(*x) : "-"; }
std::string fmt_csv(const std::optional<double>& x) { return x ? fmt_csv(*x) : ""; }

void pad(std::ostream& os, const std::string& s, int width) {
    for (int k = static_cast<int>(s.size()); k < width; ++k) os << ' ';
    os << s;
}

struct Options {
    std::string config;
    std::string mode = "approx";
    std::size_t jobs = 1000000;
    double warmup = 100.0;
    std::uint64_t seed = 1;
    std::size_t reps = 10;
    std::string within_class = "lifo";
    bool strict_preemption = false;
    std::string format = "table";
    double max_time = 0.0;
    std::size_t threads = 0;
    std::string dump_jobs;
};

AnalyticMode parse_mode(const std::string& s) {
    if (s == "approx") return AnalyticMode::approximate;
    if (s == "exact-m1") return AnalyticMode::exact_single_channel;
    return AnalyticMode::exact_mmm_identical;
}

} // namespace

void render_analytic(std::ostream& os, const std::vector<ClassMetrics>& metrics, Format format) {
    if (format == Format::csv) {
        os << "class,stable,p,u,h,g,w,v\n";
        for (std::size_t k = 0; k < metrics.size(); ++k) {
            const auto& m = metrics[k];
            os << k + 1 << ',' << (m.stable ? "true" : "false");
            for (Metric metric : kAllMetrics) os << ',' << (m.stable ? fmt_csv(metric_value(m, metric)) : "");
            os << '\n';
        }
        return;
    }
    pad(os, "class", 5);
    for (Metric metric : kAllMetrics) pad(os, std::string(to_string(metric)), 14);
    os << '\n';
    for (std::size_t k = 0; k < metrics.size(); ++k) {
        pad(os, std::to_string(k + 1), 5);
        if (!metrics[k].stable) {
            os << "  UNSTABLE\n";
            continue;
        }
        for (Metric metric : kAllMetrics) pad(os, fmt_table(metric_value(metrics[k], metric)), 14);
        os << '\n';
    }
}

void render_simulation(std::ostream& os, const SimulationReport& report, Format format) {
    if (format == Format::csv) {
        os << "class,metric,sim_mean,sim_ci95,replications\n";
        for (const auto& cls : report.classes) {
            for (Metric metric : kAllMetrics) {
                const auto& est = cls[metric];
                os << cls.class_index << ',' << to_string(metric) << ',' << fmt_csv(est.mean) << ','
                   << fmt_csv(est.half_width) << ',' << est.replications << '\n';
            }
        }
        return;
    }
    const auto& meta = report.metadata;
    os << "replications: " << (meta.seeds.empty() ? std::size_t{0} : meta.seeds.size())
       << "  counted jobs/replication: " << meta.completions_per_replication
       << "  warm-up: " << fmt_table(meta.warmup_time) << '\n';
    pad(os, "class", 5);
    for (Metric metric : kAllMetrics) pad(os, std::string(to_string(metric)) + " (+/- 95%)", 26);
    os << '\n';
    for (const auto& cls : report.classes) {
        pad(os, std::to_string(cls.class_index), 5);
        for (Metric metric : kAllMetrics) {
            const auto& est = cls[metric];
            pad(os, fmt_table(est.mean) + " +/- " + fmt_table(est.half_width), 26);
        }
        os << '\n';
    }
    if (report.truncated())
        os << "TRUNCATED: " << meta.truncated_replications << " replication(s) hit the time cap\n";
}

void render_comparison(std::ostream& os, const std::vector<ComparisonRow>& rows, Format format) {
    if (format == Format::csv) {
        os << kComparisonCsvHeader << '\n';
        for (const auto& r : rows) {
            os << r.class_index << ',' << to_string(r.metric) << ',' << fmt_csv(r.analytic) << ','
               << fmt_csv(r.sim_mean) << ',' << fmt_csv(r.sim_ci95) << ',' << fmt_csv(r.abs_err) << ','
               << fmt_csv(r.rel_err) << ',' << to_string(r.coverage) << '\n';
        }
        return;
    }
    pad(os, "class", 5);
    pad(os, "metric", 7);
    for (const char* h : {"analytic", "sim_mean", "sim_ci95", "abs_err", "rel_err"}) pad(os, h, 14);
    pad(os, "covered", 9);
    os << '\n';
    for (const auto& r : rows) {
        pad(os, std::to_string(r.class_index), 5);
        pad(os, std::string(to_string(r.metric)), 7);
        if (std::isnan(r.analytic) && r.metric == Metric::p) {
            os << "  UNSTABLE\n";
            continue;
        }
        if (std::isnan(r.analytic)) {
            os << '\n';
            continue;
        }
        pad(os, fmt_table(r.analytic), 14);
        pad(os, fmt_table(r.sim_mean), 14);
        pad(os, fmt_table(r.sim_ci95), 14);
        pad(os, fmt_table(r.abs_err), 14);
        pad(os, fmt_table(r.rel_err), 14);
        pad(os, std::string(to_string(r.coverage)), 9);
        os << '\n';
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mean-value analysis and simulation of M/G/m queues with LIFO preemptive-resume priorities",
                 "lifopr"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    Options opt;
    app.add_option("--config", opt.config, "Scenario file")->required();
    app.add_option("--mode", opt.mode, "Analytic formulas")
        ->check(CLI::IsMember({"approx", "exact-m1", "exact-mm-identical"}));
    auto* jobs = app.add_option("--jobs", opt.jobs, "Counted jobs per replication")->check(CLI::PositiveNumber);
    auto* warmup = app.add_option("--warmup", opt.warmup, "Warm-up time per replication")->check(CLI::NonNegativeNumber);
    auto* seed = app.add_option("--seed", opt.seed, "Base seed");
    app.add_option("--reps", opt.reps, "Independent replications")->check(CLI::Range(2, 1000000));
    auto* within = app.add_option("--within-class", opt.within_class, "Order within a class")
                       ->check(CLI::IsMember({"lifo", "fifo"}));
    auto* strict = app.add_flag("--strict-preemption", opt.strict_preemption,
                                "Only strictly lower-priority jobs are displaced");
    app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"table", "csv"}));
    auto* max_time = app.add_option("--max-time", opt.max_time, "Simulated-time cap per replication")
                         ->check(CLI::PositiveNumber);
    app.add_option("--threads", opt.threads, "Worker threads for replications (0 = all cores)");
    app.add_option("--dump-jobs", opt.dump_jobs, "Write replication 1's job records as CSV");

    auto* analytic_cmd = app.add_subcommand("analytic", "Closed-form per-class metrics");
    auto* simulate_cmd = app.add_subcommand("simulate", "Discrete-event simulation with confidence intervals");
    auto* compare_cmd = app.add_subcommand("compare", "Analytic values against simulation estimates");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }

    try {
        const Scenario scenario = load_scenario_file(opt.config);
        const SystemModel& model = scenario.model;
        const Format format = opt.format == "csv" ? Format::csv : Format::table;

        if (analytic_cmd->parsed()) {
            render_analytic(out, evaluate(model, parse_mode(opt.mode)), format);
            return kOk;
        }

        PolicyConfig policy;
        if (scenario.policy.within_class_order) policy.within_class_order = *scenario.policy.within_class_order;
        if (scenario.policy.equal_class_preemption)
            policy.equal_class_preemption = *scenario.policy.equal_class_preemption;
        if (within->count() > 0)
            policy.within_class_order = opt.within_class == "fifo" ? WithinClassOrder::fifo : WithinClassOrder::lifo;
        if (strict->count() > 0) policy.equal_class_preemption = false;

        RunConfig cfg;
        cfg.target_completions = jobs->count() > 0 ? opt.jobs : scenario.run.jobs.value_or(opt.jobs);
        cfg.warmup_time = warmup->count() > 0 ? opt.warmup : scenario.run.warmup_time.value_or(opt.warmup);
        cfg.seed = seed->count() > 0 ? opt.seed : scenario.run.seed.value_or(opt.seed);
        if (max_time->count() > 0) {
            cfg.max_simulated_time = opt.max_time;
        } else if (scenario.run.max_simulated_time) {
            cfg.max_simulated_time = *scenario.run.max_simulated_time;
        } else {
            // Generous default: 50 times the time needed to generate the counted jobs.
            const double total_rate = loads(model).rate(model.class_count());
            cfg.max_simulated_time = cfg.warmup_time + 50.0 * static_cast<double>(cfg.target_completions) / total_rate;
        }

        // Analytic precondition failures surface before any simulation work.
        std::vector<ClassMetrics> analytic;
        if (compare_cmd->parsed()) analytic = evaluate(model, parse_mode(opt.mode));

        const SimulationReport report = replicate(model, policy, cfg, opt.reps, opt.threads);
        err << "simulated " << opt.reps << " replications in " << report.metadata.wall_clock_seconds << " s\n";

        if (!opt.dump_jobs.empty()) {
            RunConfig first = cfg;
            first.seed = derive_seed(cfg.seed, 0);
            const RunResult res = lifopr::run(model, policy, first);
            std::ofstream dump(opt.dump_jobs);
            if (!dump) throw InputError("cannot write '" + opt.dump_jobs + "'");
            write_job_records_csv(dump, res.records);
        }

        if (simulate_cmd->parsed())
            render_simulation(out, report, format);
        else
            render_comparison(out, compare(report, analytic), format);

        if (report.truncated()) {
            err << "error: " << report.metadata.truncated_replications
                << " replication(s) reached the simulated-time cap before all counted jobs completed\n";
            return kTruncated;
        }
        return kOk;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    }
}

} // namespace lifopr::cli
