#include "lifopr/analytic.hpp"

#include <cmath>
#include <limits>

#include "lifopr/errors.hpp"

namespace lifopr {

void SystemModel::validate() const {
    if (servers < 1) throw InputError("server count must be >= 1");
    if (classes.empty()) throw InputError("model needs at least one priority class");
    for (std::size_t k = 0; k < classes.size(); ++k) {
        const double lambda = classes[k].lambda;
        if (!(std::isfinite(lambda) && lambda > 0.0))
            throw InputError("class " + std::to_string(k + 1) + ": arrival rate must be > 0");
    }
}

std::string_view to_string(AnalyticMode mode) noexcept {
    switch (mode) {
    case AnalyticMode::approximate: return "approx";
    case AnalyticMode::exact_single_channel: return "exact-m1";
    case AnalyticMode::exact_mmm_identical: return "exact-mm-identical";
    }
    return "?";
}

double erlang_c(int servers, double load) {
    if (servers < 1) throw DomainError("erlang_c: server count must be >= 1");
    if (!(load >= 0.0 && load < 1.0)) throw DomainError("erlang_c: load must satisfy 0 <= R < 1");
    const double offered = servers * load;
    double blocking = 1.0;
    for (int k = 1; k <= servers; ++k) blocking = offered * blocking / (k + offered * blocking);
    return blocking / (1.0 - load * (1.0 - blocking));
}

LoadProfile loads(const SystemModel& model) {
    model.validate();
    const std::size_t n = model.class_count();
    std::vector<double> rate(n + 1, 0.0);
    std::vector<double> load(n + 1, 0.0);
    double offered = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const auto& cls = model.priority(i);
        rate[i] = rate[i - 1] + cls.lambda;
        offered += cls.lambda * cls.service.mean();
        load[i] = offered / model.servers;
    }
    return LoadProfile(std::move(rate), std::move(load));
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ClassMetrics unstable_metrics() { return ClassMetrics{false, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN}; }

// g_i = R_i / (Lambda_i (1 - R_i)); also used at i = 1.
double interruption_length(const LoadProfile& lp, std::size_t i) {
    return lp.load(i) / (lp.rate(i) * (1.0 - lp.load(i)));
}

} // namespace

std::vector<ClassMetrics> approx_metrics(const SystemModel& model) {
    const LoadProfile lp = loads(model);
    const int m = model.servers;
    const std::size_t n = model.class_count();

    std::vector<ClassMetrics> out;
    out.reserve(n);
    double c_prev = 0.0;               // c_{i-1}
    double weighted_second_moment = 0.0;  // sum_{j<i} lambda_j b_j^(2)
    for (std::size_t i = 1; i <= n; ++i) {
        const auto& cls = model.priority(i);
        const double r_prev = lp.load(i - 1);
        const double r = lp.load(i);
        if (r >= 1.0) {
            out.push_back(unstable_metrics());
            continue;
        }
        const double c = erlang_c(m, r);
        const double b = cls.service.mean();

        ClassMetrics cm;
        cm.stable = true;
        cm.p = c_prev;
        // Empty sum over j < 1 and R_0 = 0: the whole delay term vanishes.
        cm.u = i == 1 ? 0.0
                      : weighted_second_moment /
                            (2.0 * m * m * r_prev * (1.0 - r_prev) * (1.0 - r));
        cm.g = interruption_length(lp, i);
        cm.h = lp.rate(i) * (c - c_prev) / cls.lambda;
        const double delay_term = c_prev * cm.u;
        const double interruption_term = r * (c - c_prev) / (cls.lambda * (1.0 - r));
        cm.w = delay_term + interruption_term;
        cm.v = cm.w + b;
        out.push_back(cm);

        c_prev = c;
        weighted_second_moment += cls.lambda * cls.service.second_moment();
    }
    return out;
}

std::vector<ClassMetrics> exact_single_channel(const SystemModel& model) {
    model.validate();
    if (model.servers != 1)
        throw DomainError("exact single-channel formulas require exactly one server");
    const LoadProfile lp = loads(model);
    const std::size_t n = model.class_count();

    std::vector<ClassMetrics> out;
    out.reserve(n);
    double weighted_second_moment = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const auto& cls = model.priority(i);
        const double r_prev = lp.load(i - 1);
        const double r = lp.load(i);
        if (r >= 1.0) {
            out.push_back(unstable_metrics());
            continue;
        }
        const double b = cls.service.mean();
        const double residual_work = weighted_second_moment / (2.0 * (1.0 - r_prev) * (1.0 - r));

        ClassMetrics cm;
        cm.stable = true;
        cm.p = r_prev;
        cm.u = i == 1 ? 0.0 : weighted_second_moment / (2.0 * r_prev * (1.0 - r_prev) * (1.0 - r));
        cm.h = lp.rate(i) * b;
        cm.g = interruption_length(lp, i);
        cm.w = residual_work + r * b / (1.0 - r);
        cm.v = cm.w + b;
        out.push_back(cm);

        weighted_second_moment += cls.lambda * cls.service.second_moment();
    }
    return out;
}

std::vector<ClassMetrics> exact_mmm_identical(const SystemModel& model) {
    model.validate();
    const auto* first = std::get_if<Exponential>(&model.classes.front().service.law());
    if (first == nullptr)
        throw DomainError("identical-mean exact formulas require exponential service in every class");
    for (const auto& cls : model.classes) {
        const auto* e = std::get_if<Exponential>(&cls.service.law());
        if (e == nullptr)
            throw DomainError("identical-mean exact formulas require exponential service in every class");
        if (std::abs(e->rate - first->rate) > 1e-12 * std::abs(first->rate))
            throw DomainError("identical-mean exact formulas require one common service rate");
    }

    const LoadProfile lp = loads(model);
    const int m = model.servers;
    const double b = 1.0 / first->rate;
    const std::size_t n = model.class_count();

    std::vector<ClassMetrics> out;
    out.reserve(n);
    double c_prev = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const auto& cls = model.priority(i);
        const double r_prev = lp.load(i - 1);
        const double r = lp.load(i);
        if (r >= 1.0) {
            out.push_back(unstable_metrics());
            continue;
        }
        const double c = erlang_c(m, r);

        ClassMetrics cm;
        cm.stable = true;
        cm.p = c_prev;
        // Class 1 is never delayed (p_1 = 0); u_1 is reported as 0 like the other modes.
        cm.u = i == 1 ? 0.0 : b / (m * (1.0 - r_prev) * (1.0 - r));
        cm.h = lp.rate(i) * (c - c_prev) / cls.lambda;
        cm.g = interruption_length(lp, i);
        cm.w = c_prev * b / (m * (1.0 - r_prev) * (1.0 - r)) + r * (c - c_prev) / (cls.lambda * (1.0 - r));
        cm.v = cm.w + b;
        out.push_back(cm);

        c_prev = c;
    }
    return out;
}

std::vector<ClassMetrics> evaluate(const SystemModel& model, AnalyticMode mode) {
    switch (mode) {
    case AnalyticMode::approximate: return approx_metrics(model);
    case AnalyticMode::exact_single_channel: return exact_single_channel(model);
    case AnalyticMode::exact_mmm_identical: return exact_mmm_identical(model);
    }
    throw InputError("unknown analytic mode");
}

std::vector<IdentityResiduals> check_identities(const std::vector<ClassMetrics>& metrics,
                                                const SystemModel& model) {
    const LoadProfile lp = loads(model);
    if (metrics.size() != model.class_count())
        throw InputError("metrics and model disagree on the number of classes");

    std::vector<IdentityResiduals> out;
    out.reserve(metrics.size());
    for (std::size_t i = 1; i <= metrics.size(); ++i) {
        const ClassMetrics& cm = metrics[i - 1];
        if (!cm.stable) {
            out.push_back({kNaN, kNaN, kNaN});
            continue;
        }
        const auto& cls = model.priority(i);
        const double all_busy = erlang_c(model.servers, lp.load(i));
        IdentityResiduals res;
        res.waiting = cm.w - (cm.p * cm.u + cm.h * cm.g);
        res.sojourn = cm.v - (cm.w + cls.service.mean());
        res.preemption = cm.h - lp.rate(i) * (all_busy - cm.p) / cls.lambda;
        out.push_back(res);
    }
    return out;
}

} // namespace lifopr
