#include <doctest.h>

#include <cmath>
#include <random>

#include "lifopr/analytic.hpp"
#include "lifopr/errors.hpp"
#include "model_generators.hpp"
#include "oracle.hpp"

using namespace lifopr;

namespace {

SystemModel paper_model() {
    SystemModel m;
    m.servers = 3;
    for (double rate : {5.0, 5.0 / 2.0, 5.0 / 3.0, 5.0 / 4.0})
        m.classes.push_back({1.0, ServiceDistribution::exponential(rate)});
    return m;
}

void check_elementwise(const std::vector<ClassMetrics>& a, const std::vector<ClassMetrics>& b, double rel) {
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CAPTURE(k);
        REQUIRE(a[k].stable == b[k].stable);
        CHECK(oracle::close_rel(a[k].p, b[k].p, rel));
        CHECK(oracle::close_rel(a[k].u, b[k].u, rel));
        CHECK(oracle::close_rel(a[k].h, b[k].h, rel));
        CHECK(oracle::close_rel(a[k].g, b[k].g, rel));
        CHECK(oracle::close_rel(a[k].w, b[k].w, rel));
        CHECK(oracle::close_rel(a[k].v, b[k].v, rel));
    }
}

} // namespace

TEST_CASE("erlang_c boundary values") {
    for (int m : {1, 2, 3, 10, 100}) CHECK(erlang_c(m, 0.0) == 0.0);
    CHECK(erlang_c(1, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
    // 4/9 by exact rational summation of the closed form at m = 3, R = 2/3.
    CHECK(erlang_c(3, 2.0 / 3.0) == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("erlang_c rejects loads outside [0,1)") {
    CHECK_THROWS_AS(erlang_c(3, 1.0), DomainError);
    CHECK_THROWS_AS(erlang_c(3, 1.5), DomainError);
    CHECK_THROWS_AS(erlang_c(3, -0.1), DomainError);
    CHECK_THROWS_AS(erlang_c(3, std::nan("")), DomainError);
    CHECK_THROWS_AS(erlang_c(0, 0.5), DomainError);
}

TEST_CASE("erlang_c agrees with direct summation") {
    for (int m : {1, 2, 3, 5, 8, 20, 60, 150}) {
        for (double r : {0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
            CAPTURE(m);
            CAPTURE(r);
            const double direct = static_cast<double>(oracle::erlang_c_direct(m, r));
            CHECK(oracle::close_rel(erlang_c(m, r), direct, 1e-12));
        }
    }
}

TEST_CASE("erlang_c stays finite for large server counts") {
    const double c = erlang_c(2000, 0.95);
    CHECK(std::isfinite(c));
    CHECK(c > 0.0);
    CHECK(c < 1.0);
}

TEST_CASE("erlang_c is increasing in load and equals R on one server") {
    for (int m : {1, 2, 4, 9}) {
        double prev = erlang_c(m, 0.0);
        for (int k = 1; k < 100; ++k) {
            const double r = k / 100.0;
            const double c = erlang_c(m, r);
            CHECK(c > prev);
            prev = c;
            if (m == 1) CHECK(c == doctest::Approx(r).epsilon(1e-14));
        }
    }
}

TEST_CASE("load profile of the four-class example") {
    const LoadProfile lp = loads(paper_model());
    CHECK(lp.class_count() == 4);
    CHECK(lp.rate(0) == 0.0);
    CHECK(lp.load(0) == 0.0);
    const double rates[] = {1, 2, 3, 4};
    const double r[] = {1.0 / 15, 1.0 / 5, 2.0 / 5, 2.0 / 3};
    for (std::size_t i = 1; i <= 4; ++i) {
        CHECK(lp.rate(i) == rates[i - 1]);
        CHECK(lp.load(i) == doctest::Approx(r[i - 1]).epsilon(1e-14));
        CHECK(lp.load(i) > lp.load(i - 1));
    }
}

TEST_CASE("load profile of a single M/D/1 class") {
    SystemModel m{1, {{1.0, ServiceDistribution::deterministic(0.5)}}};
    const LoadProfile lp = loads(m);
    CHECK(lp.rate(1) == 1.0);
    CHECK(lp.load(1) == 0.5);
}

TEST_CASE("invalid models are rejected") {
    CHECK_THROWS_AS(loads(SystemModel{0, {{1.0, ServiceDistribution::exponential(1.0)}}}), InputError);
    CHECK_THROWS_AS(loads(SystemModel{1, {}}), InputError);
    CHECK_THROWS_AS(loads(SystemModel{1, {{0.0, ServiceDistribution::exponential(1.0)}}}), InputError);
    CHECK_THROWS_AS(loads(SystemModel{1, {{-2.0, ServiceDistribution::exponential(1.0)}}}), InputError);
}

TEST_CASE("approximate metrics on the four-class example") {
    const SystemModel model = paper_model();
    const auto metrics = approx_metrics(model);
    REQUIRE(metrics.size() == 4);
    for (const auto& cm : metrics) CHECK(cm.stable);
    CHECK(std::abs(metrics[0].w - 0.000084) <= 2e-6);
    CHECK(std::round(metrics[0].v * 100.0) / 100.0 == doctest::Approx(0.20));
    // Exact rational evaluation of the waiting-time formula (Python fractions):
    CHECK(metrics[0].w == doctest::Approx(8.35421888053467e-05).epsilon(1e-12));
    CHECK(metrics[1].w == doctest::Approx(0.005976413636831806).epsilon(1e-12));
    CHECK(metrics[2].w == doctest::Approx(0.08338705345151759).epsilon(1e-12));
    CHECK(metrics[3].w == doctest::Approx(0.7163398692810458).epsilon(1e-12));
    CHECK(std::abs(metrics[3].w - 0.716) < 5e-4);
}

TEST_CASE("approximate metrics match the independent direct evaluation") {
    const SystemModel model = paper_model();
    const auto metrics = approx_metrics(model);
    const auto direct = oracle::approx_direct(model);
    for (std::size_t k = 0; k < metrics.size(); ++k) {
        CHECK(oracle::close_rel(metrics[k].p, static_cast<double>(direct[k].p), 1e-12));
        CHECK(oracle::close_rel(metrics[k].h, static_cast<double>(direct[k].h), 1e-12));
        CHECK(oracle::close_rel(metrics[k].g, static_cast<double>(direct[k].g), 1e-12));
        CHECK(oracle::close_rel(metrics[k].w, static_cast<double>(direct[k].w), 1e-12));
        CHECK(oracle::close_rel(metrics[k].v, static_cast<double>(direct[k].v), 1e-12));
    }
}

TEST_CASE("single-class M/M/1 reduces to the LCFS-PR sojourn time") {
    SystemModel m{1, {{1.0, ServiceDistribution::exponential(2.0)}}};
    const auto a = approx_metrics(m);
    CHECK(a[0].p == 0.0);
    CHECK(a[0].w == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(a[0].v == doctest::Approx(1.0).epsilon(1e-14));
    check_elementwise(a, exact_single_channel(m), 1e-12);
}

TEST_CASE("exact single-channel two-class example") {
    SystemModel m{1, {{0.25, ServiceDistribution::exponential(1.0)}, {0.25, ServiceDistribution::exponential(1.0)}}};
    const auto e = exact_single_channel(m);
    CHECK(e[0].w == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(e[0].v == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(e[1].w == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK(e[1].v == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
    // class-blind mean sojourn equals b / (1 - R_2)
    CHECK((e[0].v + e[1].v) / 2.0 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(e[0].u == 0.0);
    CHECK(e[0].p == 0.0);
}

TEST_CASE("exact single-channel requires one server") {
    CHECK_THROWS_AS(exact_single_channel(paper_model()), DomainError);
}

TEST_CASE("exact identical-mean M/M/m two-class example") {
    SystemModel m{3, {{1.0, ServiceDistribution::exponential(2.0)}, {1.0, ServiceDistribution::exponential(2.0)}}};
    CHECK(erlang_c(3, 1.0 / 6.0) == doctest::Approx(0.0151515).epsilon(1e-5));
    CHECK(erlang_c(3, 1.0 / 3.0) == doctest::Approx(1.0 / 11.0).epsilon(1e-13));
    const auto e = exact_mmm_identical(m);
    CHECK(e[0].w == doctest::Approx(0.0030303).epsilon(1e-4));
    CHECK(e[1].w == doctest::Approx(0.0424242).epsilon(1e-5));
    check_elementwise(approx_metrics(m), e, 1e-10);
}

TEST_CASE("exact identical-mean preconditions") {
    CHECK_THROWS_AS(exact_mmm_identical(paper_model()), DomainError);
    SystemModel det{2, {{1.0, ServiceDistribution::deterministic(0.5)}}};
    CHECK_THROWS_AS(exact_mmm_identical(det), DomainError);
    SystemModel close{2, {{1.0, ServiceDistribution::exponential(2.0)},
                          {1.0, ServiceDistribution::exponential(2.0 * (1.0 + 1e-14))}}};
    CHECK_NOTHROW(exact_mmm_identical(close));
}

TEST_CASE("both exact modes agree on single-server exponential") {
    SystemModel m{1, {{0.6, ServiceDistribution::exponential(1.5)}}};
    check_elementwise(exact_mmm_identical(m), exact_single_channel(m), 1e-12);
}

TEST_CASE("reduction to the single-channel formulas on random models") {
    std::mt19937_64 rng(20240601);
    for (int trial = 0; trial < 200; ++trial) {
        const SystemModel m = testing::random_single_server_model(rng);
        CAPTURE(trial);
        check_elementwise(approx_metrics(m), exact_single_channel(m), 1e-10);
    }
}

TEST_CASE("reduction to the identical-mean formulas on random models") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const SystemModel m = testing::random_identical_exponential_model(rng);
        CAPTURE(trial);
        check_elementwise(approx_metrics(m), exact_mmm_identical(m), 1e-10);
    }
}

TEST_CASE("identity residuals vanish for every mode") {
    std::mt19937_64 rng(5);
    auto check = [](const std::vector<IdentityResiduals>& rs) {
        for (const auto& r : rs) {
            CHECK(std::abs(r.waiting) <= 1e-12);
            CHECK(std::abs(r.sojourn) <= 1e-12);
            CHECK(std::abs(r.preemption) <= 1e-12);
        }
    };
    check(check_identities(approx_metrics(paper_model()), paper_model()));
    for (int trial = 0; trial < 100; ++trial) {
        const SystemModel a = testing::random_single_server_model(rng);
        check(check_identities(approx_metrics(a), a));
        check(check_identities(exact_single_channel(a), a));
        const SystemModel b = testing::random_identical_exponential_model(rng);
        check(check_identities(approx_metrics(b), b));
        check(check_identities(exact_mmm_identical(b), b));
    }
}

TEST_CASE("sojourn is waiting plus mean service exactly") {
    SystemModel m{1, {{0.4, ServiceDistribution::deterministic(1.0)}}};
    const auto rs = check_identities(exact_single_channel(m), m);
    CHECK(rs[0].sojourn == 0.0);
}

TEST_CASE("blocking probability is nondecreasing in the class index") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const SystemModel m = trial % 2 ? testing::random_single_server_model(rng)
                                        : testing::random_identical_exponential_model(rng);
        for (AnalyticMode mode : {AnalyticMode::approximate,
                                  m.servers == 1 ? AnalyticMode::exact_single_channel
                                                 : AnalyticMode::exact_mmm_identical}) {
            const auto cm = evaluate(m, mode);
            for (std::size_t k = 1; k < cm.size(); ++k) CHECK(cm[k].p >= cm[k - 1].p);
            for (std::size_t k = 0; k < cm.size(); ++k)
                CHECK(cm[k].v == cm[k].w + m.classes[k].service.mean());
        }
    }
}

TEST_CASE("lighter traffic never increases approximate waiting times") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        SystemModel m = testing::random_single_server_model(rng);
        m.servers = 1 + trial % 6;
        for (auto& c : m.classes) c.lambda *= m.servers;
        const auto base = approx_metrics(m);
        SystemModel lighter = m;
        const double factor = 0.05 + 0.95 * unit(rng);
        for (auto& c : lighter.classes) c.lambda *= factor;
        const auto scaled = approx_metrics(lighter);
        for (std::size_t k = 0; k < base.size(); ++k) CHECK(scaled[k].w <= base[k].w * (1.0 + 1e-12));
    }
}

TEST_CASE("unstable suffix is flagged, stable prefix still evaluated") {
    SystemModel m{2, {{1.0, ServiceDistribution::exponential(1.0)},
                      {0.5, ServiceDistribution::exponential(1.0)},
                      {1.0, ServiceDistribution::exponential(1.0)}}};
    const auto cm = approx_metrics(m);
    CHECK(cm[0].stable);
    CHECK(cm[1].stable);
    CHECK_FALSE(cm[2].stable);
    CHECK(std::isnan(cm[2].w));
    const auto rs = check_identities(cm, m);
    CHECK(std::isnan(rs[2].waiting));
    CHECK(std::abs(rs[1].waiting) <= 1e-12);

    SystemModel one{1, {{0.5, ServiceDistribution::exponential(1.0)}, {0.6, ServiceDistribution::exponential(1.0)}}};
    const auto e = exact_single_channel(one);
    CHECK(e[0].stable);
    CHECK_FALSE(e[1].stable);
}

TEST_CASE("mode names") {
    CHECK(to_string(AnalyticMode::approximate) == "approx");
    CHECK(to_string(AnalyticMode::exact_single_channel) == "exact-m1");
    CHECK(to_string(AnalyticMode::exact_mmm_identical) == "exact-mm-identical");
}
