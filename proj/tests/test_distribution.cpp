#include <doctest.h>

#include <cmath>
#include <vector>

#include "lifopr/distribution.hpp"
#include "lifopr/errors.hpp"

using namespace lifopr;

namespace {

std::vector<ServiceDistribution> sample_laws() {
    return {
        ServiceDistribution::exponential(5.0),
        ServiceDistribution::deterministic(0.5),
        ServiceDistribution::erlang(2, 4.0),
        ServiceDistribution::erlang(7, 3.5),
        ServiceDistribution::hyperexponential({{0.5, 1.0}, {0.5, 2.0}}),
        ServiceDistribution::hyperexponential({{0.1, 0.25}, {0.6, 3.0}, {0.3, 8.0}}),
        ServiceDistribution::uniform(0.0, 1.0),
        ServiceDistribution::uniform(0.25, 2.0),
    };
}

} // namespace

TEST_CASE("exact first moments") {
    CHECK(ServiceDistribution::exponential(5.0).mean() == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(ServiceDistribution::deterministic(0.5).mean() == 0.5);
    CHECK(ServiceDistribution::erlang(2, 4.0).mean() == 0.5);
    CHECK(ServiceDistribution::uniform(1.0, 3.0).mean() == 2.0);
}

TEST_CASE("exact second moments") {
    CHECK(ServiceDistribution::exponential(5.0).second_moment() == doctest::Approx(0.08).epsilon(1e-15));
    CHECK(ServiceDistribution::deterministic(0.5).second_moment() == 0.25);
    CHECK(ServiceDistribution::erlang(2, 4.0).second_moment() == 0.375);
    CHECK(ServiceDistribution::hyperexponential({{0.5, 1.0}, {0.5, 2.0}}).second_moment() == 1.25);
    CHECK(ServiceDistribution::uniform(0.0, 3.0).second_moment() == doctest::Approx(3.0));
}

TEST_CASE("second moment dominates squared mean") {
    for (const auto& d : sample_laws()) CHECK(d.second_moment() >= d.mean() * d.mean());
}

TEST_CASE("squared coefficient of variation spans below, at and above one") {
    CHECK(ServiceDistribution::deterministic(1.0).scv() == 0.0);
    CHECK(ServiceDistribution::erlang(4, 1.0).scv() == doctest::Approx(0.25));
    CHECK(ServiceDistribution::exponential(3.0).scv() == doctest::Approx(1.0));
    CHECK(ServiceDistribution::hyperexponential({{0.5, 1.0}, {0.5, 2.0}}).scv() > 1.0);
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(ServiceDistribution::exponential(0.0), InputError);
    CHECK_THROWS_AS(ServiceDistribution::exponential(-1.0), InputError);
    CHECK_THROWS_AS(ServiceDistribution::deterministic(0.0), InputError);
    CHECK_THROWS_AS(ServiceDistribution::erlang(0, 1.0), InputError);
    CHECK_THROWS_AS(ServiceDistribution::uniform(2.0, 1.0), InputError);
    CHECK_THROWS_AS(ServiceDistribution::uniform(-0.5, 1.0), InputError);
    CHECK_THROWS_AS(ServiceDistribution::hyperexponential({}), InputError);
    CHECK_THROWS_AS(ServiceDistribution::hyperexponential({{0.5, 1.0}, {0.4, 2.0}}), InputError);
    CHECK_THROWS_AS(ServiceDistribution::hyperexponential({{0.0, 1.0}, {1.0, 2.0}}), InputError);
    CHECK_NOTHROW(ServiceDistribution::hyperexponential({{0.3, 1.0}, {0.7 + 5e-13, 2.0}}));
}

TEST_CASE("deterministic sampling returns the point mass") {
    RandomStream rng(42);
    const auto d = ServiceDistribution::deterministic(0.5);
    for (int k = 0; k < 10; ++k) CHECK(d.sample(rng) == 0.5);
}

TEST_CASE("exponential sample mean converges") {
    RandomStream rng(7);
    const auto d = ServiceDistribution::exponential(5.0);
    double sum = 0.0;
    const int n = 1000000;
    for (int k = 0; k < n; ++k) sum += d.sample(rng);
    CHECK(std::abs(sum / n - 0.2) < 0.002);
}

TEST_CASE("erlang sample second moment converges") {
    RandomStream rng(11);
    const auto d = ServiceDistribution::erlang(2, 4.0);
    double sum2 = 0.0;
    const int n = 1000000;
    for (int k = 0; k < n; ++k) {
        const double x = d.sample(rng);
        sum2 += x * x;
    }
    CHECK(std::abs(sum2 / n - 0.375) < 0.01 * 0.375);
}

TEST_CASE("empirical moments within three standard errors for every law") {
    const int n = 1000000;
    std::uint64_t seed = 1000;
    for (const auto& d : sample_laws()) {
        CAPTURE(d.to_string());
        RandomStream rng(seed++);
        double s1 = 0.0, s2 = 0.0, s4 = 0.0;
        for (int k = 0; k < n; ++k) {
            const double x = d.sample(rng);
            s1 += x;
            s2 += x * x;
            s4 += x * x * x * x;
        }
        const double m1 = s1 / n, m2 = s2 / n, m4 = s4 / n;
        const double se1 = std::sqrt(std::max(m2 - m1 * m1, 0.0) / n);
        const double se2 = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
        CHECK(std::abs(m1 - d.mean()) <= 3.0 * se1 + 1e-15);
        CHECK(std::abs(m2 - d.second_moment()) <= 3.0 * se2 + 1e-15);
    }
}

TEST_CASE("identical seeds give bit-identical variate sequences") {
    for (const auto& d : sample_laws()) {
        RandomStream a(99), b(99);
        for (int k = 0; k < 1000; ++k) REQUIRE(d.sample(a) == d.sample(b));
    }
}

TEST_CASE("sub-streams are reproducible and distinct") {
    const RandomStream root(5);
    RandomStream s0 = root.substream(0), s0again = root.substream(0), s1 = root.substream(1);
    CHECK(s0.seed() == s0again.seed());
    CHECK(s0.seed() != s1.seed());
    CHECK(s0.next_u64() == s0again.next_u64());
    CHECK(derive_seed(5, 0) != derive_seed(6, 0));
}

TEST_CASE("uniform_open0 stays in (0,1]") {
    RandomStream rng(3);
    for (int k = 0; k < 100000; ++k) {
        const double u = rng.uniform_open0();
        REQUIRE(u > 0.0);
        REQUIRE(u <= 1.0);
    }
}

TEST_CASE("distribution text round-trips") {
    for (const auto& d : sample_laws()) CHECK(parse_distribution(d.to_string()) == d);
    CHECK(parse_distribution("exp(1.6666666666666667)") ==
          ServiceDistribution::exponential(1.6666666666666667));
    CHECK(parse_distribution(" hyperexp( 0.5:1 , 0.5:2 ) ") ==
          ServiceDistribution::hyperexponential({{0.5, 1.0}, {0.5, 2.0}}));
}

TEST_CASE("malformed distribution text") {
    CHECK_THROWS_AS(parse_distribution("exp"), InputError);
    CHECK_THROWS_AS(parse_distribution("exp()"), InputError);
    CHECK_THROWS_AS(parse_distribution("exp(1,2)"), InputError);
    CHECK_THROWS_AS(parse_distribution("gamma(1,2)"), InputError);
    CHECK_THROWS_AS(parse_distribution("erlang(1.5,2)"), InputError);
    CHECK_THROWS_AS(parse_distribution("hyperexp(0.5,0.5)"), InputError);
    CHECK_THROWS_AS(parse_distribution("det(abc)"), InputError);
    CHECK_THROWS_AS(parse_distribution("exp(-3)"), InputError);
}
