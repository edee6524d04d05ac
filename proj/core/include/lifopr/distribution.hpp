#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "lifopr/random_stream.hpp"

namespace lifopr {

struct Exponential {
    double rate;
};

struct Deterministic {
    double value;
};

struct Erlang {
    int shape;
    double rate;
};

struct HyperExponential {
    struct Branch {
        double probability;
        double rate;
    };
    std::vector<Branch> branches;
};

struct Uniform {
    double lo;
    double hi;
};

/// Service-time law of one priority class. Immutable once built; the
/// factories reject invalid parameters with InputError.
class ServiceDistribution {
public:
    using Variant = std::variant<Exponential, Deterministic, Erlang, HyperExponential, Uniform>;

    static ServiceDistribution exponential(double rate);
    static ServiceDistribution deterministic(double value);
    static ServiceDistribution erlang(int shape, double rate);
    static ServiceDistribution hyperexponential(std::vector<HyperExponential::Branch> branches);
    static ServiceDistribution uniform(double lo, double hi);

    /// Validates and wraps an already-built variant.
    explicit ServiceDistribution(Variant v);

    double mean() const;
    double second_moment() const;
    double scv() const;

    /// One variate. Consumes a fixed number of uniforms per call for every law
    /// except Erlang (shape draws) and HyperExponential (two draws).
    double sample(RandomStream& rng) const;

    const Variant& law() const noexcept { return law_; }

    bool is_exponential() const noexcept { return std::holds_alternative<Exponential>(law_); }

    /// Textual form accepted by parse_distribution(); numbers use the shortest
    /// representation that round-trips exactly.
    std::string to_string() const;

    friend bool operator==(const ServiceDistribution& a, const ServiceDistribution& b);

private:
    Variant law_;
};

bool operator==(const Exponential& a, const Exponential& b);
bool operator==(const Deterministic& a, const Deterministic& b);
bool operator==(const Erlang& a, const Erlang& b);
bool operator==(const HyperExponential& a, const HyperExponential& b);
bool operator==(const Uniform& a, const Uniform& b);

/// Parses `exp(rate)`, `det(value)`, `erlang(shape,rate)`,
/// `hyperexp(p1:r1,p2:r2,...)` or `uniform(lo,hi)`. Whitespace around tokens
/// is ignored. Throws InputError on malformed text or invalid parameters.
ServiceDistribution parse_distribution(std::string_view text);

} // namespace lifopr
