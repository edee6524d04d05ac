#include "lifopr/distribution.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "lifopr/errors.hpp"

namespace lifopr {

namespace {

constexpr double kProbabilitySumTolerance = 1e-12;

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

void validate(const Exponential& d) {
    if (!positive_finite(d.rate)) throw InputError("exponential rate must be > 0");
}

void validate(const Deterministic& d) {
    if (!positive_finite(d.value)) throw InputError("deterministic value must be > 0");
}

void validate(const Erlang& d) {
    if (d.shape < 1) throw InputError("erlang shape must be a positive integer");
    if (!positive_finite(d.rate)) throw InputError("erlang rate must be > 0");
}

void validate(const HyperExponential& d) {
    if (d.branches.empty()) throw InputError("hyperexponential needs at least one branch");
    double total = 0.0;
    for (const auto& b : d.branches) {
        if (!(b.probability > 0.0 && b.probability <= 1.0))
            throw InputError("hyperexponential branch probability must be in (0,1]");
        if (!positive_finite(b.rate)) throw InputError("hyperexponential branch rate must be > 0");
        total += b.probability;
    }
    if (std::abs(total - 1.0) > kProbabilitySumTolerance)
        throw InputError("hyperexponential branch probabilities must sum to 1");
}

void validate(const Uniform& d) {
    if (!(std::isfinite(d.lo) && std::isfinite(d.hi) && d.lo >= 0.0 && d.lo < d.hi))
        throw InputError("uniform bounds must satisfy 0 <= lo < hi");
}

std::string format_number(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, end);
}

double exponential_variate(RandomStream& rng, double rate) {
    return -std::log(rng.uniform_open0()) / rate;
}

} // namespace

ServiceDistribution::ServiceDistribution(Variant v) : law_(std::move(v)) {
    std::visit([](const auto& d) { validate(d); }, law_);
}

ServiceDistribution ServiceDistribution::exponential(double rate) {
    return ServiceDistribution(Exponential{rate});
}

ServiceDistribution ServiceDistribution::deterministic(double value) {
    return ServiceDistribution(Deterministic{value});
}

ServiceDistribution ServiceDistribution::erlang(int shape, double rate) {
    return ServiceDistribution(Erlang{shape, rate});
}

ServiceDistribution ServiceDistribution::hyperexponential(std::vector<HyperExponential::Branch> branches) {
    return ServiceDistribution(HyperExponential{std::move(branches)});
}

ServiceDistribution ServiceDistribution::uniform(double lo, double hi) {
    return ServiceDistribution(Uniform{lo, hi});
}

double ServiceDistribution::mean() const {
    return std::visit(Overloaded{
                          [](const Exponential& d) { return 1.0 / d.rate; },
                          [](const Deterministic& d) { return d.value; },
                          [](const Erlang& d) { return d.shape / d.rate; },
                          [](const HyperExponential& d) {
                              double m = 0.0;
                              for (const auto& b : d.branches) m += b.probability / b.rate;
                              return m;
                          },
                          [](const Uniform& d) { return 0.5 * (d.lo + d.hi); },
                      },
                      law_);
}

double ServiceDistribution::second_moment() const {
    return std::visit(Overloaded{
                          [](const Exponential& d) { return 2.0 / (d.rate * d.rate); },
                          [](const Deterministic& d) { return d.value * d.value; },
                          [](const Erlang& d) { return d.shape * (d.shape + 1.0) / (d.rate * d.rate); },
                          [](const HyperExponential& d) {
                              double m2 = 0.0;
                              for (const auto& b : d.branches) m2 += b.probability * 2.0 / (b.rate * b.rate);
                              return m2;
                          },
                          [](const Uniform& d) { return (d.lo * d.lo + d.lo * d.hi + d.hi * d.hi) / 3.0; },
                      },
                      law_);
}

double ServiceDistribution::scv() const {
    const double m = mean();
    return second_moment() / (m * m) - 1.0;
}

double ServiceDistribution::sample(RandomStream& rng) const {
    return std::visit(Overloaded{
                          [&](const Exponential& d) { return exponential_variate(rng, d.rate); },
                          [](const Deterministic& d) { return d.value; },
                          [&](const Erlang& d) {
                              double sum = 0.0;
                              for (int k = 0; k < d.shape; ++k) sum += exponential_variate(rng, d.rate);
                              return sum;
                          },
                          [&](const HyperExponential& d) {
                              const double pick = rng.uniform_open0();
                              double cumulative = 0.0;
                              const auto* chosen = &d.branches.back();
                              for (const auto& b : d.branches) {
                                  cumulative += b.probability;
                                  if (pick <= cumulative) {
                                      chosen = &b;
                                      break;
                                  }
                              }
                              return exponential_variate(rng, chosen->rate);
                          },
                          [&](const Uniform& d) { return d.hi - (d.hi - d.lo) * rng.uniform_open0(); },
                      },
                      law_);
}

std::string ServiceDistribution::to_string() const {
    return std::visit(Overloaded{
                          [](const Exponential& d) { return "exp(" + format_number(d.rate) + ")"; },
                          [](const Deterministic& d) { return "det(" + format_number(d.value) + ")"; },
                          [](const Erlang& d) {
                              return "erlang(" + std::to_string(d.shape) + "," + format_number(d.rate) + ")";
                          },
                          [](const HyperExponential& d) {
                              std::string s = "hyperexp(";
                              for (std::size_t k = 0; k < d.branches.size(); ++k) {
                                  if (k > 0) s += ',';
                                  s += format_number(d.branches[k].probability) + ":" +
                                       format_number(d.branches[k].rate);
                              }
                              return s + ")";
                          },
                          [](const Uniform& d) {
                              return "uniform(" + format_number(d.lo) + "," + format_number(d.hi) + ")";
                          },
                      },
                      law_);
}

bool operator==(const Exponential& a, const Exponential& b) { return a.rate == b.rate; }
bool operator==(const Deterministic& a, const Deterministic& b) { return a.value == b.value; }
bool operator==(const Erlang& a, const Erlang& b) { return a.shape == b.shape && a.rate == b.rate; }
bool operator==(const Uniform& a, const Uniform& b) { return a.lo == b.lo && a.hi == b.hi; }

bool operator==(const HyperExponential& a, const HyperExponential& b) {
    if (a.branches.size() != b.branches.size()) return false;
    for (std::size_t k = 0; k < a.branches.size(); ++k) {
        if (a.branches[k].probability != b.branches[k].probability || a.branches[k].rate != b.branches[k].rate)
            return false;
    }
    return true;
}

bool operator==(const ServiceDistribution& a, const ServiceDistribution& b) { return a.law_ == b.law_; }

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text) {
    const auto t = trim(text);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw InputError("malformed number '" + std::string(t) + "'");
    return value;
}

int parse_int(std::string_view text) {
    const auto t = trim(text);
    int value = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw InputError("malformed integer '" + std::string(t) + "'");
    return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

} // namespace

ServiceDistribution parse_distribution(std::string_view text) {
    const auto t = trim(text);
    const auto open = t.find('(');
    if (open == std::string_view::npos || t.back() != ')')
        throw InputError("malformed distribution '" + std::string(t) + "'");
    const auto name = trim(t.substr(0, open));
    const auto args = split(t.substr(open + 1, t.size() - open - 2), ',');

    auto expect_args = [&](std::size_t n) {
        if (args.size() != n)
            throw InputError(std::string(name) + "() takes " + std::to_string(n) + " argument(s)");
    };

    if (name == "exp") {
        expect_args(1);
        return ServiceDistribution::exponential(parse_double(args[0]));
    }
    if (name == "det") {
        expect_args(1);
        return ServiceDistribution::deterministic(parse_double(args[0]));
    }
    if (name == "erlang") {
        expect_args(2);
        return ServiceDistribution::erlang(parse_int(args[0]), parse_double(args[1]));
    }
    if (name == "uniform") {
        expect_args(2);
        return ServiceDistribution::uniform(parse_double(args[0]), parse_double(args[1]));
    }
    if (name == "hyperexp") {
        std::vector<HyperExponential::Branch> branches;
        for (auto arg : args) {
            const auto colon = arg.find(':');
            if (colon == std::string_view::npos)
                throw InputError("hyperexp branch must be written p:rate");
            branches.push_back({parse_double(arg.substr(0, colon)), parse_double(arg.substr(colon + 1))});
        }
        return ServiceDistribution::hyperexponential(std::move(branches));
    }
    throw InputError("unknown distribution '" + std::string(name) + "'");
}

} // namespace lifopr
