#include "lifopr/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "lifopr/errors.hpp"

namespace lifopr {

namespace {

// Splits on blanks that are not inside parentheses.
std::vector<std::string_view> tokenize(std::string_view line) {
    std::vector<std::string_view> tokens;
    int depth = 0;
    std::size_t start = std::string_view::npos;
    for (std::size_t k = 0; k <= line.size(); ++k) {
        const char ch = k < line.size() ? line[k] : ' ';
        const bool blank = (ch == ' ' || ch == '\t' || ch == '\r') && depth == 0;
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (blank) {
            if (start != std::string_view::npos) tokens.push_back(line.substr(start, k - start));
            start = std::string_view::npos;
        } else if (start == std::string_view::npos) {
            start = k;
        }
    }
    return tokens;
}

template <class T>
T parse_number(std::string_view text, std::size_t line, std::string_view what) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
        throw ParseError(line, "malformed " + std::string(what) + " '" + std::string(text) + "'");
    return value;
}

std::pair<std::string_view, std::string_view> split_key_value(std::string_view token, std::size_t line) {
    const auto eq = token.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw ParseError(line, "expected key=value, got '" + std::string(token) + "'");
    return {token.substr(0, eq), token.substr(eq + 1)};
}

std::string format_number(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, end);
}

} // namespace

Scenario parse_scenario(std::string_view text) {
    Scenario scenario;
    bool have_servers = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto tokens = tokenize(line);
        if (tokens.empty()) continue;

        const std::string_view keyword = tokens[0];
        if (keyword == "servers") {
            if (have_servers) throw ParseError(line_no, "duplicate 'servers' line");
            if (tokens.size() != 2) throw ParseError(line_no, "expected 'servers <m>'");
            const int m = parse_number<int>(tokens[1], line_no, "server count");
            if (m < 1) throw ParseError(line_no, "server count must be >= 1");
            scenario.model.servers = m;
            have_servers = true;
        } else if (keyword == "class") {
            std::optional<double> lambda;
            std::optional<ServiceDistribution> service;
            for (std::size_t k = 1; k < tokens.size(); ++k) {
                const auto [key, value] = split_key_value(tokens[k], line_no);
                if (key == "lambda") {
                    lambda = parse_number<double>(value, line_no, "arrival rate");
                    if (!(*lambda > 0.0) || !std::isfinite(*lambda))
                        throw ParseError(line_no, "arrival rate must be > 0");
                } else if (key == "service") {
                    try {
                        service = parse_distribution(value);
                    } catch (const InputError& e) {
                        throw ParseError(line_no, e.what());
                    }
                } else {
                    throw ParseError(line_no, "unknown class key '" + std::string(key) + "'");
                }
            }
            if (!lambda) throw ParseError(line_no, "class line needs lambda=<rate>");
            if (!service) throw ParseError(line_no, "class line needs service=<distribution>");
            scenario.model.classes.push_back(ClassSpec{*lambda, *service});
        } else if (keyword == "policy") {
            for (std::size_t k = 1; k < tokens.size(); ++k) {
                const auto [key, value] = split_key_value(tokens[k], line_no);
                if (key == "within_class") {
                    if (value == "lifo") scenario.policy.within_class_order = WithinClassOrder::lifo;
                    else if (value == "fifo") scenario.policy.within_class_order = WithinClassOrder::fifo;
                    else throw ParseError(line_no, "within_class must be lifo or fifo");
                } else if (key == "preemption") {
                    if (value == "equal") scenario.policy.equal_class_preemption = true;
                    else if (value == "strict") scenario.policy.equal_class_preemption = false;
                    else throw ParseError(line_no, "preemption must be equal or strict");
                } else {
                    throw ParseError(line_no, "unknown policy key '" + std::string(key) + "'");
                }
            }
        } else if (keyword == "run") {
            for (std::size_t k = 1; k < tokens.size(); ++k) {
                const auto [key, value] = split_key_value(tokens[k], line_no);
                if (key == "seed") {
                    scenario.run.seed = parse_number<std::uint64_t>(value, line_no, "seed");
                } else if (key == "warmup") {
                    scenario.run.warmup_time = parse_number<double>(value, line_no, "warm-up time");
                    if (!(*scenario.run.warmup_time >= 0.0)) throw ParseError(line_no, "warm-up time must be >= 0");
                } else if (key == "jobs") {
                    scenario.run.jobs = parse_number<std::size_t>(value, line_no, "job count");
                    if (*scenario.run.jobs == 0) throw ParseError(line_no, "job count must be > 0");
                } else if (key == "max_time") {
                    scenario.run.max_simulated_time = parse_number<double>(value, line_no, "time cap");
                    if (!(*scenario.run.max_simulated_time > 0.0)) throw ParseError(line_no, "time cap must be > 0");
                } else {
                    throw ParseError(line_no, "unknown run key '" + std::string(key) + "'");
                }
            }
        } else {
            throw ParseError(line_no, "unknown key '" + std::string(keyword) + "'");
        }
    }
    if (!have_servers) throw ParseError(0, "scenario has no 'servers' line");
    if (scenario.model.classes.empty()) throw ParseError(0, "scenario has no 'class' lines");
    return scenario;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string render_scenario(const Scenario& scenario) {
    std::ostringstream os;
    os << "servers " << scenario.model.servers << '\n';
    for (const auto& cls : scenario.model.classes)
        os << "class lambda=" << format_number(cls.lambda) << " service=" << cls.service.to_string() << '\n';
    const auto& pol = scenario.policy;
    if (pol.within_class_order || pol.equal_class_preemption) {
        os << "policy";
        if (pol.within_class_order)
            os << " within_class=" << (*pol.within_class_order == WithinClassOrder::lifo ? "lifo" : "fifo");
        if (pol.equal_class_preemption) os << " preemption=" << (*pol.equal_class_preemption ? "equal" : "strict");
        os << '\n';
    }
    const auto& run = scenario.run;
    if (run.seed || run.warmup_time || run.jobs || run.max_simulated_time) {
        os << "run";
        if (run.seed) os << " seed=" << *run.seed;
        if (run.warmup_time) os << " warmup=" << format_number(*run.warmup_time);
        if (run.jobs) os << " jobs=" << *run.jobs;
        if (run.max_simulated_time) os << " max_time=" << format_number(*run.max_simulated_time);
        os << '\n';
    }
    return os.str();
}

} // namespace lifopr
