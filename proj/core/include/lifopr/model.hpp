#pragma once

#include <cstddef>
#include <vector>

#include "lifopr/distribution.hpp"

namespace lifopr {

/// One priority class: Poisson arrival rate and service-time law.
struct ClassSpec {
    double lambda;
    ServiceDistribution service;

    friend bool operator==(const ClassSpec&, const ClassSpec&) = default;
};

/// m identical servers fed by N priority classes. classes[0] is the highest
/// priority (class 1), classes.back() the lowest (class N).
struct SystemModel {
    int servers = 1;
    std::vector<ClassSpec> classes;

    std::size_t class_count() const noexcept { return classes.size(); }

    /// 1-based class access, matching the priority numbering.
    const ClassSpec& priority(std::size_t i) const { return classes.at(i - 1); }

    /// Throws InputError unless servers >= 1, at least one class, and every
    /// lambda is finite and > 0.
    void validate() const;

    friend bool operator==(const SystemModel&, const SystemModel&) = default;
};

} // namespace lifopr
