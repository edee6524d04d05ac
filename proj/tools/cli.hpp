#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lifopr/analytic.hpp"
#include "lifopr/statistics.hpp"

namespace lifopr::cli {

enum ExitCode : int {
    kOk = 0,
    kUsageError = 1,
    kDomainError = 2,
    kTruncated = 3,
};

enum class Format { table, csv };

/// Entry point behind the `lifopr` binary. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

void render_analytic(std::ostream& os, const std::vector<ClassMetrics>& metrics, Format format);
void render_simulation(std::ostream& os, const SimulationReport& report, Format format);
void render_comparison(std::ostream& os, const std::vector<ComparisonRow>& rows, Format format);

inline constexpr const char* kComparisonCsvHeader = "class,metric,analytic,sim_mean,sim_ci95,abs_err,rel_err,covered";

} // namespace lifopr::cli
