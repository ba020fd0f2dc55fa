#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "fitkit/data.hpp"
#include "fitkit/errors.hpp"
#include "fitkit/metrics.hpp"
#include "fitkit/models.hpp"

namespace fitkit {

struct ReportEntry {
    std::string model_id;
    ParamVector params;
    bool converged = false;
    std::string termination_reason;
    int start_index = 0;
    std::optional<FitStatistics> statistics;  // absent when every start failed
};

// Machine-readable fit report: dataset descriptor, per-model entries and
// the ranking.
struct Report {
    std::string source;  // file path or scenario id
    std::size_t n = 0;
    double sst = 0.0;
    std::vector<ReportEntry> entries;
    std::vector<std::string> ranking;
    std::string version;
    std::uint64_t seed = 0;
};

// Shortest round-trip decimal form (std::to_chars); parsing it back gives
// the identical double.
std::string format_double(double v);

// Lines of the form `t,y`; optional `t,y` header; `#` starts a comment.
TimeSeries read_csv(std::istream& in);
TimeSeries read_csv_file(const std::string& path);

std::string write_report(const Report& report);  // deterministic JSON document
Report read_report(const std::string& json_text);

// steps+1 CSV rows `t,y` on the uniform grid over [t_start, t_end].
std::string emit_curve(const std::string& model_id, const ParamVector& params, double t_start,
                       double t_end, std::size_t steps);

}  // namespace fitkit
