// Deterministic CSV serialization of report rows (fixed column order,
// shortest round-trip decimals, LF line endings).
#pragma once

#include <string>
#include <vector>

#include "rdsym/experiments.hpp"

namespace rdsym {

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

inline constexpr const char* kReportCsvHeader =
    "t,theta,R_i,cx_i,cy_i,R_e,cx_e,cy_e,r_origin,gap,star_shaped,max_polar_slope,radial_dev,"
    "solution_id";

std::string report_rows_to_csv(const std::vector<ReportRow>& rows);

// Parses a report.csv back into rows. Runtime-only fields stay absent.
std::vector<ReportRow> parse_report_csv(const std::string& text);

} // namespace rdsym
