#include "rdsym/csv_io.hpp"

#include <charconv>
#include <cstdlib>
#include <sstream>

namespace rdsym {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::string cell(const std::optional<bool>& v) { return v ? (*v ? "1" : "0") : ""; }

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

std::optional<double> parse_cell(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return std::strtod(s.c_str(), nullptr);
}

std::optional<bool> parse_bool_cell(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return s != "0";
}

} // namespace

std::string report_rows_to_csv(const std::vector<ReportRow>& rows) {
    std::string out = kReportCsvHeader;
    out += '\n';
    for (const ReportRow& row : rows) {
        const GeometrySummary& s = row.summary;
        out += format_double(s.time);
        out += ',';
        out += format_double(s.theta);
        out += ',';
        out += cell(s.R_i);
        out += ',';
        out += s.center_i ? format_double(s.center_i->x) : "";
        out += ',';
        out += s.center_i ? format_double(s.center_i->y) : "";
        out += ',';
        out += cell(s.R_e);
        out += ',';
        out += s.center_e ? format_double(s.center_e->x) : "";
        out += ',';
        out += s.center_e ? format_double(s.center_e->y) : "";
        out += ',';
        out += cell(s.r_origin);
        out += ',';
        out += cell(s.gap);
        out += ',';
        out += cell(s.star_shaped);
        out += ',';
        out += cell(s.max_polar_slope);
        out += ',';
        out += cell(s.radial_dev);
        out += ',';
        out += row.solution_id;
        out += '\n';
    }
    return out;
}

std::vector<ReportRow> parse_report_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kReportCsvHeader)
        throw ContractViolation("parse_report_csv: unexpected header row");

    std::vector<ReportRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != 14)
            throw ContractViolation("parse_report_csv: expected 14 columns, got " +
                                    std::to_string(cells.size()));
        ReportRow row;
        GeometrySummary& s = row.summary;
        s.time = parse_cell(cells[0]).value_or(0.0);
        s.theta = parse_cell(cells[1]).value_or(0.0);
        s.R_i = parse_cell(cells[2]);
        const auto cx_i = parse_cell(cells[3]), cy_i = parse_cell(cells[4]);
        if (cx_i && cy_i) s.center_i = Vec2{*cx_i, *cy_i};
        s.R_e = parse_cell(cells[5]);
        const auto cx_e = parse_cell(cells[6]), cy_e = parse_cell(cells[7]);
        if (cx_e && cy_e) s.center_e = Vec2{*cx_e, *cy_e};
        s.r_origin = parse_cell(cells[8]);
        s.gap = parse_cell(cells[9]);
        s.star_shaped = parse_bool_cell(cells[10]);
        s.max_polar_slope = parse_cell(cells[11]);
        s.radial_dev = parse_cell(cells[12]);
        row.solution_id = cells[13];
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace rdsym
