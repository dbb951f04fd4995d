#include "qti/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace qti::io {

namespace {

std::string log_field(const itw::SweepRow& row) {
    return row.is_exact_zero ? std::string("-inf") : g12(row.log_trace_over_n);
}

std::string sq_field(const itw::SweepRow& row) {
    return row.abs_trace_sq_exact.has_value() ? row.abs_trace_sq_exact->str() : std::string();
}

}  // namespace

std::string g12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

ordered_json cycint_json(const cyc::CycInt& z) {
    ordered_json terms = ordered_json::array();
    for (const auto& [e, c] : z.canonical_terms()) {
        terms.push_back(ordered_json::array({e, c}));
    }
    return ordered_json{{"order", z.order()}, {"terms", terms}};
}

ordered_json row_json(const itw::SweepRow& row, std::optional<double> seconds) {
    ordered_json j;
    j["n"] = row.n;
    j["abs_trace"] = g12(row.abs_trace);
    if (row.abs_trace_sq_exact.has_value()) {
        j["abs_trace_sq_exact"] = row.abs_trace_sq_exact->str();
    } else {
        j["abs_trace_sq_exact"] = nullptr;
    }
    j["log_trace_over_n"] = log_field(row);
    j["is_exact_zero"] = row.is_exact_zero;
    j["path"] = row.path;
    if (!row.variant.empty()) j["variant_matched"] = row.variant;
    if (seconds.has_value()) j["seconds"] = g12(*seconds);
    return j;
}

std::string sweep_csv(const std::vector<itw::SweepRow>& rows) {
    std::ostringstream out;
    out << "n,abs_trace,abs_trace_sq_exact,log_trace_over_n,is_exact_zero,path\n";
    for (const auto& row : rows) {
        out << row.n << ',' << g12(row.abs_trace) << ',' << sq_field(row) << ','
            << log_field(row) << ',' << (row.is_exact_zero ? 1 : 0) << ',' << row.path << '\n';
    }
    return out.str();
}

ordered_json report_json(const ordered_json& job, const std::vector<itw::SweepRow>& rows,
                         bool all_verified, const std::vector<std::optional<double>>& timings) {
    ordered_json out;
    out["job"] = job;
    ordered_json jr = ordered_json::array();
    for (size_t i = 0; i < rows.size(); ++i) {
        jr.push_back(row_json(rows[i], i < timings.size() ? timings[i] : std::nullopt));
    }
    out["rows"] = jr;

    double max_log = -HUGE_VAL;
    bool any_finite = false;
    ordered_json zeros = ordered_json::array();
    for (const auto& row : rows) {
        if (row.is_exact_zero) {
            zeros.push_back(row.n);
        } else {
            any_finite = true;
            max_log = std::max(max_log, row.log_trace_over_n);
        }
    }
    ordered_json summary;
    summary["max_log_trace_over_n"] = any_finite ? ordered_json(g12(max_log)) : ordered_json("-inf");
    summary["zeros"] = zeros;
    summary["all_verified"] = all_verified;
    out["summary"] = summary;
    return out;
}

std::string pretty_report(const ordered_json& report) {
    std::ostringstream out;
    out << "job: " << report.at("job").dump() << "\n";
    out << "  n   abs_trace        |trace|^2   log|trace|/n     path\n";
    for (const auto& row : report.at("rows")) {
        char line[160];
        const std::string sq = row.at("abs_trace_sq_exact").is_null()
                                   ? "-"
                                   : row.at("abs_trace_sq_exact").get<std::string>();
        std::snprintf(line, sizeof(line), "%5lld  %-15s  %-10s  %-15s  %s\n",
                      row.at("n").get<long long>(),
                      row.at("abs_trace").get<std::string>().c_str(), sq.c_str(),
                      row.at("log_trace_over_n").get<std::string>().c_str(),
                      row.at("path").get<std::string>().c_str());
        out << line;
    }
    const auto& s = report.at("summary");
    out << "summary: max log|trace|/n = " << s.at("max_log_trace_over_n").get<std::string>()
        << ", zeros = " << s.at("zeros").dump()
        << ", all_verified = " << (s.at("all_verified").get<bool>() ? "true" : "false") << "\n";
    return out.str();
}

std::string error_json(const Error& e) {
    ordered_json j{{"error", err_name(e.code)}, {"message", e.what()}};
    return j.dump();
}

}  // namespace qti::io
