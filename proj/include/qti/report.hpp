#pragma once

// Deterministic JSON / CSV / pretty serialization of report rows.
//
// Formatting contract (fixed so that identical jobs produce byte-identical
// output):
//   * decimals are printed with %.12g and carried as JSON strings,
//   * exact integers are decimal strings (they may exceed 64 bits),
//   * exact-zero rows print "-inf" for log|Trace|/n,
//   * JSON field order is fixed (nlohmann::ordered_json),
//   * timings are attached only on request, since they are nondeterministic.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qti/cyclotomic.hpp"
#include "qti/intertwiner.hpp"

namespace qti::io {

using nlohmann::ordered_json;

// %.12g
std::string g12(double x);

// {"order": N, "terms": [[exponent, coefficient-as-decimal-string], ...]},
// canonical form, exponents ascending.
ordered_json cycint_json(const cyc::CycInt& z);

// One report row.  seconds is attached as "seconds" only when present.
ordered_json row_json(const itw::SweepRow& row, std::optional<double> seconds = std::nullopt);

// Header `n,abs_trace,abs_trace_sq_exact,log_trace_over_n,is_exact_zero,path`
// plus one line per row; numeric fields match the JSON output byte for byte.
std::string sweep_csv(const std::vector<itw::SweepRow>& rows);

// {"job": {...}, "rows": [...], "summary": {"max_log_trace_over_n": x,
//  "zeros": [n...], "all_verified": bool}}
ordered_json report_json(const ordered_json& job, const std::vector<itw::SweepRow>& rows,
                         bool all_verified,
                         const std::vector<std::optional<double>>& timings = {});

// Human-readable rendering of a report built by report_json.
std::string pretty_report(const ordered_json& report);

// {"error": code-name, "message": ...}
std::string error_json(const Error& e);

}  // namespace qti::io
