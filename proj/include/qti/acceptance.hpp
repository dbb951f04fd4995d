#pragma once

// Acceptance suite: twelve end-to-end criteria over the exact constructions,
// each printing one pass/fail line with its measured values.  Tolerances and
// runtime budgets are pinned here, not configurable.

#include <iosfwd>
#include <string>
#include <vector>

namespace qti::acc {

struct Criterion {
    int id = 0;
    std::string module;  // intertwiner | gauss | torus_rep | punctured | sweep
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptOptions {
    std::string only;   // restrict to one module; empty = run everything
    std::string fault;  // testing knob: "gauss" corrupts one expected value to
                        // exercise the failure path of the driver
};

// Runs the (filtered) criteria in order, streaming one line per criterion to
// `out`.  A criterion that throws is recorded as failed with the message.
std::vector<Criterion> run_acceptance(const AcceptOptions& opt, std::ostream& out);

// True when every criterion passed (callers map this to the exit code).
bool all_passed(const std::vector<Criterion>& results);

}  // namespace qti::acc
