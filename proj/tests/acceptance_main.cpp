// Acceptance-suite driver: one line per criterion, nonzero exit on failure.
//   acceptance [--only MODULE] [--fault NAME]

#include <iostream>
#include <string>

#include "qti/acceptance.hpp"

int main(int argc, char** argv) {
    qti::acc::AcceptOptions opt;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) {
            opt.only = argv[++i];
        } else if (arg == "--fault" && i + 1 < argc) {
            opt.fault = argv[++i];
        } else {
            std::cerr << "usage: acceptance [--only MODULE] [--fault NAME]\n";
            return 2;
        }
    }
    auto results = qti::acc::run_acceptance(opt, std::cout);
    int passed = 0;
    for (const auto& c : results) passed += c.pass ? 1 : 0;
    std::cout << "acceptance: " << passed << "/" << results.size() << " criteria passed\n";
    return qti::acc::all_passed(results) ? 0 : 1;
}
