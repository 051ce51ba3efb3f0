// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Run directly or through ctest.

#include <cstdio>

#include "qcprop/validate.hpp"

int main() {
    const auto checks = qcprop::run_acceptance_criteria();
    int failures = 0;
    for (const auto& c : checks) {
        std::printf("%s  %s  (measured %.3e, tolerance %.3e)%s%s\n",
                    c.pass ? "[PASS]" : "[FAIL]", c.name.c_str(), c.measured, c.threshold,
                    c.detail.empty() ? "" : "  ", c.detail.c_str());
        if (!c.pass) ++failures;
    }
    std::printf("%d/%zu acceptance checks passed\n", static_cast<int>(checks.size()) - failures,
                checks.size());
    return failures == 0 ? 0 : 1;
}
