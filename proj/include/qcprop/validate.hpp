#pragma once

#include <string>
#include <vector>

namespace qcprop {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;   // worst defect observed
    double threshold = 0.0;
    std::string detail;
};

// Per-module invariant suites.
std::vector<CheckResult> run_geometry_checks();
std::vector<CheckResult> run_symbol_checks();
std::vector<CheckResult> run_exact_checks();
std::vector<CheckResult> run_dynamics_checks();
std::vector<CheckResult> run_action_checks();
std::vector<CheckResult> run_semiclassics_checks();
std::vector<CheckResult> run_runner_checks();

// The eight acceptance criteria, pinned tolerances included.
std::vector<CheckResult> run_acceptance_criteria();

// Everything, in a deterministic order.
std::vector<CheckResult> run_all_checks();

std::string format_check_line(const CheckResult& c);

} // namespace qcprop
