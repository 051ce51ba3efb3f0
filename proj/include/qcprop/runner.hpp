#pragma once

#include <map>
#include <optional>

#include "qcprop/config.hpp"
#include "qcprop/semiclassics.hpp"

namespace qcprop {

// One propagation outcome, serializable to JSON lines or CSV.  Failures are
// carried as error codes so a sweep never aborts on a bad point.
struct ResultRecord {
    json input_echo;
    std::optional<cplx> qc;
    std::optional<cplx> exact;
    std::optional<double> rel_error;
    ActionBreakdown action;
    cplx prefactor{};
    cplx reduced{};
    int branch = 0;
    double residual = 0.0;
    bool qc_only = false;
    std::string error_code;
    std::string error_message;
    double wall_ms = 0.0;
    std::map<std::string, double> diagnostics;
    std::vector<std::pair<std::string, double>> swept;  // axis path -> value
};

// Representations larger than this skip the exact comparison.
inline constexpr int kOracleDimensionCap = 10000;

ResultRecord run_propagate(const ExperimentConfig& cfg);
std::vector<ResultRecord> run_sweep(const ExperimentConfig& cfg, int parallel = 1);

struct ConvergenceReport {
    double slope = 0.0;
    double intercept = 0.0;
    double fit_residual = 0.0;
    bool exact_family = false;
    std::vector<std::pair<double, double>> points;  // (weight, rel_error)
    std::vector<ResultRecord> records;
};
ConvergenceReport run_convergence(const ExperimentConfig& cfg, int parallel = 1);

json record_to_json(const ResultRecord& r, bool with_timing = false);
std::string records_to_csv(const std::vector<ResultRecord>& records);
json convergence_to_json(const ConvergenceReport& rep);

} // namespace qcprop
