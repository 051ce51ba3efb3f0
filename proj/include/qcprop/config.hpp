#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcprop/dynamics.hpp"

namespace qcprop {

using json = nlohmann::ordered_json;

enum class RunMode { Propagate, Sweep, Convergence, Validate };

struct SweepAxis {
    std::string path;                // dotted path into the config, "geometry.weight"
    std::vector<double> values;
};

struct ExperimentConfig {
    RunMode mode = RunMode::Propagate;
    PhaseSpaceGeometry geometry = PhaseSpaceGeometry::plane(1.0);
    HamiltonianSpec hamiltonian;
    BoundaryData boundary;
    SolverSettings solver;
    int oracle_nmax = 0;             // 0 picks the per-algebra default
    std::optional<double> alpha;     // flat-case quantization scheme
    std::vector<SweepAxis> sweep;
    json raw;                        // original document, mutated by sweeps
};

PhaseSpaceGeometry parse_geometry(const json& j);
HamiltonianSpec parse_hamiltonian(const json& j, Algebra algebra);
ExperimentConfig parse_config(const json& j);
ExperimentConfig parse_config_file(const std::string& path);

// Built-in default used when `validate` runs without a config file.
json default_config_json();

// Assign a numeric leaf addressed by a dotted path ("hamiltonian.0.coeff.re").
void set_json_path(json& j, const std::string& path, double value);

cplx parse_complex(const json& j);
json complex_to_json(cplx v);

} // namespace qcprop
