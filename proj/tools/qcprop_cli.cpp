// Batch front-end: single propagations, parameter sweeps, convergence fits
// and the validation suite, with JSON-lines or CSV output.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "qcprop/runner.hpp"
#include "qcprop/validate.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::string format = "jsonl";
    int parallel = 1;
    double tol = 0.0;
    bool timing = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool config_required) {
    auto* c = cmd->add_option("--config", o.config_path, "experiment config (JSON)");
    if (config_required) c->required();
    cmd->add_option("--out", o.out_path, "output file (default stdout)");
    cmd->add_option("--format", o.format, "jsonl|csv")->check(CLI::IsMember({"jsonl", "csv"}));
    cmd->add_option("--parallel", o.parallel, "worker threads for sweeps")->check(CLI::PositiveNumber);
    cmd->add_option("--tol", o.tol, "override solver tolerance");
    cmd->add_flag("--timing", o.timing, "include wall time in records");
}

std::ostream& open_sink(const CommonOpts& o, std::ofstream& file) {
    if (o.out_path.empty()) return std::cout;
    file.open(o.out_path);
    if (!file) {
        std::cerr << "cannot open " << o.out_path << "\n";
        std::exit(2);
    }
    return file;
}

qcprop::ExperimentConfig load(const CommonOpts& o) {
    qcprop::ExperimentConfig cfg = o.config_path.empty()
        ? qcprop::parse_config(qcprop::default_config_json())
        : qcprop::parse_config_file(o.config_path);
    if (o.tol > 0.0) cfg.solver.tol = o.tol;
    return cfg;
}

void emit_records(const std::vector<qcprop::ResultRecord>& records, const CommonOpts& o) {
    std::ofstream file;
    std::ostream& out = open_sink(o, file);
    if (o.format == "csv") {
        out << qcprop::records_to_csv(records);
    } else {
        for (const auto& r : records) out << qcprop::record_to_json(r, o.timing).dump() << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasiclassical coherent-state propagator"};
    app.require_subcommand(1);

    CommonOpts prop_o, sweep_o, conv_o, val_o;
    auto* cmd_prop = app.add_subcommand("propagate", "single propagation with the exact cross-check");
    add_common(cmd_prop, prop_o, true);
    auto* cmd_sweep = app.add_subcommand("sweep", "Cartesian parameter sweep");
    add_common(cmd_sweep, sweep_o, true);
    auto* cmd_conv = app.add_subcommand("convergence", "error-vs-weight fit");
    add_common(cmd_conv, conv_o, true);
    auto* cmd_val = app.add_subcommand("validate", "invariant suites and acceptance criteria");
    add_common(cmd_val, val_o, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_prop->parsed()) {
            const auto cfg = load(prop_o);
            emit_records({qcprop::run_propagate(cfg)}, prop_o);
            return 0;
        }
        if (cmd_sweep->parsed()) {
            const auto cfg = load(sweep_o);
            emit_records(qcprop::run_sweep(cfg, sweep_o.parallel), sweep_o);
            return 0;
        }
        if (cmd_conv->parsed()) {
            const auto cfg = load(conv_o);
            const auto rep = qcprop::run_convergence(cfg, conv_o.parallel);
            std::ofstream file;
            std::ostream& out = open_sink(conv_o, file);
            if (conv_o.format == "csv") {
                out << qcprop::records_to_csv(rep.records);
            } else {
                qcprop::json j = qcprop::convergence_to_json(rep);
                out << j.dump(2) << "\n";
            }
            return 0;
        }
        if (cmd_val->parsed()) {
            const auto checks = qcprop::run_all_checks();
            std::ofstream file;
            std::ostream& out = open_sink(val_o, file);
            int failures = 0;
            qcprop::json report = qcprop::json::array();
            for (const auto& c : checks) {
                if (!c.pass) ++failures;
                std::cerr << qcprop::format_check_line(c) << "\n";
                report.push_back(qcprop::json{{"name", c.name},
                                              {"pass", c.pass},
                                              {"measured", c.measured},
                                              {"threshold", c.threshold},
                                              {"detail", c.detail}});
            }
            out << report.dump(2) << "\n";
            std::cerr << (failures ? "FAILED " : "passed ") << checks.size() << " checks, "
                      << failures << " failures\n";
            return failures == 0 ? 0 : 1;
        }
    } catch (const qcprop::Error& e) {
        std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
