#include "qcprop/config.hpp"

#include <fstream>

namespace qcprop {

cplx parse_complex(const json& j) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_object())
        return cplx(j.value("re", 0.0), j.value("im", 0.0));
    throw ConfigError("complex values are numbers or {\"re\":..,\"im\":..} objects");
}

json complex_to_json(cplx v) {
    return json{{"re", v.real()}, {"im", v.imag()}};
}

PhaseSpaceGeometry parse_geometry(const json& j) {
    const std::string kind = j.value("kind", "plane");
    const double weight = j.value("weight", 1.0);
    if (kind == "sphere") return PhaseSpaceGeometry::sphere(weight);
    if (kind == "plane") return PhaseSpaceGeometry::plane(weight);
    if (kind == "disk") return PhaseSpaceGeometry::disk(weight);
    throw ConfigError("geometry kind must be sphere, plane or disk");
}

HamiltonianSpec parse_hamiltonian(const json& j, Algebra algebra) {
    HamiltonianSpec h;
    h.algebra = algebra;
    if (j.is_null()) return h;
    if (!j.is_array()) throw ConfigError("hamiltonian must be a list of term records");
    for (const auto& rec : j) {
        HamiltonianTerm term;
        if (!rec.contains("generators") || !rec["generators"].is_array() ||
            rec["generators"].empty())
            throw ConfigError("each term needs a non-empty \"generators\" list");
        for (const auto& gname : rec["generators"])
            term.factors.push_back(generator_from_name(algebra, gname.get<std::string>()));
        if (rec.contains("coeff")) term.coeff.amplitude = parse_complex(rec["coeff"]);
        if (rec.contains("time")) {
            const auto& t = rec["time"];
            const std::string form = t.value("form", "const");
            if (form == "const") term.coeff.form = TimeCoeff::Form::Const;
            else if (form == "exp") term.coeff.form = TimeCoeff::Form::Exp;
            else if (form == "cos") term.coeff.form = TimeCoeff::Form::Cos;
            else if (form == "sin") term.coeff.form = TimeCoeff::Form::Sin;
            else throw ConfigError("time form must be const, exp, cos or sin");
            term.coeff.nu = t.value("nu", 0.0);
        }
        const std::string lnorm = rec.value("lnorm", "none");
        if (lnorm == "none") term.lnorm = HamiltonianTerm::LNorm::None;
        else if (lnorm == "footnote2") term.lnorm = HamiltonianTerm::LNorm::InverseWeightMinusOne;
        else throw ConfigError("lnorm must be none or footnote2");
        h.terms.push_back(std::move(term));
    }
    return h;
}

namespace {
ExperimentConfig parse_config_impl(const json& j);
} // namespace

ExperimentConfig parse_config(const json& j) {
    try {
        return parse_config_impl(j);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
}

namespace {

ExperimentConfig parse_config_impl(const json& j) {
    ExperimentConfig cfg;
    cfg.raw = j;

    const std::string mode = j.value("mode", "propagate");
    if (mode == "propagate") cfg.mode = RunMode::Propagate;
    else if (mode == "sweep") cfg.mode = RunMode::Sweep;
    else if (mode == "convergence") cfg.mode = RunMode::Convergence;
    else if (mode == "validate") cfg.mode = RunMode::Validate;
    else throw ConfigError("mode must be propagate, sweep, convergence or validate");

    cfg.geometry = j.contains("geometry") ? parse_geometry(j["geometry"])
                                          : PhaseSpaceGeometry::plane(1.0);
    cfg.hamiltonian = parse_hamiltonian(j.contains("hamiltonian") ? j["hamiltonian"] : json(nullptr),
                                        algebra_for(cfg.geometry.kind));

    if (j.contains("boundary")) {
        const auto& b = j["boundary"];
        if (b.contains("z_I")) cfg.boundary.z_I = parse_complex(b["z_I"]);
        if (b.contains("zbar_F")) cfg.boundary.zbar_F = parse_complex(b["zbar_F"]);
        cfg.boundary.tau = b.value("tau", 1.0);
        if (cfg.boundary.tau < 0.0) throw ConfigError("tau must be non-negative");
    }

    if (j.contains("solver")) {
        const auto& s = j["solver"];
        cfg.solver.steps = s.value("steps", cfg.solver.steps);
        cfg.solver.tol = s.value("tol", cfg.solver.tol);
        cfg.solver.newton_max = s.value("newton_max", cfg.solver.newton_max);
        cfg.solver.rmax = s.value("rmax", cfg.solver.rmax);
        cfg.solver.rtol = s.value("rtol", cfg.solver.rtol);
        cfg.solver.probe_roots = s.value("probe_roots", cfg.solver.probe_roots);
        cfg.solver.homotopy_points = s.value("homotopy_points", cfg.solver.homotopy_points);
        if (cfg.solver.steps < 8) throw ConfigError("solver.steps must be at least 8");
    }

    if (j.contains("oracle")) cfg.oracle_nmax = j["oracle"].value("nmax", 0);
    if (j.contains("alpha") && !j["alpha"].is_null()) cfg.alpha = j["alpha"].get<double>();

    if (j.contains("sweep")) {
        for (const auto& ax : j["sweep"]) {
            SweepAxis axis;
            axis.path = ax.value("path", "");
            if (axis.path.empty()) throw ConfigError("sweep axis needs a \"path\"");
            if (!ax.contains("values") || !ax["values"].is_array() || ax["values"].empty())
                throw ConfigError("sweep axis needs a non-empty \"values\" list");
            for (const auto& v : ax["values"]) axis.values.push_back(v.get<double>());
            cfg.sweep.push_back(std::move(axis));
        }
    }
    if ((cfg.mode == RunMode::Sweep || cfg.mode == RunMode::Convergence) && cfg.sweep.empty())
        throw ConfigError("sweep and convergence modes need at least one sweep axis");
    return cfg;
}

} // namespace

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

json default_config_json() {
    return json{
        {"mode", "propagate"},
        {"geometry", {{"kind", "plane"}, {"weight", 1.0}}},
        {"hamiltonian",
         json::array({json{{"generators", json::array({"n"})}, {"coeff", {{"re", 1.0}, {"im", 0.0}}}}})},
        {"boundary",
         {{"z_I", {{"re", 0.4}, {"im", 0.1}}}, {"zbar_F", {{"re", 0.2}, {"im", -0.3}}}, {"tau", 1.0}}},
        {"solver", {{"steps", 240}, {"tol", 1e-10}, {"newton_max", 30}, {"rmax", 1e6}}}};
}

void set_json_path(json& j, const std::string& path, double value) {
    json* cur = &j;
    std::size_t pos = 0;
    while (true) {
        const std::size_t dot = path.find('.', pos);
        const std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
        const bool last = (dot == std::string::npos);
        auto descend = [&](json& node) -> json& {
            if (node.is_array()) {
                std::size_t idx = 0;
                try {
                    idx = std::stoul(key);
                } catch (...) {
                    throw ConfigError("sweep path indexes an array with '" + key + "'");
                }
                if (idx >= node.size()) throw ConfigError("sweep path index out of range: " + path);
                return node[idx];
            }
            if (!node.contains(key)) node[key] = json::object();
            return node[key];
        };
        json& next = descend(*cur);
        if (last) {
            next = value;
            return;
        }
        cur = &next;
        pos = dot + 1;
    }
}

} // namespace qcprop
