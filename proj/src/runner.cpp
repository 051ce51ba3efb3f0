#include "qcprop/runner.hpp"

#include "qcprop/exact.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

namespace qcprop {

namespace {

int oracle_dimension(const ExperimentConfig& cfg) {
    switch (cfg.geometry.kind) {
        case SpaceKind::Sphere: return static_cast<int>(cfg.geometry.weight) + 1;
        case SpaceKind::Plane:  return cfg.oracle_nmax > 0 ? cfg.oracle_nmax : 64;
        case SpaceKind::Disk:   return cfg.oracle_nmax > 0 ? cfg.oracle_nmax : 128;
    }
    return 0;
}

} // namespace

ResultRecord run_propagate(const ExperimentConfig& cfg) {
    ResultRecord rec;
    rec.input_echo = cfg.raw;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        PropagatorResult qc = cfg.alpha
            ? propagator_flat_alpha(cfg.geometry, cfg.hamiltonian, cfg.boundary, *cfg.alpha, cfg.solver)
            : propagator_qc(cfg.geometry, cfg.hamiltonian, cfg.boundary, cfg.solver);
        rec.qc = qc.amplitude;
        rec.action = qc.breakdown;
        rec.prefactor = qc.prefactor;
        rec.reduced = qc.reduced;
        rec.branch = qc.branch;
        rec.diagnostics = qc.diagnostics;
        rec.residual = qc.diagnostics.count("residual") ? qc.diagnostics.at("residual") : 0.0;

        const int dim = oracle_dimension(cfg);
        if (dim <= kOracleDimensionCap) {
            const Representation rep = representation_for(cfg.geometry, cfg.oracle_nmax);
            const cplx z_F = std::conj(cfg.boundary.zbar_F);
            rec.exact = exact_amplitude(rep, cfg.hamiltonian, cfg.boundary.z_I, z_F,
                                        cfg.boundary.tau);
            if (std::abs(*rec.exact) > 0)
                rec.rel_error = std::abs(*rec.qc / *rec.exact - 1.0);
        } else {
            rec.qc_only = true;
        }
    } catch (const Error& e) {
        rec.error_code = e.code();
        rec.error_message = e.what();
    } catch (const std::exception& e) {
        rec.error_code = "internal";
        rec.error_message = e.what();
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

std::vector<ResultRecord> run_sweep(const ExperimentConfig& cfg, int parallel) {
    if (cfg.sweep.empty()) throw ConfigError("sweep needs at least one axis");

    // Cartesian product, first axis outermost.
    std::size_t total = 1;
    for (const auto& ax : cfg.sweep) total *= ax.values.size();

    std::vector<ResultRecord> out(total);
    auto run_point = [&](std::size_t flat) {
        std::vector<std::pair<std::string, double>> assignment;
        std::size_t rem = flat;
        for (std::size_t a = cfg.sweep.size(); a-- > 0;) {
            const auto& ax = cfg.sweep[a];
            assignment.emplace_back(ax.path, ax.values[rem % ax.values.size()]);
            rem /= ax.values.size();
        }
        std::reverse(assignment.begin(), assignment.end());

        ResultRecord rec;
        try {
            json doc = cfg.raw;
            for (const auto& [path, value] : assignment) set_json_path(doc, path, value);
            ExperimentConfig point = parse_config(doc);
            rec = run_propagate(point);
        } catch (const Error& e) {
            rec.error_code = e.code();
            rec.error_message = e.what();
        } catch (const std::exception& e) {
            rec.error_code = "internal";
            rec.error_message = e.what();
        }
        rec.swept = assignment;
        out[flat] = std::move(rec);
    };

    const int workers = std::clamp<int>(parallel, 1, static_cast<int>(total));
    if (workers <= 1) {
        for (std::size_t i = 0; i < total; ++i) run_point(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1))
                    run_point(i);
            });
        for (auto& t : pool) t.join();
    }
    return out;
}

ConvergenceReport run_convergence(const ExperimentConfig& cfg, int parallel) {
    if (cfg.sweep.size() != 1 || cfg.sweep[0].path != "geometry.weight")
        throw ConfigError("convergence mode sweeps exactly one axis, geometry.weight");

    ConvergenceReport rep;
    rep.records = run_sweep(cfg, parallel);
    for (const auto& r : rep.records) {
        if (!r.rel_error || !std::isfinite(*r.rel_error) || *r.rel_error <= 0) continue;
        rep.points.emplace_back(r.swept[0].second, *r.rel_error);
    }
    if (rep.points.size() < 3)
        throw FitDegenerateError("convergence fit needs at least 3 valid points");

    double floor_err = 0.0;
    for (const auto& [l, e] : rep.points) floor_err = std::max(floor_err, e);
    rep.exact_family = floor_err <= 1e-8;

    // least squares on log(err) vs log(l)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(rep.points.size());
    for (const auto& [l, e] : rep.points) {
        const double x = std::log(l), y = std::log(e);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    rep.slope = (n * sxy - sx * sy) / denom;
    rep.intercept = (sy - rep.slope * sx) / n;
    double ss = 0;
    for (const auto& [l, e] : rep.points) {
        const double d = std::log(e) - (rep.slope * std::log(l) + rep.intercept);
        ss += d * d;
    }
    rep.fit_residual = std::sqrt(ss / n);
    return rep;
}

namespace {

json action_to_json(const ActionBreakdown& a) {
    return json{{"S_kin", complex_to_json(a.S_kin)},
                {"S_dyn", complex_to_json(a.S_dyn)},
                {"Gamma", complex_to_json(a.Gamma)},
                {"Phi_c", complex_to_json(a.Phi_c)},
                {"B_int", complex_to_json(a.B_int)},
                {"winding", a.winding}};
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

json record_to_json(const ResultRecord& r, bool with_timing) {
    json j;
    if (!r.swept.empty()) {
        json sw = json::object();
        for (const auto& [path, value] : r.swept) sw[path] = value;
        j["swept"] = sw;
    }
    if (!r.error_code.empty()) {
        j["error"] = r.error_code;
        j["error_message"] = r.error_message;
    }
    if (r.qc) j["qc"] = complex_to_json(*r.qc);
    if (r.exact) j["exact"] = complex_to_json(*r.exact);
    if (r.rel_error) j["rel_error"] = *r.rel_error;
    j["qc_only"] = r.qc_only;
    if (r.qc) {
        j["action"] = action_to_json(r.action);
        j["prefactor"] = complex_to_json(r.prefactor);
        j["reduced"] = complex_to_json(r.reduced);
        j["branch"] = r.branch;
        j["residual"] = r.residual;
    }
    if (with_timing) j["wall_ms"] = r.wall_ms;
    j["input"] = r.input_echo;
    return j;
}

std::string records_to_csv(const std::vector<ResultRecord>& records) {
    std::ostringstream out;
    std::vector<std::string> axes;
    if (!records.empty())
        for (const auto& [path, _] : records.front().swept) axes.push_back(path);

    out << "index";
    for (const auto& a : axes) out << ",param:" << a;
    out << ",qc_re,qc_im,exact_re,exact_im,rel_error"
        << ",phi_c_re,phi_c_im,s_kin_re,s_kin_im,s_dyn_re,s_dyn_im,gamma_re,gamma_im"
        << ",b_int_re,b_int_im,prefactor_re,prefactor_im,reduced_re,reduced_im"
        << ",branch,winding,residual,qc_only,error\n";

    auto put_c = [&](std::optional<cplx> v) {
        if (v) out << ',' << fmt_double(v->real()) << ',' << fmt_double(v->imag());
        else out << ",,";
    };
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        out << i;
        for (const auto& [_, value] : r.swept) out << ',' << fmt_double(value);
        put_c(r.qc);
        put_c(r.exact);
        if (r.rel_error) out << ',' << fmt_double(*r.rel_error); else out << ',';
        put_c(r.qc ? std::optional<cplx>(r.action.Phi_c) : std::nullopt);
        put_c(r.qc ? std::optional<cplx>(r.action.S_kin) : std::nullopt);
        put_c(r.qc ? std::optional<cplx>(r.action.S_dyn) : std::nullopt);
        put_c(r.qc ? std::optional<cplx>(r.action.Gamma) : std::nullopt);
        put_c(r.qc ? std::optional<cplx>(r.action.B_int) : std::nullopt);
        put_c(r.qc ? std::optional<cplx>(r.prefactor) : std::nullopt);
        put_c(r.qc ? std::optional<cplx>(r.reduced) : std::nullopt);
        out << ',' << r.branch << ',' << r.action.winding << ',' << fmt_double(r.residual)
            << ',' << (r.qc_only ? 1 : 0) << ',' << r.error_code << '\n';
    }
    return out.str();
}

json convergence_to_json(const ConvergenceReport& rep) {
    json pts = json::array();
    for (const auto& [l, e] : rep.points) pts.push_back(json{{"weight", l}, {"rel_error", e}});
    return json{{"slope", rep.slope},
                {"intercept", rep.intercept},
                {"fit_residual", rep.fit_residual},
                {"exact_family", rep.exact_family},
                {"points", pts}};
}

} // namespace qcprop
