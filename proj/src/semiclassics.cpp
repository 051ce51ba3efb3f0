#include "qcprop/semiclassics.hpp"

#include <cmath>
#include <numbers>

namespace qcprop {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double TWO_PI = 2.0 * std::numbers::pi;

struct BracketSample {
    cplx w;  // squared bracket, mixed^2 / (g_tau g_0); no roots taken
};

BracketSample bracket_squared(const ClassicalTrajectory& traj, const SymbolEvaluator& sym,
                              const BoundaryData& bd) {
    const PhaseSpaceGeometry& g = sym.geometry();
    const cplx g_tau = metric(g, bd.zbar_F, traj.z_path.back());
    const cplx g_0 = metric(g, traj.zbar0(), bd.z_I);
    const cplx mixed = mixed_second_derivative(traj, sym, bd).value;
    return {mixed * mixed / (g_tau * g_0)};
}

// Tracks arg(w) along a duration homotopy anchored at w(0+) = 1; the
// prefactor is then w^{1/4} on the tracked sheet.
struct TrackedRoot {
    cplx prefactor;
    int branch;
    double abs_bracket;
};

TrackedRoot track_fourth_root(const std::vector<cplx>& w_samples, cplx bracket_principal) {
    double cum = 0.0;
    cplx prev = 1.0;
    for (const cplx& w : w_samples) {
        if (std::abs(w) < 1e-12)
            throw CausticPrefactorError("fluctuation bracket crossed zero");
        const double step = std::arg(w / prev);
        if (std::abs(step) > 0.5 * std::numbers::pi)
            throw CausticPrefactorError("unresolved prefactor phase step");
        cum += step;
        prev = w;
    }
    const cplx w_end = w_samples.back();
    TrackedRoot out;
    out.prefactor = std::pow(std::abs(w_end), 0.25) * std::exp(I * (cum / 4.0));
    out.abs_bracket = std::sqrt(std::abs(w_end));
    out.branch = static_cast<int>(std::lround((cum / 2.0 - std::arg(bracket_principal)) / TWO_PI));
    return out;
}

// Homotopy samples of the squared bracket for durations tau k/K, k = 1..K.
std::vector<cplx> homotopy_samples(const SymbolEvaluator& sym, const BoundaryData& bd,
                                   const SolverSettings& st, int K,
                                   ClassicalTrajectory* final_traj) {
    std::vector<cplx> w(K);
    SolverSettings sub = st;
    sub.verify_quadrature = false;
    sub.probe_roots = false;
    sub.steps = 16;  // intermediate points only feed the bracket
    SolverSettings fin = st;
    fin.probe_roots = false;
    cplx guess = bd.zbar_F;
    const bool lin = sym.spec().linear() || sym.spec().zero();
    for (int k = 1; k <= K; ++k) {
        const SolverSettings& use = (k == K) ? fin : sub;
        BoundaryData p{bd.z_I, bd.zbar_F, bd.tau * k / K};
        ClassicalTrajectory t = lin
            ? solve_linear_flow(sym.spec(), sym.geometry(), p, use.steps, use)
            : solve_bvp_shooting(sym, p, guess, use);
        guess = t.zbar0();
        w[k - 1] = bracket_squared(t, sym, p).w;
        if (k == K && final_traj) *final_traj = std::move(t);
    }
    return w;
}

} // namespace

cplx det_ratio_product_form(const ClassicalTrajectory& traj, const SymbolEvaluator& sym,
                            cplx b_int) {
    const PhaseSpaceGeometry& g = sym.geometry();
    // continued log of the metric along the path, so the square root of the
    // endpoint ratio sits on the right sheet
    cplx L = 0.0;
    cplx prev = metric(g, traj.zbar_path[0], traj.z_path[0]);
    for (std::size_t i = 1; i < traj.grid.size(); ++i) {
        const cplx cur = metric(g, traj.zbar_path[i], traj.z_path[i]);
        L += std::log(cur / prev);
        prev = cur;
    }
    return std::exp(0.5 * L) * std::exp(-I * b_int) / traj.sens_zbarF;
}

PropagatorResult propagator_qc(const PhaseSpaceGeometry& g, const HamiltonianSpec& h,
                               const BoundaryData& bd, const SolverSettings& st) {
    const SymbolEvaluator sym(g, h);

    PropagatorResult res;
    ClassicalTrajectory traj;
    if (bd.tau == 0.0) {
        traj = solve_linear_flow(HamiltonianSpec{h.algebra, {}}, g, bd, st.steps, st);
        res.prefactor = 1.0;
        res.branch = 0;
        res.diagnostics["bracket_abs"] = 1.0;
    } else {
        int K = std::max(2, st.homotopy_points);
        const int K_cap = 128;
        while (true) {
            try {
                std::vector<cplx> w = homotopy_samples(sym, bd, st, K, &traj);
                const cplx bracket_principal = std::sqrt(w.back());
                const TrackedRoot root = track_fourth_root(w, bracket_principal);
                res.prefactor = root.prefactor;
                res.branch = root.branch;
                res.diagnostics["bracket_abs"] = root.abs_bracket;
                res.diagnostics["homotopy_points"] = K;
                break;
            } catch (const CausticPrefactorError&) {
                if (K >= K_cap) throw;
                K *= 2;
            }
        }
    }

    if (st.probe_roots && traj.solver_tag == "shooting") {
        SolverSettings probe = st;
        ClassicalTrajectory reprobe = solve_bvp_shooting(sym, bd, traj.zbar0(), probe);
        traj.multiple_solutions_suspected = reprobe.multiple_solutions_suspected;
    }

    res.breakdown = total_action(traj, sym, bd, st);
    const cplx phase = std::exp(res.breakdown.Phi_c + 0.5 * I * res.breakdown.B_int);
    res.amplitude = phase * res.prefactor;
    res.reduced = res.prefactor * std::exp(0.5 * I * res.breakdown.B_int);
    res.diagnostics["residual"] = traj.residual;
    res.diagnostics["quadrature_defect"] = res.breakdown.refine_defect;
    res.diagnostics["multiple_solutions_suspected"] =
        traj.multiple_solutions_suspected ? 1.0 : 0.0;
    return res;
}

namespace {

// int_0^tau of Delta H and of Delta^2 H along the trajectory; Delta^2 by a
// finite difference of the analytic Laplacian field.
struct AlphaIntegrals {
    cplx delta_int{}, delta2_int{};
};

AlphaIntegrals alpha_integrals(const ClassicalTrajectory& traj, const SymbolEvaluator& sym,
                               const BoundaryData& bd, const SolverSettings& st) {
    const FlowField field(sym, st.rmax);
    const PhaseSpaceGeometry& g = sym.geometry();
    auto delta_field = [&](cplx zbar, cplx z, double t) {
        return symbol_laplacian(sym, zbar, z, t);
    };
    const OdeSettings os = ode_settings(st, bd.tau);
    DormandPrince5 ode(
        [&](double t, const DormandPrince5::State& y, DormandPrince5::State& dy) {
            cplx P, Q;
            field.flow(t, y[0], y[1], P, Q);
            dy[0] = P;
            dy[1] = Q;
            dy[2] = delta_field(y[1], y[0], t);
            const double hh = 1e-4;
            dy[3] = (delta_field(y[1] + hh, y[0] + hh, t) - delta_field(y[1] + hh, y[0] - hh, t) -
                     delta_field(y[1] - hh, y[0] + hh, t) + delta_field(y[1] - hh, y[0] - hh, t)) /
                    (4.0 * hh * hh) / metric(g, y[1], y[0]);
        },
        os);
    DormandPrince5::State y = {bd.z_I, traj.zbar0(), 0.0, 0.0};
    ode.integrate(0.0, bd.tau, y);
    return {y[2], y[3]};
}

bool laplacian_field_constant(const SymbolEvaluator& sym, const BoundaryData& bd) {
    const cplx probes[5] = {0.0, {0.31, 0.0}, {0.0, -0.27}, bd.z_I, std::conj(bd.zbar_F)};
    cplx first = 0.0;
    double spread = 0.0, scale = 1.0;
    for (int i = 0; i < 5; ++i) {
        const cplx v = symbol_laplacian(sym, std::conj(probes[i]), probes[i], 0.17 * i);
        if (i == 0) first = v;
        spread = std::max(spread, std::abs(v - first));
        scale = std::max(scale, std::abs(v));
    }
    return spread <= 1e-12 * scale;
}

} // namespace

PropagatorResult propagator_flat_alpha(const PhaseSpaceGeometry& g, const HamiltonianSpec& h,
                                       const BoundaryData& bd, double alpha,
                                       const SolverSettings& st) {
    if (g.kind != SpaceKind::Plane)
        throw NotFlatError("the alpha quantization scheme is defined on the plane only");
    const SymbolEvaluator sym(g, h);
    const double gamma = g.weight;

    ClassicalTrajectory traj = solve_trajectory(sym, bd, st);
    ActionBreakdown cov = total_action(traj, sym, bd, st);
    const AlphaIntegrals ai = alpha_integrals(traj, sym, bd, st);

    PropagatorResult res;
    res.breakdown = cov;
    res.breakdown.S_dyn = cov.S_dyn + I * alpha * ai.delta_int;
    res.breakdown.Phi_c = cov.Phi_c + I * alpha * ai.delta_int;
    res.breakdown.B_int = ai.delta_int - alpha * ai.delta2_int;

    cplx mixed = mixed_second_derivative(traj, sym, bd).value;
    if (alpha != 0.0 && !laplacian_field_constant(sym, bd)) {
        // boundary dependence of int Delta H, by the same 4-point difference
        // as the action cross-check
        SolverSettings fd = st;
        fd.fixed_steps = std::max(st.fixed_steps, 2048);
        fd.tol = 1e-13;
        fd.verify_quadrature = false;
        const double hh = 1e-5;
        auto idelta_at = [&](double sI, double sF) -> cplx {
            BoundaryData p{bd.z_I + sI * hh, bd.zbar_F + sF * hh, bd.tau};
            ClassicalTrajectory t = solve_trajectory(sym, p, fd);
            return alpha_integrals(t, sym, p, fd).delta_int;
        };
        const cplx corr = (idelta_at(1, 1) - idelta_at(1, -1) - idelta_at(-1, 1) +
                           idelta_at(-1, -1)) / (4.0 * hh * hh);
        mixed += I * alpha * corr;
        res.diagnostics["alpha_mixed_correction"] = std::abs(corr);
    }

    // sheet tracking as in the covariant assembly; on the plane the metric
    // factors are constant so only the mixed derivative can wind
    std::vector<cplx> w_samples;
    {
        SolverSettings sub = st;
        sub.verify_quadrature = false;
        const int K = std::max(2, st.homotopy_points);
        cplx guess = bd.zbar_F;
        const bool lin = sym.spec().linear() || sym.spec().zero();
        for (int k = 1; k <= K; ++k) {
            BoundaryData p{bd.z_I, bd.zbar_F, bd.tau * k / K};
            ClassicalTrajectory t = lin
                ? solve_linear_flow(sym.spec(), g, p, 16, sub)
                : solve_bvp_shooting(sym, p, guess, sub);
            guess = t.zbar0();
            cplx mk = (k == K) ? mixed : mixed_second_derivative(t, sym, p).value;
            w_samples.push_back(mk * mk / (gamma * gamma));
        }
    }
    const TrackedRoot root = track_fourth_root(w_samples, std::sqrt(w_samples.back()));
    res.prefactor = root.prefactor;
    res.branch = root.branch;

    res.amplitude = res.prefactor *
                    std::exp(res.breakdown.Phi_c + I * (0.5 - alpha) * res.breakdown.B_int);
    res.reduced = res.prefactor * std::exp(I * (0.5 - alpha) * res.breakdown.B_int);
    res.diagnostics["residual"] = traj.residual;
    res.diagnostics["alpha"] = alpha;
    return res;
}

DhExactnessReport dh_exactness_probe(const PhaseSpaceGeometry& g, const HamiltonianSpec& h,
                                     std::vector<cplx> samples, double eps, double t0) {
    const SymbolEvaluator sym(g, h);
    const FlowField field(sym, 1e6);
    if (samples.empty()) {
        samples.push_back(0.0);
        const double rmax = (g.kind == SpaceKind::Disk) ? 0.85 : 1.3;
        for (double r : {0.25 * rmax, 0.6 * rmax, rmax})
            for (double phi : {0.0, 1.7, 3.3, 4.9})
                samples.push_back(r * std::exp(I * phi));
    }

    OdeSettings os{1e-12, 1e-14, 400000, 0.0};
    double defect = 0.0;
    for (cplx z0 : samples) {
        if (!in_chart_diagonal(g, z0)) continue;
        DormandPrince5 ode(
            [&](double t, const DormandPrince5::State& y, DormandPrince5::State& dy) {
                const FlowDerivatives d = field.full(t, y[0], y[1]);
                dy[0] = d.P;
                dy[1] = d.Q;
                dy[2] = d.Pz * y[2] + d.Pzb * y[4];
                dy[3] = d.Pz * y[3] + d.Pzb * y[5];
                dy[4] = d.Qz * y[2] + d.Qzb * y[4];
                dy[5] = d.Qz * y[3] + d.Qzb * y[5];
            },
            os);
        DormandPrince5::State y = {z0, std::conj(z0), 1.0, 0.0, 0.0, 1.0};
        ode.integrate(t0, t0 + eps, y);
        const cplx ge = metric(g, y[1], y[0]);
        const cplx g0 = metric(g, std::conj(z0), z0);
        const double dzz = std::abs(2.0 * ge * y[2] * y[4]);
        const double dbb = std::abs(2.0 * ge * y[3] * y[5]);
        const double dmix = std::abs(ge * (y[2] * y[5] + y[3] * y[4]) - g0);
        defect = std::max({defect, dzz / eps, dbb / eps, dmix / eps});
    }
    return {defect <= 1e-6, defect};
}

} // namespace qcprop
