#include "qcprop/action.hpp"

#include <cmath>
#include <numbers>

namespace qcprop {

namespace {

constexpr cplx I{0.0, 1.0};

// Augmented flow state: z, zbar, S_kin, S_dyn, B_int, L (continued log of the
// potential kernel), theta (pullback of the symplectic potential, optional).
struct AugmentedRhs {
    const FlowField& field;
    const PhaseSpaceGeometry& geom;
    cplx zbar_F, z_I;
    bool with_theta;

    void operator()(double t, const DormandPrince5::State& y, DormandPrince5::State& dy) const {
        const cplx z = y[0], zbar = y[1];
        const FlowDerivatives d = field.full(t, z, zbar);
        const cplx Fz = kahler_dz(geom, zbar, z);
        const cplx Fzb = kahler_dzbar(geom, zbar, z);
        const cplx H = field.symbols().jet(zbar, z, t).value;

        dy[0] = d.P;
        dy[1] = d.Q;
        dy[2] = -0.5 * (d.P * Fz - d.Q * Fzb);
        dy[3] = -I * H;
        dy[4] = d.b;
        // d/ds log(kernel): sphere d/ds log(1 + zbar z), disk the 1 - zbar z
        // analogue, absent on the plane
        switch (geom.kind) {
            case SpaceKind::Sphere:
                dy[5] = (d.Q * z + zbar * d.P) / (1.0 + zbar * z);
                break;
            case SpaceKind::Disk:
                dy[5] = -(d.Q * z + zbar * d.P) / (1.0 - zbar * z);
                break;
            case SpaceKind::Plane:
                dy[5] = 0.0;
                break;
        }
        if (with_theta) {
            const cplx Fz_end = kahler_dz(geom, zbar_F, z);
            const cplx Fzb_ini = kahler_dzbar(geom, zbar, z_I);
            dy[6] = -0.5 * ((Fz - Fz_end) * d.P - (Fzb - Fzb_ini) * d.Q);
        }
    }
};

struct AugmentedResult {
    cplx z_tau, zbar_tau;
    cplx S_kin, S_dyn, B_int;
    cplx L_tau;       // continued log of the kernel at tau
    cplx L_0;         // principal log of the kernel at s = 0
    cplx theta_int;
};

AugmentedResult integrate_augmented(const ClassicalTrajectory& traj, const SymbolEvaluator& sym,
                                    const BoundaryData& bd, const SolverSettings& st,
                                    bool with_theta, double rtol_scale = 1.0) {
    const PhaseSpaceGeometry& geom = sym.geometry();
    const FlowField field(sym, st.rmax);
    OdeSettings os = ode_settings(st, bd.tau);
    os.rtol = std::max(st.rtol * rtol_scale, 1e-14);
    os.atol = std::max(st.atol * rtol_scale, 1e-16);

    AugmentedResult out{};
    cplx L0 = 0.0;
    if (geom.kind != SpaceKind::Plane) {
        const cplx u0 = (geom.kind == SpaceKind::Sphere)
                            ? 1.0 + traj.zbar0() * bd.z_I
                            : 1.0 - traj.zbar0() * bd.z_I;
        if (std::abs(u0) < 1e-14 * (1.0 + std::abs(traj.zbar0() * bd.z_I)))
            throw BranchPointError("potential kernel vanished at the initial point");
        L0 = std::log(u0);
    }
    out.L_0 = L0;

    DormandPrince5 ode(AugmentedRhs{field, geom, bd.zbar_F, bd.z_I, with_theta}, os);
    DormandPrince5::State y(with_theta ? 7 : 6, cplx(0.0));
    y[0] = bd.z_I;
    y[1] = traj.zbar0();
    y[5] = L0;
    ode.integrate(0.0, bd.tau, y);

    out.z_tau = y[0];
    out.zbar_tau = y[1];
    out.S_kin = y[2];
    out.S_dyn = y[3];
    out.B_int = y[4];
    out.L_tau = y[5];
    if (with_theta) out.theta_int = y[6];
    return out;
}

// F(zbar, z) with the log taken from an externally continued value.
cplx potential_from_log(const PhaseSpaceGeometry& g, cplx continued_log, cplx zbar, cplx z) {
    switch (g.kind) {
        case SpaceKind::Sphere: return g.weight * continued_log;
        case SpaceKind::Disk:   return -g.weight * continued_log;
        case SpaceKind::Plane:  return g.weight * zbar * z;
    }
    return 0.0;
}

ActionBreakdown assemble(const AugmentedResult& r, const PhaseSpaceGeometry& geom,
                         const BoundaryData& bd, cplx zbar0) {
    ActionBreakdown a;
    a.S_kin = r.S_kin;
    a.S_dyn = r.S_dyn;
    a.B_int = r.B_int;

    const cplx z_F = std::conj(bd.zbar_F);
    const cplx zbar_I = std::conj(bd.z_I);
    const cplx F_tau = potential_from_log(geom, r.L_tau, bd.zbar_F, r.z_tau);
    const cplx F_0 = potential_from_log(geom, r.L_0, zbar0, bd.z_I);
    const cplx F_FF = kahler_potential(geom, bd.zbar_F, z_F);
    const cplx F_II = kahler_potential(geom, zbar_I, bd.z_I);
    a.Gamma = 0.5 * (F_tau + F_0 - F_FF - F_II);
    a.Phi_c = a.S_kin + a.S_dyn + a.Gamma;

    if (geom.kind != SpaceKind::Plane) {
        const cplx u_tau = (geom.kind == SpaceKind::Sphere) ? 1.0 + bd.zbar_F * r.z_tau
                                                            : 1.0 - bd.zbar_F * r.z_tau;
        const double two_pi = 2.0 * std::numbers::pi;
        a.winding = static_cast<int>(std::lround((r.L_tau - std::log(u_tau)).imag() / two_pi));
    }
    return a;
}

} // namespace

ActionBreakdown total_action(const ClassicalTrajectory& traj, const SymbolEvaluator& sym,
                             const BoundaryData& bd, const SolverSettings& st) {
    const AugmentedResult r = integrate_augmented(traj, sym, bd, st, false);
    ActionBreakdown a = assemble(r, sym.geometry(), bd, traj.zbar0());
    if (st.verify_quadrature && st.fixed_steps == 0) {
        const AugmentedResult r2 = integrate_augmented(traj, sym, bd, st, false, 1e-2);
        const ActionBreakdown a2 = assemble(r2, sym.geometry(), bd, traj.zbar0());
        a.refine_defect = std::abs(a2.Phi_c - a.Phi_c);
        if (a.refine_defect > 1e-9)
            throw QuadratureUnresolvedError("action changed by more than 1e-9 under refinement");
    }
    return a;
}

MixedDerivative mixed_second_derivative(const ClassicalTrajectory& traj,
                                        const SymbolEvaluator& sym, const BoundaryData& bd) {
    const PhaseSpaceGeometry& g = sym.geometry();
    const cplx g_tau = metric(g, bd.zbar_F, traj.z_path.back());
    const cplx g_0 = metric(g, traj.zbar0(), bd.z_I);
    return {0.5 * (g_tau * traj.sens_zI + g_0 * traj.sens_zbarF),
            MixedDerivative::Method::Sensitivity};
}

MixedDerivative mixed_second_derivative_fd(const SymbolEvaluator& sym, const BoundaryData& bd,
                                           const SolverSettings& st, double h) {
    SolverSettings fd = st;
    fd.fixed_steps = std::max(st.fixed_steps, 2048);
    fd.tol = 1e-13;
    fd.verify_quadrature = false;

    const ClassicalTrajectory base = solve_trajectory(sym, bd, fd);
    const cplx warm = base.zbar0();

    auto phi_at = [&](double sI, double sF) -> cplx {
        BoundaryData p{bd.z_I + sI * h, bd.zbar_F + sF * h, bd.tau};
        ClassicalTrajectory t = sym.spec().linear() || sym.spec().zero()
                                    ? solve_linear_flow(sym.spec(), sym.geometry(), p, fd.steps, fd)
                                    : solve_bvp_shooting(sym, p, warm, fd);
        return total_action(t, sym, p, fd).Phi_c;
    };
    const cplx mixed = (phi_at(1, 1) - phi_at(1, -1) - phi_at(-1, 1) + phi_at(-1, -1)) / (4.0 * h * h);
    return {mixed, MixedDerivative::Method::FiniteDifference};
}

double theta_identity_defect(const ClassicalTrajectory& traj, const SymbolEvaluator& sym,
                             const BoundaryData& bd, const SolverSettings& st) {
    const AugmentedResult r = integrate_augmented(traj, sym, bd, st, true);
    const ActionBreakdown a = assemble(r, sym.geometry(), bd, traj.zbar0());
    const cplx z_F = std::conj(bd.zbar_F);
    const cplx lov = log_overlap(sym.geometry(), z_F, bd.z_I);
    return std::abs(a.S_kin + a.Gamma - (r.theta_int + lov));
}

cplx b_term_flow_form(const ClassicalTrajectory& traj, const SymbolEvaluator& sym) {
    const FlowField field(sym, 1e306);
    const std::size_t n = traj.grid.size();
    std::vector<cplx> b(n);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx z = traj.z_path[i], zbar = traj.zbar_path[i];
        const double t = traj.grid[i];
        const double hz = 1e-6 * (1.0 + std::abs(z));
        const double hzb = 1e-6 * (1.0 + std::abs(zbar));
        cplx Pp, Pm, Qp, Qm, dump;
        field.flow(t, z + hz, zbar, Pp, dump);
        field.flow(t, z - hz, zbar, Pm, dump);
        const cplx dP_dz = (Pp - Pm) / (2.0 * hz);
        field.flow(t, z, zbar + hzb, dump, Qp);
        field.flow(t, z, zbar - hzb, dump, Qm);
        const cplx dQ_dzb = (Qp - Qm) / (2.0 * hzb);
        b[i] = 0.5 * I * (dP_dz - dQ_dzb);
    }
    if (n < 5) {
        cplx trap = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i)
            trap += 0.5 * (traj.grid[i + 1] - traj.grid[i]) * (b[i] + b[i + 1]);
        return trap;
    }
    // composite Simpson, 3/8 rule on the tail when the interval count is odd
    const double h = traj.grid[1] - traj.grid[0];
    cplx total = 0.0;
    std::size_t m = n - 1;
    std::size_t simpson_end = (m % 2 == 0) ? m : m - 3;
    for (std::size_t i = 0; i + 2 <= simpson_end; i += 2)
        total += h / 3.0 * (b[i] + 4.0 * b[i + 1] + b[i + 2]);
    if (m % 2 != 0)
        total += 3.0 * h / 8.0 * (b[m - 3] + 3.0 * b[m - 2] + 3.0 * b[m - 1] + b[m]);
    return total;
}

} // namespace qcprop
