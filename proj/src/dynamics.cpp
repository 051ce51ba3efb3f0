#include "qcprop/dynamics.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace qcprop {

FlowField::FlowField(const SymbolEvaluator& sym, double rmax)
    : sym_(&sym), rmax_(rmax) {}

void FlowField::check_range(cplx z, cplx zbar) const {
    if (std::abs(z) > rmax_ || std::abs(zbar) > rmax_)
        throw ChartOverflowError("trajectory left the chart (|z| above rmax)");
}

void FlowField::flow(double t, cplx z, cplx zbar, cplx& P, cplx& Q) const {
    check_range(z, zbar);
    const SymbolValue H = sym_->value(zbar, z, t);
    const cplx g = metric(sym_->geometry(), zbar, z);
    const cplx i(0.0, 1.0);
    P = -i * H.dzbar / g;
    Q = i * H.dz / g;
}

FlowDerivatives FlowField::full(double t, cplx z, cplx zbar) const {
    check_range(z, zbar);
    const PhaseSpaceGeometry& g = sym_->geometry();
    const SymbolJet H = sym_->jet(zbar, z, t);
    const cplx gm = metric(g, zbar, z);
    const cplx gz = metric_dz(g, zbar, z);
    const cplx gzb = metric_dzbar(g, zbar, z);
    const cplx g2 = gm * gm;
    const cplx i(0.0, 1.0);

    FlowDerivatives d;
    d.P = -i * H.dzbar / gm;
    d.Q = i * H.dz / gm;
    const cplx b1 = (H.dzdzbar * gm - H.dzbar * gz) / g2;   // d_z [g^{-1} H_zbar]
    const cplx b2 = (H.dzdzbar * gm - H.dz * gzb) / g2;     // d_zbar [g^{-1} H_z]
    d.a = (H.dzz * gm - H.dz * gz) / g2;
    d.c = (H.dzbarzbar * gm - H.dzbar * gzb) / g2;
    d.b = 0.5 * (b1 + b2);
    d.Pz = -i * b1;
    d.Pzb = -i * d.c;
    d.Qz = i * d.a;
    d.Qzb = i * b2;
    return d;
}

namespace {

constexpr cplx I{0.0, 1.0};

struct Mat2 {
    cplx a{1, 0}, b{0, 0}, c{0, 0}, d{1, 0};
    cplx det() const { return a * d - b * c; }
    Mat2 inverse() const {
        const cplx dt = det();
        return {d / dt, -b / dt, -c / dt, a / dt};
    }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    cplx moebius(cplx z) const { return (a * z + b) / (c * z + d); }
    cplx moebius_den(cplx z) const { return c * z + d; }
};

// Time-dependent linear coefficients c0 (weight), cp (raise), cm (lower).
struct LinearCoeffs {
    std::vector<const HamiltonianTerm*> weight, raise, lower;
    cplx c0(double t) const { return sum(weight, t); }
    cplx cp(double t) const { return sum(raise, t); }
    cplx cm(double t) const { return sum(lower, t); }
    static cplx sum(const std::vector<const HamiltonianTerm*>& v, double t) {
        cplx s = 0.0;
        for (const auto* term : v) s += term->coeff(t);
        return s;
    }
};

LinearCoeffs split_linear(const HamiltonianSpec& h) {
    if (!h.linear())
        throw ConfigError("solve_linear_flow requires an algebra-linear Hamiltonian");
    LinearCoeffs lc;
    for (const auto& term : h.terms) {
        switch (term.factors[0]) {
            case GenId::Weight: lc.weight.push_back(&term); break;
            case GenId::Raise:  lc.raise.push_back(&term); break;
            case GenId::Lower:  lc.lower.push_back(&term); break;
        }
    }
    return lc;
}

// Generator of the holomorphic Moebius flow, zdot = X12 + (X11-X22) z - X21 z^2.
Mat2 riccati_x(const PhaseSpaceGeometry& g, const LinearCoeffs& lc, double t) {
    const cplx c0 = lc.c0(t), cp = lc.cp(t), cm = lc.cm(t);
    switch (g.kind) {
        case SpaceKind::Sphere:
            return {-I * 0.5 * c0, -I * cp, -I * cm, I * 0.5 * c0};
        case SpaceKind::Plane: {
            const double rg = std::sqrt(g.weight);
            return {-I * c0, -I * cp / rg, 0.0, 0.0};
        }
        case SpaceKind::Disk:
            return {-I * 0.5 * c0, -I * cp, I * cm, I * 0.5 * c0};
    }
    return {};
}

// Generator of the antiholomorphic flow, zbardot = i g^{-1} d_z H.
Mat2 riccati_y(const PhaseSpaceGeometry& g, const LinearCoeffs& lc, double t) {
    const cplx c0 = lc.c0(t), cp = lc.cp(t), cm = lc.cm(t);
    switch (g.kind) {
        case SpaceKind::Sphere:
            return {I * 0.5 * c0, I * cm, I * cp, -I * 0.5 * c0};
        case SpaceKind::Plane: {
            const double rg = std::sqrt(g.weight);
            return {I * c0, I * cm / rg, 0.0, 0.0};
        }
        case SpaceKind::Disk:
            return {I * 0.5 * c0, I * cm, -I * cp, -I * 0.5 * c0};
    }
    return {};
}

std::vector<double> uniform_grid(double tau, int steps) {
    std::vector<double> grid(steps + 1);
    for (int i = 0; i <= steps; ++i)
        grid[i] = tau * static_cast<double>(i) / steps;
    grid.back() = tau;
    return grid;
}

Mat2 from_state(const DormandPrince5::State& y) { return {y[0], y[1], y[2], y[3]}; }

void check_pole(cplx den, cplx at, const char* side) {
    if (std::abs(den) < 1e-12 * (1.0 + std::abs(at)))
        throw MoebiusPoleError(std::string("Moebius denominator vanished on the ") + side +
                               " flow (caustic)");
}

// A pole crossed between grid nodes wraps the denominator phase by about pi.
void check_pole_step(cplx den_prev, cplx den_cur, const char* side) {
    if (std::abs(std::arg(den_cur / den_prev)) > 0.5 * std::numbers::pi)
        throw MoebiusPoleError(std::string("Moebius denominator crossed zero on the ") + side +
                               " flow (caustic)");
}

} // namespace

ClassicalTrajectory solve_linear_flow(const HamiltonianSpec& h, const PhaseSpaceGeometry& g,
                                      const BoundaryData& bd, int steps,
                                      const SolverSettings& st) {
    require_compatible(h, g);
    const LinearCoeffs lc = split_linear(h);
    const OdeSettings os = ode_settings(st, bd.tau);

    ClassicalTrajectory traj;
    traj.solver_tag = "linear-flow";
    traj.grid = uniform_grid(bd.tau, steps);
    const std::size_t n = traj.grid.size();

    // forward matrix flow M(t), M(0) = 1
    std::vector<Mat2> Mx(n);
    {
        DormandPrince5 ode(
            [&](double t, const DormandPrince5::State& y, DormandPrince5::State& dy) {
                const Mat2 X = riccati_x(g, lc, t);
                const Mat2 M{y[0], y[1], y[2], y[3]};
                const Mat2 D = X * M;
                dy = {D.a, D.b, D.c, D.d};
            },
            os);
        DormandPrince5::State y = {1.0, 0.0, 0.0, 1.0};
        ode.integrate_grid(traj.grid, y,
                           [&](std::size_t i, double, const DormandPrince5::State& s) {
                               Mx[i] = from_state(s);
                           });
    }

    // backward matrix flow N(t), N(tau) = 1
    std::vector<Mat2> Nm(n);
    {
        std::vector<double> rgrid(traj.grid.rbegin(), traj.grid.rend());
        DormandPrince5 ode(
            [&](double t, const DormandPrince5::State& y, DormandPrince5::State& dy) {
                const Mat2 Y = riccati_y(g, lc, t);
                const Mat2 M{y[0], y[1], y[2], y[3]};
                const Mat2 D = Y * M;
                dy = {D.a, D.b, D.c, D.d};
            },
            os);
        DormandPrince5::State y = {1.0, 0.0, 0.0, 1.0};
        ode.integrate_grid(rgrid, y,
                           [&](std::size_t i, double, const DormandPrince5::State& s) {
                               Nm[n - 1 - i] = from_state(s);
                           });
    }

    traj.z_path.resize(n);
    traj.zbar_path.resize(n);
    traj.m11.resize(n);
    traj.m12.assign(n, 0.0);
    traj.m21.assign(n, 0.0);
    traj.m22.resize(n);

    const cplx den_n0 = Nm[0].moebius_den(bd.zbar_F);
    check_pole(den_n0, bd.zbar_F, "antiholomorphic");
    const cplx sens0 = Nm[0].det() / (den_n0 * den_n0);  // d zbar(0) / d zbar_F

    cplx dx_prev{}, dn_prev{};
    for (std::size_t i = 0; i < n; ++i) {
        const cplx dx = Mx[i].moebius_den(bd.z_I);
        check_pole(dx, bd.z_I, "holomorphic");
        if (i > 0) check_pole_step(dx_prev, dx, "holomorphic");
        dx_prev = dx;
        traj.z_path[i] = Mx[i].moebius(bd.z_I);
        traj.m11[i] = Mx[i].det() / (dx * dx);

        const cplx dn = Nm[i].moebius_den(bd.zbar_F);
        check_pole(dn, bd.zbar_F, "antiholomorphic");
        if (i > 0) check_pole_step(dn_prev, dn, "antiholomorphic");
        dn_prev = dn;
        traj.zbar_path[i] = Nm[i].moebius(bd.zbar_F);
        // d zbar(s)/d zbar(0) through the common dependence on zbar_F
        const cplx dsF = Nm[i].det() / (dn * dn);
        traj.m22[i] = dsF / sens0;
    }
    traj.z_path[0] = bd.z_I;
    traj.zbar_path[n - 1] = bd.zbar_F;

    traj.sens_zI = traj.m11[n - 1];
    traj.sens_zbarF = sens0;
    traj.residual = std::abs(traj.zbar_path[n - 1] - bd.zbar_F);
    return traj;
}

namespace {

// Shooting state layout: z, zbar, m11, m12, m21, m22.
struct ShootRhs {
    const FlowField& field;
    void operator()(double t, const DormandPrince5::State& y, DormandPrince5::State& dy) const {
        const FlowDerivatives d = field.full(t, y[0], y[1]);
        dy[0] = d.P;
        dy[1] = d.Q;
        dy[2] = d.Pz * y[2] + d.Pzb * y[4];
        dy[3] = d.Pz * y[3] + d.Pzb * y[5];
        dy[4] = d.Qz * y[2] + d.Qzb * y[4];
        dy[5] = d.Qz * y[3] + d.Qzb * y[5];
    }
};

struct ShotResult {
    cplx zbar_tau;       // zbar(tau; w)
    cplx dzbar_dw;       // m22(tau)
    DormandPrince5::State final_state;
};

ShotResult shoot_once(const FlowField& field, const BoundaryData& bd, cplx w,
                      const OdeSettings& os) {
    DormandPrince5 ode(ShootRhs{field}, os);
    DormandPrince5::State y = {bd.z_I, w, 1.0, 0.0, 0.0, 1.0};
    ode.integrate(0.0, bd.tau, y);
    return {y[1], y[5], y};
}

} // namespace

ClassicalTrajectory solve_bvp_shooting(const SymbolEvaluator& sym, const BoundaryData& bd,
                                       cplx guess, const SolverSettings& st) {
    const FlowField field(sym, st.rmax);
    const OdeSettings os = ode_settings(st, bd.tau);

    cplx w = guess;
    ShotResult shot = shoot_once(field, bd, w, os);
    cplx r = shot.zbar_tau - bd.zbar_F;
    int iter = 0;
    while (std::abs(r) > st.tol) {
        if (++iter > st.newton_max)
            throw NoConvergenceError("Newton did not reach the shooting tolerance");
        if (std::abs(shot.dzbar_dw) < 1e-300)
            throw DegenerateWronskianError("vanishing shooting derivative (conjugate point)");
        cplx dw = -r / shot.dzbar_dw;
        // damped update: halve the step until the residual decreases
        ShotResult next = shot;
        cplx wn = w;
        bool accepted = false;
        for (int half = 0; half < 15; ++half) {
            wn = w + dw;
            try {
                next = shoot_once(field, bd, wn, os);
            } catch (const Error&) {
                dw *= 0.5;
                continue;
            }
            if (std::abs(next.zbar_tau - bd.zbar_F) < std::abs(r) * (1.0 - 1e-4) ||
                std::abs(next.zbar_tau - bd.zbar_F) <= st.tol) {
                accepted = true;
                break;
            }
            dw *= 0.5;
        }
        if (!accepted)
            throw NoConvergenceError("damped Newton stalled in the shooting solve");
        w = wn;
        shot = next;
        r = shot.zbar_tau - bd.zbar_F;
    }

    // converged: one more pass storing the reporting grid
    ClassicalTrajectory traj;
    traj.solver_tag = "shooting";
    traj.grid = uniform_grid(bd.tau, st.steps);
    const std::size_t n = traj.grid.size();
    traj.z_path.resize(n);
    traj.zbar_path.resize(n);
    traj.m11.resize(n);
    traj.m12.resize(n);
    traj.m21.resize(n);
    traj.m22.resize(n);
    {
        DormandPrince5 ode(ShootRhs{field}, os);
        DormandPrince5::State y = {bd.z_I, w, 1.0, 0.0, 0.0, 1.0};
        ode.integrate_grid(traj.grid, y,
                           [&](std::size_t i, double, const DormandPrince5::State& s) {
                               traj.z_path[i] = s[0];
                               traj.zbar_path[i] = s[1];
                               traj.m11[i] = s[2];
                               traj.m12[i] = s[3];
                               traj.m21[i] = s[4];
                               traj.m22[i] = s[5];
                           });
    }
    traj.residual = std::abs(traj.zbar_path[n - 1] - bd.zbar_F);

    const cplx m22_tau = traj.m22[n - 1];
    const cplx detM = traj.m11[n - 1] * traj.m22[n - 1] - traj.m12[n - 1] * traj.m21[n - 1];
    if (std::abs(m22_tau) < 1e-300)
        throw DegenerateWronskianError("vanishing boundary sensitivity (conjugate point)");
    traj.sens_zbarF = 1.0 / m22_tau;
    traj.sens_zI = detM / m22_tau;

    if (st.probe_roots) {
        const double scale = std::max(1.0, std::abs(w));
        for (cplx d : {cplx(0.25, 0.15), cplx(-0.2, 0.3), cplx(0.3, -0.35)}) {
            try {
                SolverSettings quiet = st;
                quiet.probe_roots = false;
                ClassicalTrajectory other = solve_bvp_shooting(sym, bd, w + d * scale, quiet);
                if (std::abs(other.zbar0() - w) > std::max(1e3 * st.tol, 1e-6 * scale)) {
                    traj.multiple_solutions_suspected = true;
                    break;
                }
            } catch (const Error&) {
                // probe failures are not findings
            }
        }
    }
    return traj;
}

ClassicalTrajectory solve_trajectory(const SymbolEvaluator& sym, const BoundaryData& bd,
                                     const SolverSettings& st) {
    if (sym.spec().linear() || sym.spec().zero())
        return solve_linear_flow(sym.spec(), sym.geometry(), bd, st.steps, st);
    try {
        return solve_bvp_shooting(sym, bd, bd.zbar_F, st);
    } catch (const NoConvergenceError&) {
    } catch (const ChartOverflowError&) {
    } catch (const IntegratorFailureError&) {
    } catch (const TruncationTooSevereError&) {
    }
    // continuation in duration from tau -> 0, warm starting the guess
    cplx guess = bd.zbar_F;
    const int ladder = 8;
    ClassicalTrajectory traj;
    for (int k = 1; k <= ladder; ++k) {
        BoundaryData sub{bd.z_I, bd.zbar_F, bd.tau * k / ladder};
        traj = solve_bvp_shooting(sym, sub, guess, st);
        guess = traj.zbar0();
    }
    return traj;
}

namespace {

// Joint state for the Jacobi integration: z, zbar, int b, j1, j2 where
// (j1, j2) is (phi, phibar) forward or (psi, psibar) backward.
struct JacobiRhs {
    const FlowField& field;
    void operator()(double t, const DormandPrince5::State& y, DormandPrince5::State& dy) const {
        const FlowDerivatives d = field.full(t, y[0], y[1]);
        const cplx gauge = std::exp(cplx(0.0, 2.0) * y[2]);
        dy[0] = d.P;
        dy[1] = d.Q;
        dy[2] = d.b;
        dy[3] = -I * d.c * gauge * y[4];   // phidot = -i ctilde phibar
        dy[4] = I * d.a / gauge * y[3];    // phibardot = i atilde phi
    }
};

} // namespace

JacobiSolution solve_jacobi(const ClassicalTrajectory& traj, const SymbolEvaluator& sym,
                            const SolverSettings& st) {
    const FlowField field(sym, st.rmax);
    const OdeSettings os = ode_settings(st, traj.tau());

    JacobiSolution js;
    js.grid = traj.grid;
    const std::size_t n = js.grid.size();
    js.phi.resize(n);
    js.phibar.resize(n);
    js.psi.resize(n);
    js.psibar.resize(n);
    js.b_integral.resize(n);

    DormandPrince5::State yend;
    {
        DormandPrince5 ode(JacobiRhs{field}, os);
        DormandPrince5::State y = {traj.z_path.front(), traj.zbar_path.front(), 0.0, 0.0, 1.0};
        ode.integrate_grid(js.grid, y,
                           [&](std::size_t i, double, const DormandPrince5::State& s) {
                               js.b_integral[i] = s[2];
                               js.phi[i] = s[3];
                               js.phibar[i] = s[4];
                           });
        yend = y;
    }
    {
        std::vector<double> rgrid(js.grid.rbegin(), js.grid.rend());
        DormandPrince5 ode(JacobiRhs{field}, os);
        DormandPrince5::State y = {yend[0], yend[1], yend[2], 1.0, 0.0};
        ode.integrate_grid(rgrid, y,
                           [&](std::size_t i, double, const DormandPrince5::State& s) {
                               js.psi[n - 1 - i] = s[3];
                               js.psibar[n - 1 - i] = s[4];
                           });
    }

    // Wronskian w = phi psibar - phibar psi must be constant in s.
    cplx w0 = js.phi[0] * js.psibar[0] - js.phibar[0] * js.psi[0];
    double wscale = 0.0;
    double drift = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const cplx w = js.phi[i] * js.psibar[i] - js.phibar[i] * js.psi[i];
        wscale = std::max(wscale, std::abs(js.phi[i] * js.psibar[i]) +
                                      std::abs(js.phibar[i] * js.psi[i]));
        drift = std::max(drift, std::abs(w - w0));
    }
    if (std::abs(w0) <= 1e-10 * std::max(wscale, 1e-300))
        throw DegenerateWronskianError("Wronskian vanished (conjugate point / caustic)");
    js.wronskian_drift = drift / std::abs(w0);

    js.det_forward = js.phibar[n - 1] / js.phibar[0];
    js.det_backward = js.psi[0] / js.psi[n - 1];
    return js;
}

cplx det_ratio_jacobi(const JacobiSolution& js) {
    const cplx f = js.det_forward, b = js.det_backward;
    if (std::abs(f - b) > 1e-6 * std::max(1.0, std::abs(f)))
        throw DegenerateWronskianError("forward and backward determinant ratios disagree");
    return f;
}

double flow_residual_max(const ClassicalTrajectory& traj, const SymbolEvaluator& sym) {
    const FlowField field(sym, 1e306);
    const std::size_t n = traj.grid.size();
    if (n < 9) return 0.0;
    const double h = traj.grid[1] - traj.grid[0];
    // 8th-order central first derivative on the interior
    static const double c[4] = {4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
    double worst = 0.0;
    for (std::size_t i = 4; i + 4 < n; ++i) {
        cplx dz = 0.0, dzb = 0.0;
        for (int k = 1; k <= 4; ++k) {
            dz += c[k - 1] * (traj.z_path[i + k] - traj.z_path[i - k]);
            dzb += c[k - 1] * (traj.zbar_path[i + k] - traj.zbar_path[i - k]);
        }
        dz /= h;
        dzb /= h;
        cplx P, Q;
        field.flow(traj.grid[i], traj.z_path[i], traj.zbar_path[i], P, Q);
        worst = std::max(worst, std::abs(dz - P));
        worst = std::max(worst, std::abs(dzb - Q));
    }
    return worst;
}

} // namespace qcprop
