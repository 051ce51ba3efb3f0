#include <doctest.h>

#include <cmath>

#include "qcprop/action.hpp"
#include "qcprop/dynamics.hpp"
#include "qcprop/validate.hpp"

using namespace qcprop;

namespace {
const cplx I{0.0, 1.0};
}

TEST_CASE("free flow is constant") {
    HamiltonianSpec zero;
    zero.algebra = Algebra::SU2;
    const auto g = PhaseSpaceGeometry::sphere(4.0);
    const BoundaryData bd{{0.4, 0.2}, {-0.3, 0.1}, 1.3};
    const ClassicalTrajectory t = solve_linear_flow(zero, g, bd, 32);
    for (std::size_t i = 0; i < t.grid.size(); ++i) {
        CHECK(std::abs(t.z_path[i] - bd.z_I) < 1e-14);
        CHECK(std::abs(t.zbar_path[i] - bd.zbar_F) < 1e-14);
    }
    CHECK(std::abs(t.sens_zI - 1.0) < 1e-13);
    CHECK(std::abs(t.sens_zbarF - 1.0) < 1e-13);
    CHECK(t.residual < 1e-14);

    // shooting on the free system converges immediately from any guess
    const SymbolEvaluator sym(g, zero);
    const ClassicalTrajectory s = solve_bvp_shooting(sym, bd, cplx(0.7, -0.9), {});
    CHECK(s.residual < 1e-12);
    CHECK(std::abs(s.zbar0() - bd.zbar_F) < 1e-12);
}

TEST_CASE("oscillator paths rotate") {
    const double om = 1.15, tau = 1.4;
    const auto g = PhaseSpaceGeometry::plane(1.0);
    const BoundaryData bd{{0.6, -0.1}, {0.3, 0.2}, tau};
    const ClassicalTrajectory t = solve_linear_flow(oscillator_spec(om), g, bd, 64);
    for (std::size_t i = 0; i < t.grid.size(); ++i) {
        const double s = t.grid[i];
        CHECK(std::abs(t.z_path[i] - bd.z_I * std::exp(-I * om * s)) < 1e-12);
        CHECK(std::abs(t.zbar_path[i] - bd.zbar_F * std::exp(-I * om * (tau - s))) < 1e-12);
    }
    CHECK(std::abs(t.sens_zI - std::exp(-I * om * tau)) < 1e-12);
    CHECK(std::abs(t.sens_zbarF - std::exp(-I * om * tau)) < 1e-12);
}

TEST_CASE("diagonal spin drive") {
    // A J0 only: z(t) = z_I exp(-2 i A t) and the flow matrix stays unitary
    const double A = 0.9, tau = 2.0;
    HamiltonianSpec h;
    h.algebra = Algebra::SU2;
    h.terms.push_back({{GenId::Weight}, {TimeCoeff::Form::Const, 2.0 * A, 0.0},
                       HamiltonianTerm::LNorm::None});
    const auto g = PhaseSpaceGeometry::sphere(2.0);
    const BoundaryData bd{{0.5, 0.3}, {0.1, -0.4}, tau};
    const ClassicalTrajectory t = solve_linear_flow(h, g, bd, 40);
    for (std::size_t i = 0; i < t.grid.size(); ++i)
        CHECK(std::abs(t.z_path[i] - bd.z_I * std::exp(-2.0 * I * A * t.grid[i])) < 1e-12);
}

TEST_CASE("shooting on the quadratic spin model") {
    const auto g = PhaseSpaceGeometry::sphere(10.0);
    const SymbolEvaluator sym(g, su2_quadratic_spec());
    const BoundaryData bd{{0.3, 0.0}, {0.2, 0.0}, 0.5};
    const ClassicalTrajectory t = solve_bvp_shooting(sym, bd, bd.zbar_F, {});
    CHECK(t.residual <= 1e-10);
    CHECK(t.z_path.front() == bd.z_I);
    CHECK(std::abs(t.zbar_path.back() - bd.zbar_F) <= 1e-10);

    // existence by continuation: the unknown endpoint approaches the datum
    // as the duration shrinks
    double prev = 1.0;
    for (double tau : {0.25, 0.05, 0.01}) {
        const ClassicalTrajectory s =
            solve_bvp_shooting(sym, {bd.z_I, bd.zbar_F, tau}, bd.zbar_F, {});
        const double d = std::abs(s.zbar0() - bd.zbar_F);
        CHECK(d < prev);
        prev = d;
    }
}

TEST_CASE("newton failure paths") {
    const auto g = PhaseSpaceGeometry::sphere(10.0);
    const SymbolEvaluator sym(g, su2_quadratic_spec());
    const BoundaryData bd{{0.3, 0.0}, {0.2, 0.0}, 0.5};
    SolverSettings st;
    st.newton_max = 0;
    CHECK_THROWS_AS(solve_bvp_shooting(sym, bd, cplx(0.9, 0.9), st), NoConvergenceError);
}

TEST_CASE("moebius pole and chart overflow") {
    // strong resonant drive sends the holomorphic path through infinity
    HamiltonianSpec h = su2_linear_spec(0.0, 1.0);
    const auto g = PhaseSpaceGeometry::sphere(2.0);
    const BoundaryData bd{{0.0, 1.0}, {0.1, 0.0}, 2.4};
    CHECK_THROWS_AS(solve_linear_flow(h, g, bd, 64), MoebiusPoleError);

    const SymbolEvaluator sym(g, h);
    SolverSettings st;
    st.rmax = 50.0;
    CHECK_THROWS_AS(solve_bvp_shooting(sym, bd, bd.zbar_F, st), ChartOverflowError);
}

TEST_CASE("multiple stationary trajectories are flagged") {
    const auto g = PhaseSpaceGeometry::sphere(4.0);
    const SymbolEvaluator sym(g, su2_quadratic_spec());
    SolverSettings st;
    st.probe_roots = true;

    const ClassicalTrajectory far = solve_trajectory(sym, {{0.6, 0.1}, {0.5, -0.2}, 2.5}, st);
    CHECK(far.multiple_solutions_suspected);

    const ClassicalTrajectory near = solve_trajectory(sym, {{0.6, 0.1}, {0.5, -0.2}, 0.4}, st);
    CHECK_FALSE(near.multiple_solutions_suspected);
}

TEST_CASE("jacobi solutions") {
    SolverSettings st;

    // free case: phi stays zero, phibar stays one
    HamiltonianSpec zero;
    zero.algebra = Algebra::HW;
    const auto plane = PhaseSpaceGeometry::plane(1.0);
    const SymbolEvaluator s0(plane, zero);
    const BoundaryData bd0{{0.3, 0.0}, {0.2, 0.1}, 1.0};
    const ClassicalTrajectory t0 = solve_trajectory(s0, bd0, st);
    const JacobiSolution j0 = solve_jacobi(t0, s0, st);
    for (std::size_t i = 0; i < j0.grid.size(); ++i) {
        CHECK(std::abs(j0.phi[i]) < 1e-14);
        CHECK(std::abs(j0.phibar[i] - 1.0) < 1e-14);
    }
    CHECK(std::abs(det_ratio_jacobi(j0) - 1.0) < 1e-12);

    // oscillator: bilinear symbol, trivial fluctuations
    const SymbolEvaluator s1(plane, oscillator_spec(1.3));
    const ClassicalTrajectory t1 = solve_trajectory(s1, bd0, st);
    CHECK(std::abs(det_ratio_jacobi(solve_jacobi(t1, s1, st)) - 1.0) < 1e-12);

    // squeeze family: determinant ratio cosh(g tau)
    const SymbolEvaluator s2(plane, parametric_amplifier_spec(0.0, 0.5));
    const BoundaryData bd2{{0.4, 0.2}, {0.3, -0.1}, 1.0};
    const ClassicalTrajectory t2 = solve_trajectory(s2, bd2, st);
    const JacobiSolution j2 = solve_jacobi(t2, s2, st);
    CHECK(std::abs(det_ratio_jacobi(j2) - 1.1276259652063807) < 1e-10);
    CHECK(std::abs(j2.det_forward - j2.det_backward) < 1e-10);
    CHECK(j2.wronskian_drift < 1e-8);

    // same determinant with the rotating drive
    const SymbolEvaluator s3(plane, parametric_amplifier_spec(1.1, 0.5));
    const ClassicalTrajectory t3 = solve_trajectory(s3, bd2, st);
    CHECK(std::abs(det_ratio_jacobi(solve_jacobi(t3, s3, st)) - std::cosh(0.5)) < 1e-9);
}

TEST_CASE("fixed-step mode is deterministic") {
    const auto g = PhaseSpaceGeometry::sphere(10.0);
    const SymbolEvaluator sym(g, su2_quadratic_spec());
    SolverSettings st;
    st.fixed_steps = 512;
    const BoundaryData bd{{0.3, 0.0}, {0.2, 0.0}, 0.5};
    const ClassicalTrajectory a = solve_bvp_shooting(sym, bd, bd.zbar_F, st);
    const ClassicalTrajectory b = solve_bvp_shooting(sym, bd, bd.zbar_F, st);
    CHECK(a.zbar0() == b.zbar0());
    CHECK(a.sens_zI == b.sens_zI);
}

TEST_CASE("dynamics invariant suite") {
    for (const auto& c : run_dynamics_checks()) {
        INFO(c.name, ": measured ", c.measured, " threshold ", c.threshold);
        CHECK(c.pass);
    }
}
