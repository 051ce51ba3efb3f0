#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qcprop/action.hpp"
#include "qcprop/exact.hpp"
#include "qcprop/validate.hpp"

using namespace qcprop;

namespace {
const cplx I{0.0, 1.0};
}

TEST_CASE("free action reduces to the boundary overlap") {
    HamiltonianSpec zero;
    zero.algebra = Algebra::SU2;
    const double j = 1.5;
    const auto g = PhaseSpaceGeometry::sphere(2.0 * j);
    const BoundaryData bd{{0.3, 0.2}, {-0.2, 0.4}, 0.9};
    const SymbolEvaluator sym(g, zero);
    const ClassicalTrajectory t = solve_trajectory(sym, bd, {});
    const ActionBreakdown a = total_action(t, sym, bd, {});
    const cplx z_F = std::conj(bd.zbar_F);
    const cplx expect = 2.0 * j * std::log(1.0 + bd.zbar_F * bd.z_I)
                      - j * std::log(1.0 + std::norm(z_F)) - j * std::log(1.0 + std::norm(bd.z_I));
    CHECK(std::abs(a.Phi_c - expect) < 1e-12);
    CHECK(std::abs(a.S_kin) < 1e-12);
    CHECK(std::abs(a.S_dyn) < 1e-12);
    CHECK(std::abs(a.B_int) < 1e-12);
    CHECK(a.winding == 0);
}

TEST_CASE("oscillator action closed form") {
    const double om = 1.3, tau = 0.9;
    const auto g = PhaseSpaceGeometry::plane(1.0);
    const BoundaryData bd{{0.7, 0.3}, {0.2, -0.5}, tau};
    const SymbolEvaluator sym(g, oscillator_spec(om));
    const ClassicalTrajectory t = solve_trajectory(sym, bd, {});
    const ActionBreakdown a = total_action(t, sym, bd, {});
    const cplx z_F = std::conj(bd.zbar_F);
    const cplx phi = bd.zbar_F * bd.z_I * std::exp(-I * om * tau)
                   - 0.5 * (std::norm(z_F) + std::norm(bd.z_I));
    CHECK(std::abs(a.Phi_c - phi) < 1e-12);
    CHECK(std::abs(a.B_int - om * tau) < 1e-12);

    const MixedDerivative mx = mixed_second_derivative(t, sym, bd);
    CHECK(std::abs(mx.value - std::exp(-I * om * tau)) < 1e-12);
    const MixedDerivative fd = mixed_second_derivative_fd(sym, bd, {});
    CHECK(std::abs(mx.value - fd.value) < 1e-6);
}

TEST_CASE("spin action against the group-element closed form") {
    const double j = 2.0, A = 0.7, tau = 1.0;
    const cplx f{0.3, 0.2};
    const auto g = PhaseSpaceGeometry::sphere(2.0 * j);
    const BoundaryData bd{{0.4, 0.0}, {-0.1, 0.5}, tau};
    const SymbolEvaluator sym(g, su2_linear_spec(A, f));
    const ClassicalTrajectory t = solve_trajectory(sym, bd, {});
    const ActionBreakdown act = total_action(t, sym, bd, {});

    const double om = std::sqrt(A * A + std::norm(f));
    const cplx a = std::cos(om * tau) - I * A * std::sin(om * tau) / om;
    const cplx b = -I * f * std::sin(om * tau) / om;
    const cplx D = std::conj(a) - std::conj(b) * bd.z_I + b * bd.zbar_F + a * bd.zbar_F * bd.z_I;
    const cplx z_F = std::conj(bd.zbar_F);
    const cplx phi = 2.0 * j * std::log(D)
                   - j * std::log((1.0 + std::norm(z_F)) * (1.0 + std::norm(bd.z_I)));
    CHECK(std::abs(act.Phi_c - phi) < 1e-10);

    const MixedDerivative mx = mixed_second_derivative(t, sym, bd);
    CHECK(std::abs(mx.value - 2.0 * j / (D * D)) < 1e-10);
}

TEST_CASE("symplectic potential identity") {
    SolverSettings st;
    HamiltonianSpec zero;
    zero.algebra = Algebra::HW;
    const auto plane = PhaseSpaceGeometry::plane(1.0);
    const BoundaryData bd{{0.5, -0.2}, {0.3, 0.4}, 1.1};
    {
        const SymbolEvaluator sym(plane, zero);
        const ClassicalTrajectory t = solve_trajectory(sym, bd, st);
        CHECK(theta_identity_defect(t, sym, bd, st) < 1e-10);
    }
    {
        const SymbolEvaluator sym(plane, oscillator_spec(1.3));
        const ClassicalTrajectory t = solve_trajectory(sym, bd, st);
        CHECK(theta_identity_defect(t, sym, bd, st) < 1e-9);
    }
    {
        const auto g = PhaseSpaceGeometry::sphere(4.0);
        const SymbolEvaluator sym(g, su2_linear_spec(-0.4, {0.6, -0.35}));
        const BoundaryData bds{{0.2, 0.6}, {-0.5, 0.1}, 1.7};
        const ClassicalTrajectory t = solve_trajectory(sym, bds, st);
        CHECK(theta_identity_defect(t, sym, bds, st) < 1e-8);
    }
}

TEST_CASE("normalization integral from the flow derivatives") {
    SolverSettings st;
    const auto plane = PhaseSpaceGeometry::plane(1.0);
    const BoundaryData bd{{0.4, 0.1}, {0.3, -0.3}, 1.2};
    {
        const SymbolEvaluator sym(plane, oscillator_spec(0.8));
        const ClassicalTrajectory t = solve_trajectory(sym, bd, st);
        CHECK(std::abs(b_term_flow_form(t, sym) - 0.8 * bd.tau) < 1e-7);
    }
    {
        HamiltonianSpec zero;
        zero.algebra = Algebra::HW;
        const SymbolEvaluator sym(plane, zero);
        const ClassicalTrajectory t = solve_trajectory(sym, bd, st);
        CHECK(std::abs(b_term_flow_form(t, sym)) < 1e-10);
    }
}

TEST_CASE("branch corrections along strongly driven paths") {
    // the kernel log winds around the cut; the recorded correction keeps
    // exp(Phi_c) equal to the quantum amplitude at half-odd spin
    const double j = 1.5;
    const auto g = PhaseSpaceGeometry::sphere(2.0 * j);
    const HamiltonianSpec h = su2_linear_spec(0.4, {1.2, 0.5});
    const BoundaryData bd{{1.2, 0.3}, {-0.6, 0.4}, 2.0};
    const SymbolEvaluator sym(g, h);
    const ClassicalTrajectory t = solve_trajectory(sym, bd, {});
    const ActionBreakdown a = total_action(t, sym, bd, {});
    CHECK(a.winding != 0);

    const Representation rep = Representation::su2(j);
    const cplx exact = exact_amplitude(rep, h, bd.z_I, std::conj(bd.zbar_F), bd.tau);
    CHECK(std::abs(std::exp(a.Phi_c) / exact - 1.0) < 1e-10);

    // dropping the winding correction would flip the sign at 2j = 3
    const cplx uncorrected = std::exp(a.Phi_c - cplx(0.0, 2.0 * std::numbers::pi)
                                                  * (2.0 * j) * 0.5 * double(a.winding));
    CHECK(std::abs(uncorrected / exact - 1.0) > 1.0);
}

TEST_CASE("quadrature refinement guard") {
    const auto g = PhaseSpaceGeometry::sphere(10.0);
    const SymbolEvaluator sym(g, su2_quadratic_spec());
    const BoundaryData bd{{0.3, 0.0}, {0.2, 0.0}, 0.5};
    SolverSettings sloppy;
    sloppy.rtol = 1e-3;
    sloppy.atol = 1e-6;
    const ClassicalTrajectory t = solve_trajectory(sym, bd, sloppy);
    CHECK_THROWS_AS(total_action(t, sym, bd, sloppy), QuadratureUnresolvedError);
}

TEST_CASE("action invariant suite") {
    for (const auto& c : run_action_checks()) {
        INFO(c.name, ": measured ", c.measured, " threshold ", c.threshold);
        CHECK(c.pass);
    }
}
