#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

#include "qcprop/exact.hpp"
#include "qcprop/semiclassics.hpp"
#include "qcprop/validate.hpp"

using namespace qcprop;

namespace {
const cplx I{0.0, 1.0};
}

TEST_CASE("free propagator is the overlap") {
    for (auto g : {PhaseSpaceGeometry::sphere(3.0), PhaseSpaceGeometry::plane(0.8),
                   PhaseSpaceGeometry::disk(2.2)}) {
        HamiltonianSpec zero;
        zero.algebra = algebra_for(g.kind);
        const BoundaryData bd{{0.3, -0.1}, {0.25, 0.2}, 0.8};
        const PropagatorResult r = propagator_qc(g, zero, bd);
        CHECK(std::abs(r.amplitude - overlap(g, std::conj(bd.zbar_F), bd.z_I)) < 1e-12);
        CHECK(std::abs(r.prefactor - 1.0) < 1e-12);
        CHECK(std::abs(r.reduced - 1.0) < 1e-12);
        CHECK(r.branch == 0);
    }
}

TEST_CASE("zero duration") {
    const auto g = PhaseSpaceGeometry::sphere(2.0);
    const BoundaryData bd{{0.5, 0.2}, {0.1, -0.3}, 0.0};
    const PropagatorResult r = propagator_qc(g, su2_linear_spec(0.7, {0.3, 0.2}), bd);
    CHECK(std::abs(r.amplitude - overlap(g, std::conj(bd.zbar_F), bd.z_I)) < 1e-13);
}

TEST_CASE("spin propagator is the exponentiated action") {
    const auto g = PhaseSpaceGeometry::sphere(4.0);
    const HamiltonianSpec h = su2_linear_spec(0.7, {0.3, 0.2});
    const BoundaryData bd{{0.4, 0.0}, {-0.1, 0.5}, 1.0};
    const PropagatorResult r = propagator_qc(g, h, bd);
    CHECK(std::abs(r.reduced - 1.0) < 1e-10);
    CHECK(std::abs(r.amplitude - std::exp(r.breakdown.Phi_c)) < 1e-10);
}

TEST_CASE("squeeze propagator against an independent quantum route") {
    // rotating-frame drive: U = exp(-i omega tau n) exp(i g tau (adag^2 + a^2)/2)
    const double om = 1.1, gq = 0.6, tau = 1.0;
    const auto plane = PhaseSpaceGeometry::plane(1.0);
    const HamiltonianSpec h = parametric_amplifier_spec(om, gq);
    const BoundaryData bd{{0.4, 0.2}, {0.3, -0.1}, tau};
    const PropagatorResult r = propagator_qc(plane, h, bd);

    const Representation rep = Representation::hw(1.0, 64);
    const Eigen::MatrixXcd squeeze =
        (I * (0.5 * gq * tau)
         * (rep.raise_m * rep.raise_m + rep.lower_m * rep.lower_m).eval()).exp();
    const Eigen::MatrixXcd rot = (-I * om * tau * rep.weight_m).exp();
    const Eigen::MatrixXcd U = rot * squeeze;
    const cplx z_F = std::conj(bd.zbar_F);
    const cplx exact = coherent_vector(rep, z_F).coefficients.dot(
        U * coherent_vector(rep, bd.z_I).coefficients);
    CHECK(std::abs(r.amplitude / exact - 1.0) < 1e-9);
}

TEST_CASE("sheet crossing tracked through a soft caustic") {
    // detuned quadratic drive winds the fluctuation bracket through a full
    // turn; the principal square root alone would flip the sign
    const auto plane = PhaseSpaceGeometry::plane(1.0);
    HamiltonianSpec h;
    h.algebra = Algebra::HW;
    h.terms.push_back({{GenId::Weight}, {TimeCoeff::Form::Const, 1.0, 0.0},
                       HamiltonianTerm::LNorm::None});
    h.terms.push_back({{GenId::Raise, GenId::Raise}, {TimeCoeff::Form::Const, 0.25, 0.0},
                       HamiltonianTerm::LNorm::None});
    h.terms.push_back({{GenId::Lower, GenId::Lower}, {TimeCoeff::Form::Const, 0.25, 0.0},
                       HamiltonianTerm::LNorm::None});
    const BoundaryData bd{{0.4, 0.1}, {0.3, -0.2}, 2.0};
    const PropagatorResult r = propagator_qc(plane, h, bd);
    CHECK(r.branch != 0);

    const Representation rep = Representation::hw(1.0, 64);
    const cplx exact = exact_amplitude(rep, h, bd.z_I, std::conj(bd.zbar_F), bd.tau);
    CHECK(std::abs(r.amplitude / exact - 1.0) < 1e-9);
    CHECK(std::abs(-r.amplitude / exact - 1.0) > 1.0);  // wrong sheet would be 180 degrees off
}

TEST_CASE("isometry probe") {
    const DhExactnessReport lin =
        dh_exactness_probe(PhaseSpaceGeometry::sphere(4.0), su2_linear_spec(0.7, {0.3, 0.2}));
    CHECK(lin.exact_expected);
    CHECK(lin.defect <= 1e-8);

    const DhExactnessReport quad =
        dh_exactness_probe(PhaseSpaceGeometry::sphere(10.0), su2_quadratic_spec());
    CHECK_FALSE(quad.exact_expected);
    CHECK(quad.defect > 1e-3);

    HamiltonianSpec zero;
    zero.algebra = Algebra::HW;
    const DhExactnessReport free = dh_exactness_probe(PhaseSpaceGeometry::plane(1.0), zero);
    CHECK(free.exact_expected);
    CHECK(free.defect <= 1e-12);
}

TEST_CASE("flat quantization schemes") {
    const auto plane = PhaseSpaceGeometry::plane(1.0);
    const HamiltonianSpec osc = oscillator_spec(1.3);
    const BoundaryData bd{{0.7, 0.3}, {0.2, -0.5}, 0.9};

    CHECK_THROWS_AS(
        propagator_flat_alpha(PhaseSpaceGeometry::sphere(2.0), su2_linear_spec(0.1, 0.0),
                              {{0.1, 0.0}, {0.1, 0.0}, 0.5}, 0.5),
        NotFlatError);

    const PropagatorResult cov = propagator_qc(plane, osc, bd);
    const PropagatorResult a0 = propagator_flat_alpha(plane, osc, bd, 0.0);
    CHECK(std::abs(a0.amplitude / cov.amplitude - 1.0) < 1e-11);

    const PropagatorResult aw = propagator_flat_alpha(plane, osc, bd, 0.5);
    const PropagatorResult a1 = propagator_flat_alpha(plane, osc, bd, 1.0);
    CHECK(std::abs(aw.amplitude / a0.amplitude - 1.0) < 1e-9);
    CHECK(std::abs(a1.amplitude / a0.amplitude - 1.0) < 1e-9);
    // Weyl point carries no normalization phase in the exponent
    CHECK(std::abs(aw.amplitude - aw.prefactor * std::exp(aw.breakdown.Phi_c)) < 1e-12);

    // alpha shift of the action: Phi(alpha) = Phi(0) + i tau alpha omega
    CHECK(std::abs(a1.breakdown.Phi_c - (a0.breakdown.Phi_c + I * bd.tau * 1.3)) < 1e-10);

    // a quartic term exercises the non-constant Laplacian branch
    HamiltonianSpec kerr = osc;
    kerr.terms.push_back({{GenId::Weight, GenId::Weight}, {TimeCoeff::Form::Const, 0.05, 0.0},
                          HamiltonianTerm::LNorm::None});
    const PropagatorResult k0 = propagator_flat_alpha(plane, kerr, bd, 0.0);
    const PropagatorResult kw = propagator_flat_alpha(plane, kerr, bd, 0.5);
    CHECK(std::isfinite(std::abs(kw.amplitude)));
    // schemes agree only asymptotically; at gamma = 1 they differ visibly
    CHECK(std::abs(kw.amplitude / k0.amplitude - 1.0) > 1e-4);
    CHECK(std::abs(kw.amplitude / k0.amplitude - 1.0) < 0.5);
}

TEST_CASE("duration sweep keeps the propagator on one sheet") {
    const auto g = PhaseSpaceGeometry::sphere(4.0);
    const HamiltonianSpec h = su2_linear_spec(0.7, {0.3, 0.2});
    const Representation rep = Representation::su2(2.0);
    for (int k = 1; k <= 10; ++k) {
        const BoundaryData bd{{0.4, 0.0}, {-0.1, 0.5}, 0.25 * k};
        const PropagatorResult r = propagator_qc(g, h, bd);
        const cplx exact = exact_amplitude(rep, h, bd.z_I, std::conj(bd.zbar_F), bd.tau);
        CHECK(std::abs(r.amplitude / exact - 1.0) < 1e-9);
    }
}

TEST_CASE("oracle agreement across the sheet crossing") {
    // fine duration scan through the branch flip of the detuned drive:
    // every point must sit on the right sheet
    const auto plane = PhaseSpaceGeometry::plane(1.0);
    HamiltonianSpec h;
    h.algebra = Algebra::HW;
    h.terms.push_back({{GenId::Weight}, {TimeCoeff::Form::Const, 1.0, 0.0},
                       HamiltonianTerm::LNorm::None});
    h.terms.push_back({{GenId::Raise, GenId::Raise}, {TimeCoeff::Form::Const, 0.25, 0.0},
                       HamiltonianTerm::LNorm::None});
    h.terms.push_back({{GenId::Lower, GenId::Lower}, {TimeCoeff::Form::Const, 0.25, 0.0},
                       HamiltonianTerm::LNorm::None});
    const Representation rep = Representation::hw(1.0, 64);
    const Eigen::MatrixXcd Hm = hamiltonian_matrix(rep, h, 0.0);
    bool saw_flip = false;
    for (int k = 5; k <= 15; ++k) {
        const BoundaryData bd{{0.4, 0.1}, {0.3, -0.2}, 0.2 * k};
        const PropagatorResult r = propagator_qc(plane, h, bd);
        const cplx exact = exact_amplitude(rep, h, bd.z_I, std::conj(bd.zbar_F), bd.tau);
        INFO("tau = ", bd.tau, ", branch = ", r.branch);
        CHECK(std::abs(r.amplitude / exact - 1.0) < 1e-8);
        if (r.branch != 0) saw_flip = true;
    }
    CHECK(saw_flip);
}

TEST_CASE("disk shooting with quadratic terms") {
    // Hermitian product term on the disk takes the nonlinear solver path
    const auto disk = PhaseSpaceGeometry::disk(6.0);  // k = 3
    HamiltonianSpec h;
    h.algebra = Algebra::SU11;
    h.terms.push_back({{GenId::Weight}, {TimeCoeff::Form::Const, 1.0, 0.0},
                       HamiltonianTerm::LNorm::None});
    h.terms.push_back({{GenId::Raise, GenId::Lower}, {TimeCoeff::Form::Const, 0.2, 0.0},
                       HamiltonianTerm::LNorm::InverseWeightMinusOne});
    h.terms.push_back({{GenId::Lower, GenId::Raise}, {TimeCoeff::Form::Const, 0.2, 0.0},
                       HamiltonianTerm::LNorm::InverseWeightMinusOne});
    const BoundaryData bd{{0.2, 0.05}, {0.15, -0.1}, 0.7};
    const SymbolEvaluator sym(disk, h, 160);
    const ClassicalTrajectory t = solve_trajectory(sym, bd, {});
    CHECK(t.solver_tag == "shooting");
    CHECK(t.residual <= 1e-10);
    CHECK(theta_identity_defect(t, sym, bd, {}) < 1e-8);
    const cplx mx = mixed_second_derivative(t, sym, bd).value;
    const cplx fd = mixed_second_derivative_fd(sym, bd, {}).value;
    CHECK(std::abs(mx / fd - 1.0) < 1e-5);

    const PropagatorResult r = propagator_qc(disk, h, bd);
    const cplx exact = exact_amplitude(representation_for(disk, 160), h, bd.z_I,
                                       std::conj(bd.zbar_F), bd.tau);
    // quadratic drive is not isometric: a visible but small defect
    const double dev = std::abs(r.amplitude / exact - 1.0);
    CHECK(dev > 1e-7);
    CHECK(dev < 0.05);
}

TEST_CASE("random isometric families match the oracle") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    // spin families
    for (int k = 0; k < 6; ++k) {
        const double j = 0.5 * (1 + (k % 4));
        const auto g = PhaseSpaceGeometry::sphere(2.0 * j);
        const HamiltonianSpec h = su2_linear_spec(u(rng), cplx(u(rng), u(rng)));
        const BoundaryData bd{{0.6 * u(rng), 0.6 * u(rng)},
                              {0.6 * u(rng), 0.6 * u(rng)},
                              0.4 + 0.5 * (u(rng) + 1.0)};
        const PropagatorResult r = propagator_qc(g, h, bd);
        const cplx exact = exact_amplitude(Representation::su2(j), h, bd.z_I,
                                           std::conj(bd.zbar_F), bd.tau);
        INFO("spin case ", k);
        CHECK(std::abs(r.amplitude / exact - 1.0) < 1e-9);
        CHECK(std::abs(r.reduced - 1.0) < 1e-9);
    }

    // displaced rotations on the plane
    for (int k = 0; k < 4; ++k) {
        const auto g = PhaseSpaceGeometry::plane(1.0 + 0.5 * (u(rng) + 1.0));
        HamiltonianSpec h;
        h.algebra = Algebra::HW;
        h.terms.push_back({{GenId::Weight}, {TimeCoeff::Form::Const, 0.8 * u(rng), 0.0},
                           HamiltonianTerm::LNorm::None});
        const cplx f{0.4 * u(rng), 0.4 * u(rng)};
        h.terms.push_back({{GenId::Raise}, {TimeCoeff::Form::Const, f, 0.0},
                           HamiltonianTerm::LNorm::None});
        h.terms.push_back({{GenId::Lower}, {TimeCoeff::Form::Const, std::conj(f), 0.0},
                           HamiltonianTerm::LNorm::None});
        const BoundaryData bd{{0.5 * u(rng), 0.5 * u(rng)},
                              {0.5 * u(rng), 0.5 * u(rng)}, 1.0};
        const PropagatorResult r = propagator_qc(g, h, bd);
        const cplx exact = exact_amplitude(Representation::hw(g.weight, 64), h, bd.z_I,
                                           std::conj(bd.zbar_F), bd.tau);
        INFO("plane case ", k);
        CHECK(std::abs(r.amplitude / exact - 1.0) < 1e-9);
        CHECK(std::abs(r.reduced - 1.0) < 1e-9);
    }

    // hyperbolic rotations on the disk
    for (int k = 0; k < 4; ++k) {
        const auto g = PhaseSpaceGeometry::disk(2.0 + (u(rng) + 1.0));
        HamiltonianSpec h;
        h.algebra = Algebra::SU11;
        h.terms.push_back({{GenId::Weight}, {TimeCoeff::Form::Const, 0.5 + 0.5 * u(rng), 0.0},
                           HamiltonianTerm::LNorm::None});
        const cplx f{0.25 * u(rng), 0.25 * u(rng)};
        h.terms.push_back({{GenId::Raise}, {TimeCoeff::Form::Const, f, 0.0},
                           HamiltonianTerm::LNorm::None});
        h.terms.push_back({{GenId::Lower}, {TimeCoeff::Form::Const, std::conj(f), 0.0},
                           HamiltonianTerm::LNorm::None});
        const BoundaryData bd{{0.25 * u(rng), 0.25 * u(rng)},
                              {0.25 * u(rng), 0.25 * u(rng)}, 0.8};
        const PropagatorResult r = propagator_qc(g, h, bd);
        const cplx exact = exact_amplitude(representation_for(g, 128), h, bd.z_I,
                                           std::conj(bd.zbar_F), bd.tau);
        INFO("disk case ", k);
        CHECK(std::abs(r.amplitude / exact - 1.0) < 1e-8);
        CHECK(std::abs(r.reduced - 1.0) < 1e-8);
    }
}

TEST_CASE("semiclassics invariant suite") {
    for (const auto& c : run_semiclassics_checks()) {
        INFO(c.name, ": measured ", c.measured, " threshold ", c.threshold);
        CHECK(c.pass);
    }
}
