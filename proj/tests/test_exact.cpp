#include <doctest.h>

#include <cmath>

#include "qcprop/dynamics.hpp"
#include "qcprop/exact.hpp"
#include "qcprop/validate.hpp"

using namespace qcprop;

namespace {
const cplx I{0.0, 1.0};
}

TEST_CASE("generator matrices in the weight basis") {
    const Representation half = Representation::su2(0.5);
    CHECK(half.dim == 2);
    CHECK(half.weight_m(0, 0) == cplx(-0.5));
    CHECK(half.weight_m(1, 1) == cplx(0.5));
    // fiducial vector is annihilated by the lowering generator
    CHECK(half.lower_m.col(0).norm() == 0.0);

    const Representation one = Representation::su2(1.0);
    const Eigen::MatrixXcd comm =
        one.raise_m * one.lower_m - one.lower_m * one.raise_m - 2.0 * one.weight_m;
    CHECK(comm.cwiseAbs().maxCoeff() < 1e-15);

    const Representation hw = Representation::hw(1.0, 4);
    for (int n = 0; n < 4; ++n) CHECK(hw.weight_m(n, n) == cplx(n));

    CHECK_THROWS_AS(Representation::su2(0.7), InvalidSpinError);
    CHECK_THROWS_AS(Representation::su11(0.4, 32), InvalidWeightError);
}

TEST_CASE("coherent vectors") {
    const Representation rep = Representation::su2(2.5);
    const StateVector at0 = coherent_vector(rep, 0.0);
    CHECK(std::abs(at0.coefficients(0) - 1.0) < 1e-15);
    CHECK(at0.coefficients.tail(rep.dim - 1).norm() == 0.0);

    const Representation half = Representation::su2(0.5);
    const cplx z{0.4, -0.9};
    const StateVector sv = coherent_vector(half, z);
    const double norm = std::sqrt(1.0 + std::norm(z));
    CHECK(std::abs(sv.coefficients(0) - 1.0 / norm) < 1e-14);
    CHECK(std::abs(sv.coefficients(1) - z / norm) < 1e-14);

    // unit norm within the truncation allowance
    const Representation hw = Representation::hw(1.0, 64);
    CHECK(std::abs(coherent_vector(hw, cplx(1.4, 0.9)).coefficients.norm() - 1.0) < 1e-12);

    CHECK_THROWS_AS(coherent_vector(Representation::hw(1.0, 8), cplx(3.0, 0.0)),
                    TruncationTooSevereError);
    CHECK_THROWS_AS(coherent_vector(Representation::su11(1.0, 16), cplx(0.0, 1.3)),
                    ChartDomainError);
}

TEST_CASE("time-ordered evolution") {
    const Representation rep = Representation::su2(0.5);

    HamiltonianSpec zero;
    zero.algebra = Algebra::SU2;
    CHECK((evolve(rep, zero, 1.3) - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff()
          == 0.0);

    // constant 2A J0: diagonal phases
    const double A = 0.8, tau = 1.1;
    HamiltonianSpec diag;
    diag.algebra = Algebra::SU2;
    diag.terms.push_back({{GenId::Weight}, {TimeCoeff::Form::Const, 2.0 * A, 0.0},
                          HamiltonianTerm::LNorm::None});
    const Eigen::MatrixXcd U = evolve(rep, diag, tau);
    CHECK(std::abs(U(0, 0) - std::exp(I * A * tau)) < 1e-13);
    CHECK(std::abs(U(1, 1) - std::exp(-I * A * tau)) < 1e-13);
    CHECK(std::abs(U(0, 1)) + std::abs(U(1, 0)) < 1e-15);
}

TEST_CASE("midpoint stepping against the matrix flow") {
    // time-dependent spin-1/2 drive; the 2x2 flow matrix of the linearized
    // Riccati solver is an independent route to the same propagator
    const double A = 0.6, nu = 1.7, tau = 0.9;
    HamiltonianSpec h;
    h.algebra = Algebra::SU2;
    h.terms.push_back({{GenId::Weight}, {TimeCoeff::Form::Const, 2.0 * A, 0.0},
                       HamiltonianTerm::LNorm::None});
    h.terms.push_back({{GenId::Raise}, {TimeCoeff::Form::Cos, 0.5, nu}, HamiltonianTerm::LNorm::None});
    h.terms.push_back({{GenId::Lower}, {TimeCoeff::Form::Cos, 0.5, nu}, HamiltonianTerm::LNorm::None});

    const Representation rep = Representation::su2(0.5);
    const Eigen::MatrixXcd U = evolve(rep, h, tau);
    CHECK((U.adjoint() * U - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);

    const auto g = PhaseSpaceGeometry::sphere(1.0);
    const ClassicalTrajectory t = solve_linear_flow(h, g, {{0.0, 0.0}, {0.0, 0.0}, tau}, 16);
    // recover (a, b) from the Moebius paths starting at distinct points
    const ClassicalTrajectory t2 = solve_linear_flow(h, g, {{1.0, 0.0}, {0.0, 0.0}, tau}, 16);
    const cplx z0 = t.z_path.back();    // b/abar
    const cplx z1 = t2.z_path.back();   // (a+b)/(abar-bbar)
    // basis: |0> lowest weight; U acts as [[abar, -bbar], [b, a]] there
    const cplx abar = U(0, 0), b = U(1, 0);
    CHECK(std::abs(z0 - b / abar) < 1e-10);
    const cplx pred = (std::conj(abar) + b) / (abar - std::conj(b));
    CHECK(std::abs(z1 - pred) < 1e-9);
}

TEST_CASE("exact amplitudes") {
    // free case reduces to the overlap
    const auto g = PhaseSpaceGeometry::disk(2.6);
    const Representation rep = representation_for(g, 96);
    HamiltonianSpec zero;
    zero.algebra = Algebra::SU11;
    const cplx zi{0.3, 0.1}, zf{0.2, -0.4};
    CHECK(std::abs(exact_amplitude(rep, zero, zi, zf, 2.0) - overlap(g, zf, zi)) < 1e-12);

    // diagonal spin Hamiltonian on the fiducial state
    const double A = 0.45, tau = 1.7, j = 1.5;
    HamiltonianSpec diag;
    diag.algebra = Algebra::SU2;
    diag.terms.push_back({{GenId::Weight}, {TimeCoeff::Form::Const, 2.0 * A, 0.0},
                          HamiltonianTerm::LNorm::None});
    const Representation spin = Representation::su2(j);
    CHECK(std::abs(exact_amplitude(spin, diag, 0.0, 0.0, tau)
                   - std::exp(2.0 * I * j * A * tau)) < 1e-12);

    // oscillator closed form
    const auto plane = PhaseSpaceGeometry::plane(1.0);
    const Representation hw = Representation::hw(1.0, 64);
    const double om = 1.3;
    HamiltonianSpec osc = oscillator_spec(om);
    const cplx zI{0.7, 0.3}, zF{0.2, 0.5};
    const cplx expect = std::exp(std::conj(zF) * zI * std::exp(-I * om * tau)
                                 - 0.5 * (std::norm(zF) + std::norm(zI)));
    CHECK(std::abs(exact_amplitude(hw, osc, zI, zF, tau) - expect) < 1e-12);
}

TEST_CASE("hermiticity detection") {
    const Representation rep = Representation::su2(1.0);
    CHECK(spec_is_hermitian(rep, su2_linear_spec(0.7, {0.3, 0.2})));
    HamiltonianSpec lop;
    lop.algebra = Algebra::SU2;
    lop.terms.push_back({{GenId::Raise}, {TimeCoeff::Form::Const, 1.0, 0.0},
                         HamiltonianTerm::LNorm::None});
    CHECK_FALSE(spec_is_hermitian(rep, lop));
}

TEST_CASE("exact module invariant suite") {
    for (const auto& c : run_exact_checks()) {
        INFO(c.name, ": measured ", c.measured, " threshold ", c.threshold);
        CHECK(c.pass);
    }
}
