#include <doctest.h>

#include <cmath>
#include <complex>

#include "qcprop/exact.hpp"
#include "qcprop/geometry.hpp"
#include "qcprop/validate.hpp"

using namespace qcprop;

namespace {
const cplx I{0.0, 1.0};
}

TEST_CASE("kahler potential on the three spaces") {
    const auto plane = PhaseSpaceGeometry::plane(1.0);
    CHECK(kahler_potential(plane, 2.0, 3.0).real() == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(kahler_potential(plane, 2.0, 3.0).imag() == doctest::Approx(0.0));

    const auto s1 = PhaseSpaceGeometry::sphere(1.0);
    CHECK(std::abs(kahler_potential(s1, 0.0, cplx(0.7, 0.4))) < 1e-15);

    const auto s2 = PhaseSpaceGeometry::sphere(2.0);
    CHECK(kahler_potential(s2, 1.0, 1.0).real()
          == doctest::Approx(1.3862943611198906).epsilon(1e-12));
}

TEST_CASE("sphere potential against the representation overlap") {
    // F(zbar, z) = -2 log |<0|z>| with the j = 1 matrices
    const auto g = PhaseSpaceGeometry::sphere(2.0);
    const Representation rep = Representation::su2(1.0);
    for (cplx z : {cplx(1.0, 0.0), cplx(0.4, -0.7), cplx(-1.3, 0.2)}) {
        const StateVector sv = coherent_vector(rep, z);
        const double from_rep = -2.0 * std::log(std::abs(sv.coefficients(0)));
        CHECK(kahler_potential(g, std::conj(z), z).real()
              == doctest::Approx(from_rep).epsilon(1e-12));
    }
}

TEST_CASE("metric values and the potential cross-check") {
    const auto plane = PhaseSpaceGeometry::plane(2.0);
    CHECK(metric(plane, cplx(0.3, 1.0), cplx(-2.0, 0.4)).real() == doctest::Approx(2.0));

    const auto s2 = PhaseSpaceGeometry::sphere(2.0);
    CHECK(metric(s2, 0.0, 0.0).real() == doctest::Approx(2.0));
    CHECK(metric(s2, 1.0, 1.0).real() == doctest::Approx(0.5).epsilon(1e-13));

    // second difference of the potential at step 1e-5, extended precision
    const std::complex<long double> zb(1.0L), z(1.0L);
    const long double h = 1e-5L;
    auto F = [&](std::complex<long double> a, std::complex<long double> b) {
        return 2.0L * std::log(1.0L + a * b);
    };
    const std::complex<long double> fd =
        (F(zb + h, z + h) - F(zb + h, z - h) - F(zb - h, z + h) + F(zb - h, z - h)) / (4.0L * h * h);
    CHECK(std::abs(metric(s2, 1.0, 1.0) - cplx(double(fd.real()), double(fd.imag()))) < 1e-7);

    const auto disk = PhaseSpaceGeometry::disk(3.0);
    CHECK(metric(disk, 0.0, 0.0).real() == doctest::Approx(3.0));
    CHECK(metric(disk, 0.5, 0.5).real() == doctest::Approx(3.0 / (0.75 * 0.75)).epsilon(1e-13));
}

TEST_CASE("overlap normalization and closed forms") {
    for (auto g : {PhaseSpaceGeometry::sphere(3.0), PhaseSpaceGeometry::plane(1.3),
                   PhaseSpaceGeometry::disk(2.8)}) {
        const cplx w{0.31, -0.22};
        CHECK(std::abs(overlap(g, w, w) - 1.0) < 1e-14);
    }

    // sphere, first argument at the fiducial point
    const double j = 1.5;
    const auto g = PhaseSpaceGeometry::sphere(2.0 * j);
    const cplx w{0.8, -0.5};
    CHECK(std::abs(overlap(g, 0.0, w) - std::pow(1.0 + std::norm(w), -j)) < 1e-14);

    // plane overlap against a truncated Fock sum
    const auto plane = PhaseSpaceGeometry::plane(1.0);
    const cplx o = overlap(plane, 1.0, I);
    CHECK(std::abs(o - std::exp(I - 1.0)) < 1e-14);
    cplx fock = 0.0;
    double factorial = 1.0;
    for (int n = 0; n < 64; ++n) {
        if (n > 0) factorial *= n;
        fock += std::pow(std::conj(cplx(1.0)), n) * std::pow(I, n) / factorial;
    }
    fock *= std::exp(-0.5 * (1.0 + 1.0));
    CHECK(std::abs(o - fock) < 1e-12);
}

TEST_CASE("liouville density") {
    CHECK(liouville_density(PhaseSpaceGeometry::sphere(1.0), 0.0) == doctest::Approx(2.0));
    CHECK(liouville_density(PhaseSpaceGeometry::plane(3.0), cplx(5.0, -2.0)) == doctest::Approx(3.0));
    CHECK(liouville_density(PhaseSpaceGeometry::disk(2.0), 0.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(liouville_density(PhaseSpaceGeometry::disk(2.0), cplx(1.2, 0.0)),
                    ChartDomainError);
}

TEST_CASE("laplace-beltrami") {
    const auto plane = PhaseSpaceGeometry::plane(1.7);
    auto quad = [&](cplx zb, cplx z) { return 1.7 * zb * z; };
    CHECK(std::abs(laplace_beltrami(plane, ScalarField(quad), 0.4, cplx(0.2, 0.1)) - 1.0) < 1e-7);

    auto constant = [](cplx, cplx) { return cplx(2.5, -1.0); };
    CHECK(std::abs(laplace_beltrami(plane, ScalarField(constant), 0.0, 0.0)) < 1e-9);

    const auto s2 = PhaseSpaceGeometry::sphere(2.0);
    auto F = [&](cplx zb, cplx z) { return kahler_potential(s2, zb, z); };
    CHECK(std::abs(laplace_beltrami(s2, ScalarField(F), 0.0, 0.0) - 1.0) < 1e-7);
    // analytic overload
    CHECK(std::abs(laplace_beltrami(s2, metric(s2, 0.3, 0.2), 0.3, 0.2) - 1.0) < 1e-14);

    const auto disk = PhaseSpaceGeometry::disk(2.0);
    CHECK_THROWS_AS(laplace_beltrami(disk, ScalarField(constant), cplx(0.9999, 0.0),
                                     cplx(0.9999, 0.0), 1e-3),
                    StepTooLargeError);
}

TEST_CASE("branch points and invalid weights") {
    const auto s2 = PhaseSpaceGeometry::sphere(2.0);
    CHECK_THROWS_AS(kahler_potential(s2, 1.0, -1.0), BranchPointError);
    const auto disk = PhaseSpaceGeometry::disk(2.0);
    CHECK_THROWS_AS(kahler_potential(disk, 1.0, 1.0), BranchPointError);

    CHECK_THROWS_AS(PhaseSpaceGeometry::sphere(1.5), InvalidSpinError);
    CHECK_THROWS_AS(PhaseSpaceGeometry::sphere(0.0), InvalidSpinError);
    CHECK_THROWS_AS(PhaseSpaceGeometry::plane(-1.0), InvalidWeightError);
    CHECK_THROWS_AS(PhaseSpaceGeometry::disk(0.9), InvalidWeightError);
}

TEST_CASE("geometry invariant suite") {
    for (const auto& c : run_geometry_checks()) {
        INFO(c.name, ": measured ", c.measured, " threshold ", c.threshold);
        CHECK(c.pass);
    }
}
