#pragma once

#include <complex>
#include <functional>

#include "qcprop/errors.hpp"

namespace qcprop {

using cplx = std::complex<double>;

enum class SpaceKind { Sphere, Plane, Disk };

// A rank-1 Kaehler phase space: the Riemann sphere (spin), the complex plane
// (boson mode) or the unit disk (discrete-series boson pair).  `weight` is the
// dimensionless representation label:
//   Sphere: l = 2j, a positive integer
//   Plane:  gamma > 0
//   Disk:   l = 2k with k > 1/2
// Everything below derives from the Kaehler potential F evaluated with
// independent holomorphic/antiholomorphic slots.  Diagonal evaluation is the
// special case zbar = conj(z).
struct PhaseSpaceGeometry {
    SpaceKind kind = SpaceKind::Plane;
    double weight = 1.0;

    // Test hook: additive offset applied to metric() so that the consistency
    // checks can be shown to catch a wrong metric.  Always zero in normal use.
    double metric_test_offset = 0.0;

    static PhaseSpaceGeometry sphere(double l_two_j);
    static PhaseSpaceGeometry plane(double gamma);
    static PhaseSpaceGeometry disk(double l_two_k);

    double spin_j() const { return 0.5 * weight; }
    double disk_k() const { return 0.5 * weight; }
};

// F(zbar1, z2), the analytic continuation of the Kaehler potential.
//   Sphere: l log(1 + zbar1 z2)
//   Plane:  gamma zbar1 z2
//   Disk:  -l log(1 - zbar1 z2)
// Principal branch of the logarithm; throws BranchPointError when the
// argument of the logarithm vanishes.
cplx kahler_potential(const PhaseSpaceGeometry& g, cplx zbar1, cplx z2);

// First chart derivatives of F at independent slots.
cplx kahler_dz(const PhaseSpaceGeometry& g, cplx zbar, cplx z);
cplx kahler_dzbar(const PhaseSpaceGeometry& g, cplx zbar, cplx z);

// Second derivatives of F.
cplx kahler_dzz(const PhaseSpaceGeometry& g, cplx zbar, cplx z);
cplx kahler_dzbarzbar(const PhaseSpaceGeometry& g, cplx zbar, cplx z);

// metric = d2F/dzbar dz, real and positive on the diagonal.
cplx metric(const PhaseSpaceGeometry& g, cplx zbar, cplx z);
cplx metric_dz(const PhaseSpaceGeometry& g, cplx zbar, cplx z);
cplx metric_dzbar(const PhaseSpaceGeometry& g, cplx zbar, cplx z);

// <z1|z2> for normalized coherent states.
cplx overlap(const PhaseSpaceGeometry& g, cplx z1, cplx z2);
cplx log_overlap(const PhaseSpaceGeometry& g, cplx z1, cplx z2);

// Density multiplying dz dzbar / (2 pi i), normalized so that the resolution
// of unity holds: Sphere (2j+1)/(1+|z|^2)^2, Plane gamma, Disk
// (2k-1)/(1-|z|^2)^2.
double liouville_density(const PhaseSpaceGeometry& g, cplx z);

bool in_chart_diagonal(const PhaseSpaceGeometry& g, cplx z);

// Laplace-Beltrami operator applied to a scalar field at one point:
// (d2F/dzbar dz)^{-1} d2f/dzbar dz.  The first overload takes the mixed
// second derivative directly; the second computes it by a 4-point central
// difference of the supplied field (step leaves the chart -> StepTooLarge).
cplx laplace_beltrami(const PhaseSpaceGeometry& g, cplx f_mixed, cplx zbar, cplx z);
using ScalarField = std::function<cplx(cplx, cplx)>;
cplx laplace_beltrami(const PhaseSpaceGeometry& g, const ScalarField& f,
                      cplx zbar, cplx z, double step = 1e-4);

} // namespace qcprop
