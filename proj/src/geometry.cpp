#include "qcprop/geometry.hpp"

#include <cmath>

namespace qcprop {

namespace {

// Argument of the logarithm in F: 1 + zbar z (sphere), 1 - zbar z (disk).
cplx kernel_arg(const PhaseSpaceGeometry& g, cplx zbar, cplx z) {
    switch (g.kind) {
        case SpaceKind::Sphere: return 1.0 + zbar * z;
        case SpaceKind::Disk:   return 1.0 - zbar * z;
        case SpaceKind::Plane:  return 1.0;
    }
    return 1.0;
}

void check_branch(const PhaseSpaceGeometry& g, cplx zbar, cplx z) {
    if (g.kind == SpaceKind::Plane) return;
    const cplx u = kernel_arg(g, zbar, z);
    if (std::abs(u) < 1e-14 * (1.0 + std::abs(zbar * z)))
        throw BranchPointError("Kaehler potential evaluated at a branch point");
}

} // namespace

PhaseSpaceGeometry PhaseSpaceGeometry::sphere(double l) {
    if (!(l > 0) || std::abs(l - std::round(l)) > 1e-9)
        throw InvalidSpinError("sphere weight l = 2j must be a positive integer");
    return {SpaceKind::Sphere, std::round(l)};
}

PhaseSpaceGeometry PhaseSpaceGeometry::plane(double gamma) {
    if (!(gamma > 0))
        throw InvalidWeightError("plane weight gamma must be positive");
    return {SpaceKind::Plane, gamma};
}

PhaseSpaceGeometry PhaseSpaceGeometry::disk(double l) {
    if (!(l > 1))
        throw InvalidWeightError("disk weight l = 2k requires k > 1/2");
    return {SpaceKind::Disk, l};
}

cplx kahler_potential(const PhaseSpaceGeometry& g, cplx zbar1, cplx z2) {
    check_branch(g, zbar1, z2);
    switch (g.kind) {
        case SpaceKind::Sphere: return g.weight * std::log(1.0 + zbar1 * z2);
        case SpaceKind::Plane:  return g.weight * zbar1 * z2;
        case SpaceKind::Disk:   return -g.weight * std::log(1.0 - zbar1 * z2);
    }
    return 0.0;
}

cplx kahler_dz(const PhaseSpaceGeometry& g, cplx zbar, cplx z) {
    check_branch(g, zbar, z);
    switch (g.kind) {
        case SpaceKind::Sphere: return g.weight * zbar / (1.0 + zbar * z);
        case SpaceKind::Plane:  return g.weight * zbar;
        case SpaceKind::Disk:   return g.weight * zbar / (1.0 - zbar * z);
    }
    return 0.0;
}

cplx kahler_dzbar(const PhaseSpaceGeometry& g, cplx zbar, cplx z) {
    check_branch(g, zbar, z);
    switch (g.kind) {
        case SpaceKind::Sphere: return g.weight * z / (1.0 + zbar * z);
        case SpaceKind::Plane:  return g.weight * z;
        case SpaceKind::Disk:   return g.weight * z / (1.0 - zbar * z);
    }
    return 0.0;
}

cplx kahler_dzz(const PhaseSpaceGeometry& g, cplx zbar, cplx z) {
    check_branch(g, zbar, z);
    const cplx u = kernel_arg(g, zbar, z);
    switch (g.kind) {
        case SpaceKind::Sphere: return -g.weight * zbar * zbar / (u * u);
        case SpaceKind::Plane:  return 0.0;
        case SpaceKind::Disk:   return g.weight * zbar * zbar / (u * u);
    }
    return 0.0;
}

cplx kahler_dzbarzbar(const PhaseSpaceGeometry& g, cplx zbar, cplx z) {
    check_branch(g, zbar, z);
    const cplx u = kernel_arg(g, zbar, z);
    switch (g.kind) {
        case SpaceKind::Sphere: return -g.weight * z * z / (u * u);
        case SpaceKind::Plane:  return 0.0;
        case SpaceKind::Disk:   return g.weight * z * z / (u * u);
    }
    return 0.0;
}

cplx metric(const PhaseSpaceGeometry& g, cplx zbar, cplx z) {
    check_branch(g, zbar, z);
    const cplx u = kernel_arg(g, zbar, z);
    cplx m;
    switch (g.kind) {
        case SpaceKind::Sphere: m = g.weight / (u * u); break;
        case SpaceKind::Plane:  m = g.weight; break;
        case SpaceKind::Disk:   m = g.weight / (u * u); break;
    }
    return m + g.metric_test_offset;
}

cplx metric_dz(const PhaseSpaceGeometry& g, cplx zbar, cplx z) {
    check_branch(g, zbar, z);
    const cplx u = kernel_arg(g, zbar, z);
    switch (g.kind) {
        case SpaceKind::Sphere: return -2.0 * g.weight * zbar / (u * u * u);
        case SpaceKind::Plane:  return 0.0;
        case SpaceKind::Disk:   return 2.0 * g.weight * zbar / (u * u * u);
    }
    return 0.0;
}

cplx metric_dzbar(const PhaseSpaceGeometry& g, cplx zbar, cplx z) {
    check_branch(g, zbar, z);
    const cplx u = kernel_arg(g, zbar, z);
    switch (g.kind) {
        case SpaceKind::Sphere: return -2.0 * g.weight * z / (u * u * u);
        case SpaceKind::Plane:  return 0.0;
        case SpaceKind::Disk:   return 2.0 * g.weight * z / (u * u * u);
    }
    return 0.0;
}

cplx log_overlap(const PhaseSpaceGeometry& g, cplx z1, cplx z2) {
    const cplx zb1 = std::conj(z1);
    const cplx zb2 = std::conj(z2);
    return kahler_potential(g, zb1, z2)
         - 0.5 * kahler_potential(g, zb1, z1)
         - 0.5 * kahler_potential(g, zb2, z2);
}

cplx overlap(const PhaseSpaceGeometry& g, cplx z1, cplx z2) {
    return std::exp(log_overlap(g, z1, z2));
}

double liouville_density(const PhaseSpaceGeometry& g, cplx z) {
    if (!in_chart_diagonal(g, z))
        throw ChartDomainError("point outside the chart domain");
    const double r2 = std::norm(z);
    switch (g.kind) {
        case SpaceKind::Sphere: {
            const double d = 1.0 + r2;
            return (g.weight + 1.0) / (d * d);
        }
        case SpaceKind::Plane:
            return g.weight;
        case SpaceKind::Disk: {
            const double d = 1.0 - r2;
            return (g.weight - 1.0) / (d * d);
        }
    }
    return 0.0;
}

bool in_chart_diagonal(const PhaseSpaceGeometry& g, cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    if (g.kind == SpaceKind::Disk) return std::abs(z) < 1.0;
    return true;
}

cplx laplace_beltrami(const PhaseSpaceGeometry& g, cplx f_mixed, cplx zbar, cplx z) {
    return f_mixed / metric(g, zbar, z);
}

cplx laplace_beltrami(const PhaseSpaceGeometry& g, const ScalarField& f,
                      cplx zbar, cplx z, double step) {
    if (g.kind == SpaceKind::Disk) {
        // the 4-point stencil must stay off the kernel zero set
        const double m = std::max(std::abs(zbar), std::abs(z));
        if ((m + step) * (m + step) >= 1.0)
            throw StepTooLargeError("finite-difference stencil leaves the disk chart");
    }
    const double h = step;
    const cplx mixed = (f(zbar + h, z + h) - f(zbar + h, z - h)
                      - f(zbar - h, z + h) + f(zbar - h, z - h)) / (4.0 * h * h);
    return mixed / metric(g, zbar, z);
}

} // namespace qcprop
