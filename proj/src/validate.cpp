#include "qcprop/validate.hpp"

#include "qcprop/action.hpp"
#include "qcprop/config.hpp"
#include "qcprop/dynamics.hpp"
#include "qcprop/exact.hpp"
#include "qcprop/geometry.hpp"
#include "qcprop/runner.hpp"
#include "qcprop/semiclassics.hpp"
#include "qcprop/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace qcprop {

namespace {

constexpr cplx I{0.0, 1.0};

CheckResult make_check(std::string name, double measured, double threshold,
                       std::string detail = {}) {
    return {std::move(name), measured <= threshold, measured, threshold, std::move(detail)};
}

CheckResult make_flag(std::string name, bool pass, std::string detail = {}) {
    return {std::move(name), pass, pass ? 0.0 : 1.0, 0.5, std::move(detail)};
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

std::vector<cplx> random_points(double radius, int count, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> pts;
    while (static_cast<int>(pts.size()) < count) {
        const cplx z(u(rng), u(rng));
        if (std::abs(z) <= 1.0) pts.push_back(radius * z);
    }
    return pts;
}

double sample_radius(const PhaseSpaceGeometry& g) {
    return g.kind == SpaceKind::Disk ? 0.7 : 1.5;
}

// Bundled example set used across the determinant, action and propagator
// checks.
struct Example {
    std::string name;
    PhaseSpaceGeometry geometry;
    HamiltonianSpec hamiltonian;
    BoundaryData boundary;
};

Example ex_su2_linear(double j = 2.0) {
    return {"su2-linear",
            PhaseSpaceGeometry::sphere(2.0 * j),
            su2_linear_spec(0.7, {0.3, 0.2}),
            {{0.4, 0.0}, {-0.1, 0.5}, 1.0}};
}

Example ex_oscillator() {
    return {"oscillator",
            PhaseSpaceGeometry::plane(1.0),
            oscillator_spec(1.3),
            {{0.7, 0.3}, {0.2, -0.5}, 0.9}};
}

Example ex_amplifier(double omega, double g) {
    return {"amplifier",
            PhaseSpaceGeometry::plane(1.0),
            parametric_amplifier_spec(omega, g),
            {{0.4, 0.2}, {0.3, -0.1}, 1.0}};
}

Example ex_quadratic_spin(double j = 5.0) {
    return {"quadratic-spin",
            PhaseSpaceGeometry::sphere(2.0 * j),
            su2_quadratic_spec(),
            {{0.3, 0.0}, {0.2, 0.0}, 0.5}};
}

Example ex_disk_linear() {
    HamiltonianSpec h;
    h.algebra = Algebra::SU11;
    h.terms.push_back({{GenId::Weight}, {TimeCoeff::Form::Const, 1.1, 0.0}, HamiltonianTerm::LNorm::None});
    h.terms.push_back({{GenId::Raise}, {TimeCoeff::Form::Const, {0.15, 0.1}, 0.0}, HamiltonianTerm::LNorm::None});
    h.terms.push_back({{GenId::Lower}, {TimeCoeff::Form::Const, {0.15, -0.1}, 0.0}, HamiltonianTerm::LNorm::None});
    return {"disk-linear", PhaseSpaceGeometry::disk(2.6), h, {{0.2, 0.05}, {0.1, -0.1}, 0.8}};
}

std::vector<Example> bundled_examples() {
    return {ex_su2_linear(), ex_oscillator(), ex_amplifier(0.0, 0.5), ex_amplifier(1.1, 0.6),
            ex_quadratic_spin(), ex_disk_linear()};
}

// Closed-form SU(2) evolution a, b for constant A, f.
std::pair<cplx, cplx> su2_ab_closed(double A, cplx f, double t) {
    const double om = std::sqrt(A * A + std::norm(f));
    if (om == 0.0) return {1.0, 0.0};
    const cplx a = std::cos(om * t) - I * A * std::sin(om * t) / om;
    const cplx b = -I * f * std::sin(om * t) / om;
    return {a, b};
}

cplx su2_linear_phi_closed(double j, double A, cplx f, const BoundaryData& bd) {
    const auto [a, b] = su2_ab_closed(A, f, bd.tau);
    const cplx D = std::conj(a) - std::conj(b) * bd.z_I + b * bd.zbar_F + a * bd.zbar_F * bd.z_I;
    const cplx z_F = std::conj(bd.zbar_F);
    return 2.0 * j * std::log(D)
         - j * std::log((1.0 + std::norm(z_F)) * (1.0 + std::norm(bd.z_I)));
}

// Oscillator and squeeze closed forms (gamma = 1).
cplx oscillator_phi_closed(double gamma, double omega, const BoundaryData& bd) {
    const cplx z_F = std::conj(bd.zbar_F);
    return gamma * bd.zbar_F * bd.z_I * std::exp(-I * omega * bd.tau)
         - 0.5 * gamma * (std::norm(z_F) + std::norm(bd.z_I));
}

cplx amplifier_phi_closed(double omega, double g, const BoundaryData& bd) {
    const double r = g * bd.tau;
    const cplx rot = std::exp(-I * omega * bd.tau);
    const cplx z_F = std::conj(bd.zbar_F);
    return 0.5 * I * std::tanh(r) * (bd.zbar_F * bd.zbar_F * rot * rot + bd.z_I * bd.z_I)
         + bd.zbar_F * bd.z_I * rot / std::cosh(r)
         - 0.5 * (std::norm(z_F) + std::norm(bd.z_I));
}

// Extended-precision reimplementation of the potential, so the second
// difference at step 1e-5 is not drowned by double roundoff.
std::complex<long double> potential_ld(const PhaseSpaceGeometry& g,
                                       std::complex<long double> zbar,
                                       std::complex<long double> z) {
    const long double l = g.weight;
    switch (g.kind) {
        case SpaceKind::Sphere: return l * std::log(1.0L + zbar * z);
        case SpaceKind::Plane:  return l * zbar * z;
        case SpaceKind::Disk:   return -l * std::log(1.0L - zbar * z);
    }
    return 0.0L;
}

double metric_fd_defect(const PhaseSpaceGeometry& g, const std::vector<cplx>& pts) {
    const long double h = 1e-5L;
    double worst = 0.0;
    for (cplx z : pts) {
        const std::complex<long double> zz(z.real(), z.imag());
        const std::complex<long double> zb = std::conj(zz);
        const std::complex<long double> fd =
            (potential_ld(g, zb + h, zz + h) - potential_ld(g, zb + h, zz - h)
           - potential_ld(g, zb - h, zz + h) + potential_ld(g, zb - h, zz - h)) / (4.0L * h * h);
        const cplx fd_d(static_cast<double>(fd.real()), static_cast<double>(fd.imag()));
        worst = std::max(worst, rel(metric(g, std::conj(z), z), fd_d));
    }
    return worst;
}

// Matrix-route symbol, the oracle side of the closed-form checks.
cplx symbol_matrix_route(const Representation& rep, const Eigen::MatrixXcd& X, cplx zbar, cplx z) {
    const Eigen::VectorXcd b = rep.coherent_unnormalized(zbar);
    const Eigen::VectorXcd c = rep.coherent_unnormalized(z);
    const cplx K = (b.transpose() * c)(0, 0);
    return (b.transpose() * (X * c))(0, 0) / K;
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

} // namespace

std::vector<CheckResult> run_geometry_checks() {
    std::vector<CheckResult> out;
    const std::vector<PhaseSpaceGeometry> spaces = {
        PhaseSpaceGeometry::sphere(2), PhaseSpaceGeometry::sphere(5),
        PhaseSpaceGeometry::plane(1.0), PhaseSpaceGeometry::plane(2.7),
        PhaseSpaceGeometry::disk(2.0), PhaseSpaceGeometry::disk(3.4)};

    {   // hermiticity of the overlap
        double worst = 0.0;
        unsigned seed = 101;
        for (const auto& g : spaces) {
            const auto pts = random_points(sample_radius(g), 200, seed++);
            for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
                const cplx o12 = overlap(g, pts[i], pts[i + 1]);
                const cplx o21 = overlap(g, pts[i + 1], pts[i]);
                worst = std::max(worst, std::abs(o12 - std::conj(o21)));
            }
        }
        out.push_back(make_check("geometry.overlap-hermiticity", worst, 1e-12));
    }
    {   // weight linearity of the potential
        double worst = 0.0;
        for (const auto& g : spaces) {
            PhaseSpaceGeometry unit = g;
            unit.weight = 1.0;
            for (cplx z : random_points(sample_radius(g), 20, 7)) {
                const cplx zb = std::conj(z) * cplx(0.9, 0.07);  // off-diagonal slots
                worst = std::max(worst, rel(kahler_potential(g, zb, z),
                                            g.weight * kahler_potential(unit, zb, z)));
            }
        }
        out.push_back(make_check("geometry.weight-linearity", worst, 1e-13));
    }
    {   // metric vs finite differences of the potential
        double worst = 0.0;
        unsigned seed = 300;
        for (const auto& g : spaces)
            worst = std::max(worst, metric_fd_defect(g, random_points(sample_radius(g), 30, seed++)));
        out.push_back(make_check("geometry.metric-potential-consistency", worst, 1e-6));
    }
    {   // Cauchy-Schwarz bound, strict inequality off the diagonal
        bool ok = true;
        double worst = 0.0;
        for (const auto& g : spaces) {
            const auto pts = random_points(sample_radius(g), 100, 99);
            for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
                const double m = std::abs(overlap(g, pts[i], pts[i + 1]));
                worst = std::max(worst, m);
                if (m > 1.0 + 1e-12 || (std::abs(pts[i] - pts[i + 1]) > 1e-6 && m >= 1.0))
                    ok = false;
            }
            if (std::abs(std::abs(overlap(g, 0.31, 0.31)) - 1.0) > 1e-12) ok = false;
        }
        out.push_back(make_flag("geometry.cauchy-schwarz", ok,
                                "max off-diagonal |overlap| = " + std::to_string(worst)));
    }
    {   // metric positivity on the diagonal
        double worst = 1.0;
        for (const auto& g : spaces)
            for (cplx z : random_points(sample_radius(g), 50, 17)) {
                const cplx m = metric(g, std::conj(z), z);
                worst = std::min(worst, m.real());
                if (std::abs(m.imag()) > 1e-12) worst = -1.0;
            }
        out.push_back(make_flag("geometry.metric-positive", worst > 0.0));
    }
    {   // resolution of unity on the sphere, j <= 2.  In x = cos(theta) with
        // z = tan(theta/2) e^{i phi} the integrand is a polynomial in x of
        // degree 2j, so Gauss-Legendre in x and a uniform angular rule are
        // exact up to roundoff.
        double worst = 0.0;
        for (double j : {0.5, 1.0, 2.0}) {
            const Representation rep = Representation::su2(j);
            Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rep.dim, rep.dim);
            const int nphi = 4 * static_cast<int>(2 * j) + 9;
            std::vector<double> gx, gw;
            gauss_legendre(static_cast<int>(2 * j) + 4, gx, gw);
            for (std::size_t iq = 0; iq < gx.size(); ++iq) {
                const double r = std::sqrt(std::max(0.0, (1.0 - gx[iq]) / (1.0 + gx[iq])));
                for (int ip = 0; ip < nphi; ++ip) {
                    const double phi = 2.0 * std::numbers::pi * ip / nphi;
                    const cplx z = r * std::exp(I * phi);
                    const auto sv = coherent_vector(rep, z);
                    const double w = (2.0 * j + 1.0) / (4.0 * std::numbers::pi) * gw[iq]
                                   * (2.0 * std::numbers::pi / nphi);
                    acc += w * sv.coefficients * sv.coefficients.adjoint();
                }
            }
            const Eigen::MatrixXcd dev = acc - Eigen::MatrixXcd::Identity(rep.dim, rep.dim);
            worst = std::max(worst, dev.cwiseAbs().maxCoeff());
        }
        out.push_back(make_check("geometry.resolution-of-unity", worst, 1e-6));
    }
    {   // disk normalization: int |<0|z>|^2 dmu = 1 for k = 1
        const auto g = PhaseSpaceGeometry::disk(2.0);
        double integral = 0.0;
        const int nrad = 4000;
        for (int iq = 0; iq < nrad; ++iq) {
            const double u = (iq + 0.5) / nrad;  // u = r^2 on (0,1)
            const cplx z = std::sqrt(u);
            const double ov2 = std::norm(overlap(g, 0.0, z));
            integral += ov2 * liouville_density(g, z) / nrad;
        }
        out.push_back(make_check("geometry.disk-unity-normalization",
                                 std::abs(integral - 1.0), 1e-6));
    }
    return out;
}

std::vector<CheckResult> run_symbol_checks() {
    std::vector<CheckResult> out;

    std::vector<PhaseSpaceGeometry> spaces = {
        PhaseSpaceGeometry::sphere(1), PhaseSpaceGeometry::sphere(2), PhaseSpaceGeometry::sphere(10),
        PhaseSpaceGeometry::plane(1.0), PhaseSpaceGeometry::plane(2.0),
        PhaseSpaceGeometry::disk(2.6)};

    {   // closed-form generator symbols against the matrix route; the chart
        // weight of the plane generators is carried by the coherent vectors
        double worst = 0.0;
        unsigned seed = 500;
        for (const auto& g : spaces) {
            const Representation rep = representation_for(g, 64);
            for (GenId id : {GenId::Raise, GenId::Lower, GenId::Weight}) {
                HamiltonianSpec h;
                h.algebra = algebra_for(g.kind);
                h.terms.push_back({{id}, {TimeCoeff::Form::Const, 1.0, 0.0}, HamiltonianTerm::LNorm::None});
                const SymbolEvaluator sym(g, h);
                const Eigen::MatrixXcd X = rep.gen(id);
                for (cplx z : random_points(sample_radius(g) * 0.8, 12, seed++)) {
                    const cplx zb = std::conj(z) * cplx(1.05, -0.1);
                    const cplx closed = sym.value(zb, z, 0.0).value;
                    const cplx matrix = symbol_matrix_route(rep, X, zb, z);
                    worst = std::max(worst, rel(closed, matrix));
                }
            }
        }
        out.push_back(make_check("symbols.generator-oracle-agreement", worst, 1e-10));
    }
    {   // quadratic spin term against the hand-derived closed form
        double worst = 0.0;
        for (double j : {1.0, 2.5, 5.0}) {
            const auto g = PhaseSpaceGeometry::sphere(2.0 * j);
            const SymbolEvaluator sym(g, su2_quadratic_spec());
            for (cplx z : random_points(1.2, 12, 41)) {
                const cplx zb = std::conj(z) * cplx(0.95, 0.08);
                const cplx u = zb * z;
                const cplx closed = 2.0 * j * (zb * zb + z * z) / ((1.0 + u) * (1.0 + u));
                worst = std::max(worst, rel(sym.jet(zb, z, 0.0).value, closed));
            }
        }
        out.push_back(make_check("symbols.quadratic-spin-closed-form", worst, 1e-10));
    }
    {   // plane product terms: adag^2 symbol is gamma zbar^2
        const auto g = PhaseSpaceGeometry::plane(1.0);
        const SymbolEvaluator sym(g, parametric_amplifier_spec(0.0, 2.0));  // -(adag^2 + a^2)
        double worst = 0.0;
        for (cplx z : random_points(1.4, 10, 55)) {
            const cplx zb = std::conj(z) * cplx(0.9, 0.2);
            const cplx closed = -(zb * zb + z * z);
            worst = std::max(worst, rel(sym.jet(zb, z, 0.0).value, closed));
        }
        out.push_back(make_check("symbols.plane-quadratic-closed-form", worst, 1e-10));
    }
    {   // analytic gradients against central differences
        double worst = 0.0;
        const std::vector<std::pair<PhaseSpaceGeometry, HamiltonianSpec>> cases = {
            {ex_su2_linear().geometry, ex_su2_linear().hamiltonian},
            {ex_oscillator().geometry, ex_oscillator().hamiltonian},
            {ex_amplifier(1.1, 0.6).geometry, ex_amplifier(1.1, 0.6).hamiltonian},
            {ex_quadratic_spin().geometry, ex_quadratic_spin().hamiltonian},
            {ex_disk_linear().geometry, ex_disk_linear().hamiltonian}};
        unsigned seed = 900;
        for (const auto& [g, h] : cases) {
            const SymbolEvaluator sym(g, h);
            const double step = 1e-6;
            for (cplx z : random_points(sample_radius(g) * 0.8, 100, seed++)) {
                const cplx zb = std::conj(z) * cplx(1.02, -0.05);
                const double t = 0.3;
                const SymbolValue v = sym.value(zb, z, t);
                const cplx fd_z = (sym.value(zb, z + step, t).value - sym.value(zb, z - step, t).value) / (2 * step);
                const cplx fd_zb = (sym.value(zb + step, z, t).value - sym.value(zb - step, z, t).value) / (2 * step);
                const double scale = std::max(1.0, std::abs(v.value));
                worst = std::max(worst, std::abs(v.dz - fd_z) / scale);
                worst = std::max(worst, std::abs(v.dzbar - fd_zb) / scale);
            }
        }
        out.push_back(make_check("symbols.gradient-consistency", worst, 1e-6));
    }
    {   // hermitian specs have real diagonal symbols
        double worst = 0.0;
        for (const auto& ex : bundled_examples()) {
            const SymbolEvaluator sym(ex.geometry, ex.hamiltonian);
            for (cplx z : random_points(sample_radius(ex.geometry) * 0.8, 10, 77)) {
                const cplx v = sym.diagonal(z, 0.45);
                worst = std::max(worst, std::abs(v.imag()) / std::max(1.0, std::abs(v)));
            }
        }
        out.push_back(make_check("symbols.hermitian-diagonal-real", worst, 1e-12));
    }
    {   // momentum-map linearity in the weight
        double worst = 0.0;
        for (GenId id : {GenId::Raise, GenId::Lower, GenId::Weight}) {
            cplx base{};
            bool first = true;
            for (double l : {1.0, 2.0, 10.0}) {
                const auto g = PhaseSpaceGeometry::sphere(l);
                HamiltonianSpec h;
                h.algebra = Algebra::SU2;
                h.terms.push_back({{id}, {TimeCoeff::Form::Const, 1.0, 0.0}, HamiltonianTerm::LNorm::None});
                const cplx v = SymbolEvaluator(g, h).diagonal({0.4, 0.3}, 0.0) / l;
                if (first) { base = v; first = false; }
                worst = std::max(worst, std::abs(v - base));
            }
        }
        out.push_back(make_check("symbols.weight-scaling", worst, 1e-12));
    }
    {   // Berezin shift: plane round trip and the normal-ordering shift
        const auto g = PhaseSpaceGeometry::plane(1.5);
        const SymbolEvaluator n_sym(g, oscillator_spec(0.9));
        double worst = 0.0;
        // (1+Delta)(gamma w zbar z) = gamma w zbar z + w
        for (cplx z : random_points(1.2, 6, 33)) {
            const cplx zb = std::conj(z);
            const cplx shifted = contravariant_asymptotic(n_sym, zb, z, 0.0, SymbolShift::ToCovariant);
            const cplx expect = 1.5 * 0.9 * zb * z + 0.9;
            worst = std::max(worst, rel(shifted, expect));
        }
        out.push_back(make_check("symbols.anti-normal-shift", worst, 1e-10));
    }
    {   // round trip (1-Delta)(1+Delta) H = H + O(1/l^2) on the sphere
        double dev5 = 0.0, dev10 = 0.0, dev20 = 0.0;
        auto dev_for = [&](double j) {
            const auto g = PhaseSpaceGeometry::sphere(2.0 * j);
            HamiltonianSpec h;
            h.algebra = Algebra::SU2;
            h.terms.push_back({{GenId::Weight}, {TimeCoeff::Form::Const, 1.0, 0.0}, HamiltonianTerm::LNorm::None});
            const SymbolEvaluator sym(g, h);
            const cplx z{0.5, 0.2};
            const cplx zb = std::conj(z);
            auto field = [&](cplx zbb, cplx zz, double t) {
                return contravariant_asymptotic(sym, zbb, zz, t, SymbolShift::ToContravariant);
            };
            const cplx back = contravariant_asymptotic(TimeField(field), g, zb, z, 0.0,
                                                       SymbolShift::ToCovariant, 1e-4);
            return rel(back, sym.diagonal(z, 0.0));
        };
        dev5 = dev_for(5.0);
        dev10 = dev_for(10.0);
        dev20 = dev_for(20.0);
        const bool decays = dev10 <= dev5 * 0.25 * 1.8 && dev20 <= dev10 * 0.25 * 1.8;
        std::ostringstream det;
        det << "dev(5,10,20) = " << dev5 << ", " << dev10 << ", " << dev20;
        out.push_back(make_flag("symbols.scheme-round-trip-decay", decays && dev5 < 0.05, det.str()));
    }
    return out;
}

std::vector<CheckResult> run_exact_checks() {
    std::vector<CheckResult> out;
    {   // algebra commutators
        double worst = 0.0;
        for (double j : {0.5, 1.0, 5.0}) {
            const Representation r = Representation::su2(j);
            const Eigen::MatrixXcd c1 = r.weight_m * r.raise_m - r.raise_m * r.weight_m - r.raise_m;
            const Eigen::MatrixXcd c2 = r.weight_m * r.lower_m - r.lower_m * r.weight_m + r.lower_m;
            const Eigen::MatrixXcd c3 = r.raise_m * r.lower_m - r.lower_m * r.raise_m - 2.0 * r.weight_m;
            worst = std::max({worst, c1.cwiseAbs().maxCoeff(), c2.cwiseAbs().maxCoeff(),
                              c3.cwiseAbs().maxCoeff()});
        }
        {
            const Representation r = Representation::hw(1.0, 48);
            const Eigen::MatrixXcd c = r.lower_m * r.raise_m - r.raise_m * r.lower_m;
            const int n = r.dim - 1;
            worst = std::max(worst, (c.topLeftCorner(n, n)
                                     - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff());
        }
        {
            const Representation r = Representation::su11(1.0, 48);
            const int n = r.dim - 1;
            const Eigen::MatrixXcd c1 = r.weight_m * r.raise_m - r.raise_m * r.weight_m - r.raise_m;
            const Eigen::MatrixXcd c3 = (r.raise_m * r.lower_m - r.lower_m * r.raise_m
                                         + 2.0 * r.weight_m).topLeftCorner(n, n);
            worst = std::max({worst, c1.topLeftCorner(n, n).cwiseAbs().maxCoeff(),
                              c3.cwiseAbs().maxCoeff()});
        }
        out.push_back(make_check("exact.commutators", worst, 1e-12));
    }
    {   // evolve unitarity on the Hermitian bundled specs
        double worst = 0.0;
        for (const auto& ex : {ex_su2_linear(), ex_oscillator(), ex_amplifier(0.0, 0.5)}) {
            const Representation rep = representation_for(ex.geometry, 64);
            const Eigen::MatrixXcd U = evolve(rep, ex.hamiltonian, ex.boundary.tau);
            const Eigen::MatrixXcd dev = U.adjoint() * U - Eigen::MatrixXcd::Identity(rep.dim, rep.dim);
            worst = std::max(worst, dev.cwiseAbs().maxCoeff());
        }
        out.push_back(make_check("exact.evolve-unitarity", worst, 1e-10));
    }
    {   // coherent overlaps agree with the geometry module
        double worst_su2 = 0.0, worst_trunc = 0.0;
        {
            const auto g = PhaseSpaceGeometry::sphere(3);
            const Representation rep = Representation::su2(1.5);
            for (cplx z : random_points(1.5, 20, 61)) {
                const cplx w = z * cplx(0.3, 0.8) + cplx(0.1, 0.0);
                const cplx o_rep = coherent_vector(rep, z).coefficients.dot(
                    coherent_vector(rep, w).coefficients);
                worst_su2 = std::max(worst_su2, std::abs(o_rep - overlap(g, z, w)));
            }
        }
        {
            const auto g = PhaseSpaceGeometry::plane(1.0);
            const Representation rep = Representation::hw(1.0, 64);
            for (cplx z : random_points(2.0, 14, 62)) {
                const cplx w = -0.4 * z + cplx(0.2, 0.5);
                const cplx o_rep = coherent_vector(rep, z).coefficients.dot(
                    coherent_vector(rep, w).coefficients);
                worst_trunc = std::max(worst_trunc, std::abs(o_rep - overlap(g, z, w)));
            }
            const auto gd = PhaseSpaceGeometry::disk(2.6);
            const Representation repd = Representation::su11(1.3, 128);
            for (cplx z : random_points(0.7, 14, 63)) {
                const cplx w = 0.5 * z + cplx(0.1, -0.15);
                const cplx o_rep = coherent_vector(repd, z).coefficients.dot(
                    coherent_vector(repd, w).coefficients);
                worst_trunc = std::max(worst_trunc, std::abs(o_rep - overlap(gd, z, w)));
            }
        }
        out.push_back(make_check("exact.coherent-overlap-su2", worst_su2, 1e-12));
        out.push_back(make_check("exact.coherent-overlap-truncated", worst_trunc, 1e-10));
    }
    {   // amplitude at tau = 0 reduces to the overlap
        double worst = 0.0;
        for (const auto& ex : bundled_examples()) {
            const Representation rep = representation_for(ex.geometry, 64);
            const cplx z_F = std::conj(ex.boundary.zbar_F);
            const cplx amp = exact_amplitude(rep, ex.hamiltonian, ex.boundary.z_I, z_F, 0.0);
            worst = std::max(worst, std::abs(amp - overlap(ex.geometry, z_F, ex.boundary.z_I)));
        }
        out.push_back(make_check("exact.amplitude-tau0-overlap", worst, 1e-12));
    }
    return out;
}

std::vector<CheckResult> run_dynamics_checks() {
    std::vector<CheckResult> out;
    SolverSettings st;

    {   // flow residual on the stored grid
        double worst = 0.0;
        for (const auto& ex : bundled_examples()) {
            const SymbolEvaluator sym(ex.geometry, ex.hamiltonian);
            const ClassicalTrajectory t = solve_trajectory(sym, ex.boundary, st);
            worst = std::max(worst, flow_residual_max(t, sym));
        }
        out.push_back(make_check("dynamics.flow-residual", worst, 1e-7));
    }
    {   // Moebius and shooting solutions coincide for linear specs
        const Example ex = ex_su2_linear();
        const SymbolEvaluator sym(ex.geometry, ex.hamiltonian);
        const ClassicalTrajectory lin = solve_linear_flow(ex.hamiltonian, ex.geometry, ex.boundary, st.steps, st);
        const ClassicalTrajectory sht = solve_bvp_shooting(sym, ex.boundary, ex.boundary.zbar_F, st);
        double worst = 0.0;
        for (std::size_t i = 0; i < lin.grid.size(); ++i) {
            worst = std::max(worst, std::abs(lin.z_path[i] - sht.z_path[i]));
            worst = std::max(worst, std::abs(lin.zbar_path[i] - sht.zbar_path[i]));
        }
        worst = std::max(worst, std::abs(lin.sens_zI - sht.sens_zI));
        worst = std::max(worst, std::abs(lin.sens_zbarF - sht.sens_zbarF));
        out.push_back(make_check("dynamics.cross-solver-consistency", worst, 1e-9));
    }
    {   // variational sensitivities against re-solved finite differences
        double worst = 0.0;
        for (const auto& ex : {ex_su2_linear(), ex_quadratic_spin(), ex_amplifier(1.1, 0.6)}) {
            SolverSettings fd = st;
            fd.fixed_steps = 2048;
            fd.tol = 1e-13;
            fd.verify_quadrature = false;
            const SymbolEvaluator sym(ex.geometry, ex.hamiltonian);
            const ClassicalTrajectory base = solve_trajectory(sym, ex.boundary, fd);
            const double h = 1e-6;
            auto resolve = [&](cplx dzi, cplx dzf) {
                BoundaryData p{ex.boundary.z_I + dzi, ex.boundary.zbar_F + dzf, ex.boundary.tau};
                return ex.hamiltonian.linear()
                    ? solve_linear_flow(ex.hamiltonian, ex.geometry, p, 16, fd)
                    : solve_bvp_shooting(sym, p, base.zbar0(), fd);
            };
            const cplx sI_fd = (resolve(h, 0).z_path.back() - resolve(-h, 0).z_path.back()) / (2 * h);
            const cplx sF_fd = (resolve(0, h).zbar0() - resolve(0, -h).zbar0()) / (2 * h);
            worst = std::max(worst, rel(base.sens_zI, sI_fd));
            worst = std::max(worst, rel(base.sens_zbarF, sF_fd));
        }
        out.push_back(make_check("dynamics.sensitivity-fd-consistency", worst, 1e-5));
    }
    {   // short-duration limit
        double r3 = 0.0, r4 = 0.0;
        const Example ex = ex_quadratic_spin();
        const SymbolEvaluator sym(ex.geometry, ex.hamiltonian);
        for (double tau : {1e-3, 1e-4}) {
            BoundaryData p{ex.boundary.z_I, ex.boundary.zbar_F, tau};
            const ClassicalTrajectory t = solve_bvp_shooting(sym, p, p.zbar_F, st);
            const double d = std::abs(t.zbar0() - p.zbar_F)
                           + std::abs(t.sens_zI - 1.0) + std::abs(t.sens_zbarF - 1.0);
            (tau == 1e-3 ? r3 : r4) = d;
        }
        const bool ok = r3 < 1e-2 && r4 < 1.5e-3 && r4 < 0.5 * r3;
        std::ostringstream det;
        det << "defect(1e-3) = " << r3 << ", defect(1e-4) = " << r4;
        out.push_back(make_flag("dynamics.short-duration-limit", ok, det.str()));
    }
    {   // Wronskian constancy on every bundled Jacobi solve
        double worst = 0.0;
        for (const auto& ex : bundled_examples()) {
            const SymbolEvaluator sym(ex.geometry, ex.hamiltonian);
            const ClassicalTrajectory t = solve_trajectory(sym, ex.boundary, st);
            const JacobiSolution js = solve_jacobi(t, sym, st);
            worst = std::max(worst, js.wronskian_drift);
        }
        out.push_back(make_check("dynamics.wronskian-drift", worst, 1e-8));
    }
    {   // transported endpoint variations satisfy the Jacobi system
        const Example ex = ex_quadratic_spin();
        const SymbolEvaluator sym(ex.geometry, ex.hamiltonian);
        SolverSettings fine = st;
        fine.steps = 640;
        const ClassicalTrajectory t = solve_trajectory(sym, ex.boundary, fine);
        const JacobiSolution js = solve_jacobi(t, sym, fine);
        const FlowField field(sym, fine.rmax);
        const std::size_t n = t.grid.size();
        // u(s) built from d z_c(s) / d zbar_F with the metric and gauge factors
        std::vector<cplx> uu(n), uub(n);
        cplx sqrt_prev = std::sqrt(metric(ex.geometry, t.zbar_path[0], t.z_path[0]));
        for (std::size_t i = 0; i < n; ++i) {
            const cplx g = metric(ex.geometry, t.zbar_path[i], t.z_path[i]);
            // continuous square root along the path
            cplx root = std::sqrt(g);
            if (std::abs(root - sqrt_prev) > std::abs(root + sqrt_prev)) root = -root;
            sqrt_prev = root;
            const cplx gauge = std::exp(I * js.b_integral[i]);
            uu[i] = root * gauge * t.m12[i] * t.sens_zbarF;
            uub[i] = root / gauge * t.m22[i] * t.sens_zbarF;
        }
        // residual of udot = -i ctilde ubar, ubardot = i atilde u
        static const double cfd[4] = {4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
        const double h = t.grid[1] - t.grid[0];
        double worst = 0.0, scale = 0.0;
        for (std::size_t i = 4; i + 4 < n; ++i) {
            cplx du = 0.0, dub = 0.0;
            for (int k = 1; k <= 4; ++k) {
                du += cfd[k - 1] * (uu[i + k] - uu[i - k]);
                dub += cfd[k - 1] * (uub[i + k] - uub[i - k]);
            }
            du /= h;
            dub /= h;
            const FlowDerivatives d = field.full(t.grid[i], t.z_path[i], t.zbar_path[i]);
            const cplx gauge2 = std::exp(2.0 * I * js.b_integral[i]);
            const cplx res1 = du + I * d.c * gauge2 * uub[i];
            const cplx res2 = dub - I * d.a / gauge2 * uu[i];
            worst = std::max({worst, std::abs(res1), std::abs(res2)});
            scale = std::max({scale, std::abs(du), std::abs(dub), 1e-12});
        }
        out.push_back(make_check("dynamics.endpoint-variation-jacobi", worst / scale, 1e-6));
    }
    {   // quadratic spin shooting example: converged residual
        const Example ex = ex_quadratic_spin();
        const SymbolEvaluator sym(ex.geometry, ex.hamiltonian);
        const ClassicalTrajectory t = solve_bvp_shooting(sym, ex.boundary, ex.boundary.zbar_F, st);
        out.push_back(make_check("dynamics.shooting-residual", t.residual, 1e-10));
    }
    return out;
}

std::vector<CheckResult> run_action_checks() {
    std::vector<CheckResult> out;
    SolverSettings st;

    {   // free propagation reproduces the overlap on all three spaces
        double worst = 0.0;
        for (auto g : {PhaseSpaceGeometry::sphere(3), PhaseSpaceGeometry::plane(1.4),
                       PhaseSpaceGeometry::disk(2.6)}) {
            HamiltonianSpec h;
            h.algebra = algebra_for(g.kind);
            BoundaryData bd{{0.32, 0.1}, {0.15, -0.2}, 0.7};
            const SymbolEvaluator sym(g, h);
            const ClassicalTrajectory t = solve_trajectory(sym, bd, st);
            const ActionBreakdown a = total_action(t, sym, bd, st);
            worst = std::max(worst, std::abs(a.Phi_c - log_overlap(g, std::conj(bd.zbar_F), bd.z_I)));
        }
        out.push_back(make_check("action.free-case-overlap", worst, 1e-10));
    }
    {   // oscillator closed form
        const Example ex = ex_oscillator();
        const SymbolEvaluator sym(ex.geometry, ex.hamiltonian);
        const ClassicalTrajectory t = solve_trajectory(sym, ex.boundary, st);
        const ActionBreakdown a = total_action(t, sym, ex.boundary, st);
        const cplx phi = oscillator_phi_closed(1.0, 1.3, ex.boundary);
        double worst = std::abs(a.Phi_c - phi);
        worst = std::max(worst, std::abs(a.B_int - cplx(1.3 * ex.boundary.tau)));
        const MixedDerivative mx = mixed_second_derivative(t, sym, ex.boundary);
        worst = std::max(worst, std::abs(mx.value - std::exp(-I * 1.3 * ex.boundary.tau)));
        out.push_back(make_check("action.oscillator-closed-form", worst, 1e-10));
    }
    {   // linear spin closed form
        const Example ex = ex_su2_linear();
        const SymbolEvaluator sym(ex.geometry, ex.hamiltonian);
        const ClassicalTrajectory t = solve_trajectory(sym, ex.boundary, st);
        const ActionBreakdown a = total_action(t, sym, ex.boundary, st);
        const cplx phi = su2_linear_phi_closed(2.0, 0.7, {0.3, 0.2}, ex.boundary);
        double worst = rel(a.Phi_c, phi);
        const auto [aa, bb] = su2_ab_closed(0.7, {0.3, 0.2}, ex.boundary.tau);
        const cplx D = std::conj(aa) - std::conj(bb) * ex.boundary.z_I + bb * ex.boundary.zbar_F
                     + aa * ex.boundary.zbar_F * ex.boundary.z_I;
        const MixedDerivative mx = mixed_second_derivative(t, sym, ex.boundary);
        worst = std::max(worst, rel(mx.value, 4.0 / (D * D)));
        out.push_back(make_check("action.su2-linear-closed-form", worst, 1e-8));
    }
    {   // symplectic-potential identity
        double worst = 0.0;
        for (const auto& ex : bundled_examples()) {
            const SymbolEvaluator sym(ex.geometry, ex.hamiltonian);
            const ClassicalTrajectory t = solve_trajectory(sym, ex.boundary, st);
            worst = std::max(worst, theta_identity_defect(t, sym, ex.boundary, st));
        }
        out.push_back(make_check("action.theta-identity", worst, 1e-8));
    }
    {   // sensitivity mixed derivative against the finite-difference oracle
        double worst = 0.0;
        for (const auto& ex : bundled_examples()) {
            const SymbolEvaluator sym(ex.geometry, ex.hamiltonian);
            const ClassicalTrajectory t = solve_trajectory(sym, ex.boundary, st);
            const cplx a = mixed_second_derivative(t, sym, ex.boundary).value;
            const cplx b = mixed_second_derivative_fd(sym, ex.boundary, st).value;
            worst = std::max(worst, rel(a, b));
        }
        out.push_back(make_check("action.mixed-derivative-oracle", worst, 1e-5));
    }
    {   // action scales linearly in the weight for linear specs
        double worst_phi = 0.0, worst_b = 0.0;
        for (double j : {1.0, 2.0, 4.0}) {
            Example ex = ex_su2_linear(j);
            const SymbolEvaluator sym(ex.geometry, ex.hamiltonian);
            const ClassicalTrajectory t = solve_trajectory(sym, ex.boundary, st);
            const ActionBreakdown a = total_action(t, sym, ex.boundary, st);

            Example ex2 = ex_su2_linear(2.0 * j);
            const SymbolEvaluator sym2(ex2.geometry, ex2.hamiltonian);
            const ClassicalTrajectory t2 = solve_trajectory(sym2, ex2.boundary, st);
            const ActionBreakdown a2 = total_action(t2, sym2, ex2.boundary, st);

            worst_phi = std::max(worst_phi, rel(a2.Phi_c, 2.0 * a.Phi_c));
            worst_b = std::max(worst_b, std::abs(a2.B_int - a.B_int));
        }
        out.push_back(make_check("action.weight-scaling-phi", worst_phi, 1e-10));
        out.push_back(make_check("action.b-term-weight-independent", worst_b, 1e-9));
    }
    {   // flow-derivative representation of the B term
        double worst = 0.0;
        for (const auto& ex : bundled_examples()) {
            const SymbolEvaluator sym(ex.geometry, ex.hamiltonian);
            const ClassicalTrajectory t = solve_trajectory(sym, ex.boundary, st);
            const ActionBreakdown a = total_action(t, sym, ex.boundary, st);
            worst = std::max(worst, std::abs(b_term_flow_form(t, sym) - a.B_int));
        }
        out.push_back(make_check("action.b-term-flow-form", worst, 1e-7));
    }
    {   // B along the linear spin trajectory is int (2A - f zbar - fbar z)
        const Example ex = ex_su2_linear();
        const SymbolEvaluator sym(ex.geometry, ex.hamiltonian);
        SolverSettings fine = st;
        fine.steps = 400;
        const ClassicalTrajectory t = solve_trajectory(sym, ex.boundary, fine);
        const ActionBreakdown a = total_action(t, sym, ex.boundary, fine);
        const cplx f{0.3, 0.2};
        std::vector<cplx> integrand(t.grid.size());
        for (std::size_t i = 0; i < t.grid.size(); ++i)
            integrand[i] = 2.0 * 0.7 - f * t.zbar_path[i] - std::conj(f) * t.z_path[i];
        cplx simpson = 0.0;
        const double h = t.grid[1] - t.grid[0];
        for (std::size_t i = 0; i + 2 < t.grid.size(); i += 2)
            simpson += h / 3.0 * (integrand[i] + 4.0 * integrand[i + 1] + integrand[i + 2]);
        out.push_back(make_check("action.b-term-su2-closed-form", std::abs(simpson - a.B_int), 1e-7));
    }
    {   // stationarity: a smooth bump changes the action at second order
        const Example ex = ex_su2_linear();
        const SymbolEvaluator sym(ex.geometry, ex.hamiltonian);
        SolverSettings fine = st;
        fine.steps = 2000;
        const ClassicalTrajectory t = solve_trajectory(sym, ex.boundary, fine);
        const FlowField field(sym, fine.rmax);
        const double tau = ex.boundary.tau;

        auto action_with_bump = [&](double amp) {
            // grid functional with analytic path derivatives
            const std::size_t n = t.grid.size();
            std::vector<cplx> f(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double s = t.grid[i];
                const double bump = std::sin(std::numbers::pi * s / tau);
                const double dbump = std::numbers::pi / tau * std::cos(std::numbers::pi * s / tau);
                const cplx dz_dir{1.0, 0.3}, dzb_dir{0.7, -0.2};
                const cplx z = t.z_path[i] + amp * bump * dz_dir;
                const cplx zb = t.zbar_path[i] + amp * bump * dzb_dir;
                cplx P, Q;
                field.flow(s, t.z_path[i], t.zbar_path[i], P, Q);
                const cplx zdot = P + amp * dbump * dz_dir;
                const cplx zbdot = Q + amp * dbump * dzb_dir;
                const cplx H = sym.jet(zb, z, s).value;
                f[i] = -0.5 * (zdot * kahler_dz(ex.geometry, zb, z)
                               - zbdot * kahler_dzbar(ex.geometry, zb, z)) - I * H;
            }
            cplx S = 0.0;
            const double h = t.grid[1] - t.grid[0];
            for (std::size_t i = 0; i + 2 < n; i += 2)
                S += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
            // endpoints are pinned by the vanishing bump, Gamma is unchanged
            return S;
        };
        const cplx base = action_with_bump(0.0);
        const double d1 = std::abs(action_with_bump(1e-5) - base);
        const double d2 = std::abs(action_with_bump(1e-4) - base);
        const bool ok = d1 < 1e-7 && d2 / std::max(d1, 1e-300) > 30.0 && d2 / std::max(d1, 1e-300) < 300.0;
        std::ostringstream det;
        det << "dPhi(1e-5) = " << d1 << ", dPhi(1e-4) = " << d2;
        out.push_back(make_flag("action.hamilton-principle", ok, det.str()));
    }
    return out;
}

std::vector<CheckResult> run_semiclassics_checks() {
    std::vector<CheckResult> out;
    SolverSettings st;

    {   // free amplitude is the overlap, reduced amplitude is 1
        double worst = 0.0;
        for (auto g : {PhaseSpaceGeometry::sphere(2), PhaseSpaceGeometry::plane(1.0),
                       PhaseSpaceGeometry::disk(2.4)}) {
            HamiltonianSpec h;
            h.algebra = algebra_for(g.kind);
            BoundaryData bd{{0.25, -0.1}, {0.3, 0.2}, 0.6};
            const PropagatorResult r = propagator_qc(g, h, bd, st);
            worst = std::max(worst, std::abs(r.amplitude - overlap(g, std::conj(bd.zbar_F), bd.z_I)));
            worst = std::max(worst, std::abs(r.reduced - 1.0));
            worst = std::max(worst, std::abs(r.prefactor - 1.0));
        }
        out.push_back(make_check("semiclassics.free-case", worst, 1e-10));
    }
    {   // determinant duality between the Jacobi and endpoint routes: the
        // reduced amplitude squares to the inverse determinant ratio
        double worst = 0.0;
        for (const auto& ex : bundled_examples()) {
            const SymbolEvaluator sym(ex.geometry, ex.hamiltonian);
            const ClassicalTrajectory t = solve_trajectory(sym, ex.boundary, st);
            const JacobiSolution js = solve_jacobi(t, sym, st);
            const cplx det_j = det_ratio_jacobi(js);
            const PropagatorResult r = propagator_qc(ex.geometry, ex.hamiltonian, ex.boundary, st);
            const cplx probe = r.reduced * r.reduced * det_j;
            worst = std::max(worst, std::abs(probe - 1.0));
        }
        out.push_back(make_check("semiclassics.determinant-duality", worst, 2e-6));
    }
    {   // Jacobi determinant against the endpoint product form
        double worst = 0.0;
        for (const auto& ex : bundled_examples()) {
            const SymbolEvaluator sym(ex.geometry, ex.hamiltonian);
            const ClassicalTrajectory t = solve_trajectory(sym, ex.boundary, st);
            const ActionBreakdown a = total_action(t, sym, ex.boundary, st);
            const JacobiSolution js = solve_jacobi(t, sym, st);
            worst = std::max(worst, rel(det_ratio_jacobi(js),
                                        det_ratio_product_form(t, sym, a.B_int)));
        }
        out.push_back(make_check("semiclassics.det-ratio-product-form", worst, 1e-6));
    }
    {   // isometry probe on the bundled flows
        const auto su2 = ex_su2_linear();
        const auto quad = ex_quadratic_spin();
        const DhExactnessReport r1 = dh_exactness_probe(su2.geometry, su2.hamiltonian);
        const DhExactnessReport r2 = dh_exactness_probe(quad.geometry, quad.hamiltonian);
        HamiltonianSpec h0;
        h0.algebra = Algebra::SU2;
        const DhExactnessReport r3 = dh_exactness_probe(PhaseSpaceGeometry::sphere(4), h0);
        const bool ok = r1.exact_expected && r1.defect <= 1e-8
                     && !r2.exact_expected && r2.defect > 1e-3
                     && r3.exact_expected && r3.defect <= 1e-12;
        std::ostringstream det;
        det << "linear " << r1.defect << ", quadratic " << r2.defect << ", free " << r3.defect;
        out.push_back(make_flag("semiclassics.dh-exactness-probe", ok, det.str()));
    }
    {   // amplitude is continuous in the duration, no sheet crossings
        bool ok = true;
        double worst_jump = 0.0;
        for (const auto& ex : {ex_su2_linear(), ex_amplifier(1.1, 0.6)}) {
            cplx prev{};
            bool first = true;
            for (int k = 1; k <= 24; ++k) {
                BoundaryData bd{ex.boundary.z_I, ex.boundary.zbar_F, ex.boundary.tau * k / 24.0};
                const PropagatorResult r = propagator_qc(ex.geometry, ex.hamiltonian, bd, st);
                if (r.branch != 0) ok = false;
                if (!first) {
                    const double jump = std::abs(std::arg(r.amplitude / prev));
                    worst_jump = std::max(worst_jump, jump);
                    if (jump > 0.5 * std::numbers::pi) ok = false;
                }
                prev = r.amplitude;
                first = false;
            }
        }
        std::ostringstream det;
        det << "largest phase step " << worst_jump;
        out.push_back(make_flag("semiclassics.duration-continuity", ok, det.str()));
    }
    {   // rotating-frame squeeze amplitude against the quantum closed form
        const Example ex = ex_amplifier(1.1, 0.6);
        const PropagatorResult r = propagator_qc(ex.geometry, ex.hamiltonian, ex.boundary, st);
        const cplx closed = std::pow(std::cosh(0.6 * ex.boundary.tau), -0.5)
                          * std::exp(amplifier_phi_closed(1.1, 0.6, ex.boundary));
        out.push_back(make_check("semiclassics.amplifier-rotating-frame", rel(r.amplitude, closed), 1e-9));
    }
    {   // disk dynamics: the linear SU(1,1) flow is isometric, so the
        // amplitude must match the discrete-series oracle at solver accuracy
        const Example ex = ex_disk_linear();
        const DhExactnessReport probe = dh_exactness_probe(ex.geometry, ex.hamiltonian);
        const PropagatorResult r = propagator_qc(ex.geometry, ex.hamiltonian, ex.boundary, st);
        const Representation rep = representation_for(ex.geometry, 128);
        const cplx exact = exact_amplitude(rep, ex.hamiltonian, ex.boundary.z_I,
                                           std::conj(ex.boundary.zbar_F), ex.boundary.tau);
        const double dev = std::abs(r.amplitude / exact - 1.0);
        CheckResult c = make_check("semiclassics.disk-linear-exactness", dev, 1e-7);
        c.pass = c.pass && probe.exact_expected;
        out.push_back(std::move(c));
    }
    {   // unitarity bound: physical boundary data cannot exceed unit overlap
        // on the compact space
        double worst = 0.0;
        std::mt19937 rng(777);
        std::uniform_real_distribution<double> u(-0.9, 0.9);
        for (int k = 0; k < 10; ++k) {
            const Example base = ex_su2_linear();
            BoundaryData bd{{u(rng), u(rng)}, {u(rng), u(rng)}, 0.3 + 0.2 * k};
            const PropagatorResult r = propagator_qc(base.geometry, base.hamiltonian, bd, st);
            worst = std::max(worst, std::abs(std::exp(r.breakdown.Phi_c)) - 1.0);
        }
        out.push_back(make_check("semiclassics.amplitude-unitarity-bound", worst, 1e-12));
    }
    return out;
}

std::vector<CheckResult> run_runner_checks() {
    std::vector<CheckResult> out;

    json sweep_cfg = default_config_json();
    sweep_cfg["mode"] = "sweep";
    sweep_cfg["sweep"] = json::array(
        {json{{"path", "boundary.tau"}, {"values", json::array({0.4, 0.8, 1.2})}}});

    auto serialize = [](const std::vector<ResultRecord>& rs) {
        std::string s;
        for (const auto& r : rs) s += record_to_json(r).dump() + "\n";
        return s;
    };

    {   // determinism of repeated runs
        const ExperimentConfig cfg = parse_config(sweep_cfg);
        const std::string a = serialize(run_sweep(cfg, 1));
        const std::string b = serialize(run_sweep(cfg, 1));
        out.push_back(make_flag("runner.determinism", a == b && !a.empty()));
    }
    {   // parallel execution merges in input order
        const ExperimentConfig cfg = parse_config(sweep_cfg);
        const std::string a = serialize(run_sweep(cfg, 1));
        const std::string b = serialize(run_sweep(cfg, 3));
        out.push_back(make_flag("runner.parallel-merge-identical", a == b));
    }
    {   // oracle feasibility gate
        json big = default_config_json();
        big["geometry"] = json{{"kind", "sphere"}, {"weight", 30000.0}};
        big["hamiltonian"] = json::array(
            {json{{"generators", json::array({"J0"})}, {"coeff", {{"re", 0.4}, {"im", 0.0}}}}});
        const ResultRecord r = run_propagate(parse_config(big));
        out.push_back(make_flag("runner.oracle-feasibility-gate",
                                r.qc_only && r.qc && !r.exact && r.error_code.empty()));
    }
    {   // degenerate convergence fit is an error
        json single = sweep_cfg;
        single["mode"] = "convergence";
        single["geometry"] = json{{"kind", "sphere"}, {"weight", 10.0}};
        single["hamiltonian"] = json::array(
            {json{{"generators", json::array({"J+", "J+"})}, {"lnorm", "footnote2"}},
             json{{"generators", json::array({"J-", "J-"})}, {"lnorm", "footnote2"}}});
        single["sweep"] = json::array(
            {json{{"path", "geometry.weight"}, {"values", json::array({10.0})}}});
        bool threw = false;
        try {
            run_convergence(parse_config(single), 1);
        } catch (const FitDegenerateError&) {
            threw = true;
        }
        out.push_back(make_flag("runner.fit-degenerate", threw));
    }
    {   // empty sweep axis rejected
        json bad = sweep_cfg;
        bad["sweep"] = json::array({json{{"path", "boundary.tau"}, {"values", json::array()}}});
        bool threw = false;
        try {
            parse_config(bad);
        } catch (const ConfigError&) {
            threw = true;
        }
        out.push_back(make_flag("runner.empty-axis-rejected", threw));
    }
    {   // metric mutation hook is caught by the consistency check
        PhaseSpaceGeometry good = PhaseSpaceGeometry::sphere(4);
        PhaseSpaceGeometry bad = good;
        bad.metric_test_offset = 1e-3;
        const auto pts = random_points(1.2, 20, 404);
        const double clean = metric_fd_defect(good, pts);
        const double broken = metric_fd_defect(bad, pts);
        out.push_back(make_flag("runner.metric-mutation-detected",
                                clean <= 1e-6 && broken > 1e-6));
    }
    {   // missing config runs with built-in defaults
        const ResultRecord r = run_propagate(parse_config(default_config_json()));
        out.push_back(make_flag("runner.default-config",
                                r.error_code.empty() && r.rel_error && *r.rel_error < 1e-9));
    }
    return out;
}

std::vector<CheckResult> run_acceptance_criteria() {
    std::vector<CheckResult> out;
    SolverSettings st;

    {   // 1. SU(2) exactness across the weight family
        double worst_amp = 0.0, worst_red = 0.0;
        for (double j : {0.5, 1.0, 2.0, 5.0, 10.0}) {
            const Example ex = ex_su2_linear(j);
            const PropagatorResult r = propagator_qc(ex.geometry, ex.hamiltonian, ex.boundary, st);
            const Representation rep = Representation::su2(j);
            const cplx exact = exact_amplitude(rep, ex.hamiltonian, ex.boundary.z_I,
                                               std::conj(ex.boundary.zbar_F), ex.boundary.tau);
            worst_amp = std::max(worst_amp, std::abs(r.amplitude / exact - 1.0));
            worst_red = std::max(worst_red, std::abs(r.reduced - 1.0));
        }
        out.push_back(make_check("1. spin exactness, amplitude", worst_amp, 1e-7));
        out.push_back(make_check("1. spin exactness, reduced amplitude", worst_red, 1e-7));
    }
    {   // 2. harmonic oscillator
        const Example ex = ex_oscillator();
        const PropagatorResult r = propagator_qc(ex.geometry, ex.hamiltonian, ex.boundary, st);
        const cplx closed = std::exp(oscillator_phi_closed(1.0, 1.3, ex.boundary));
        const Representation rep = Representation::hw(1.0, 64);
        const cplx exact = exact_amplitude(rep, ex.hamiltonian, ex.boundary.z_I,
                                           std::conj(ex.boundary.zbar_F), ex.boundary.tau);
        out.push_back(make_check("2. oscillator vs closed form", rel(r.amplitude, closed), 1e-10));
        out.push_back(make_check("2. oscillator vs Fock oracle", std::abs(r.amplitude / exact - 1.0), 1e-9));
    }
    {   // 3. parametric amplifier, squeeze family
        double worst_closed = 0.0, worst_oracle = 0.0;
        for (double gq : {0.25, 0.5, 1.0}) {
            Example ex = ex_amplifier(0.0, gq);  // tau = 1, so g tau = gq
            const PropagatorResult r = propagator_qc(ex.geometry, ex.hamiltonian, ex.boundary, st);
            const cplx closed = std::pow(std::cosh(gq), -0.5)
                              * std::exp(amplifier_phi_closed(0.0, gq, ex.boundary));
            const Representation rep = Representation::hw(1.0, 64);
            const cplx exact = exact_amplitude(rep, ex.hamiltonian, ex.boundary.z_I,
                                               std::conj(ex.boundary.zbar_F), ex.boundary.tau);
            worst_closed = std::max(worst_closed, rel(r.amplitude, closed));
            worst_oracle = std::max(worst_oracle, std::abs(r.amplitude / exact - 1.0));
        }
        out.push_back(make_check("3. amplifier vs closed form", worst_closed, 1e-8));
        out.push_back(make_check("3. amplifier vs Fock oracle", worst_oracle, 1e-7));
    }
    {   // 4. quasiclassical convergence of the quadratic spin model
        std::vector<double> errs;
        for (double j : {5.0, 10.0, 20.0, 40.0}) {
            const Example ex = ex_quadratic_spin(j);
            const PropagatorResult r = propagator_qc(ex.geometry, ex.hamiltonian, ex.boundary, st);
            const Representation rep = Representation::su2(j);
            const cplx exact = exact_amplitude(rep, ex.hamiltonian, ex.boundary.z_I,
                                               std::conj(ex.boundary.zbar_F), ex.boundary.tau);
            errs.push_back(std::abs(r.amplitude / exact - 1.0));
        }
        bool monotone = true;
        for (std::size_t i = 1; i < errs.size(); ++i)
            if (errs[i] >= errs[i - 1]) monotone = false;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double jv[4] = {5, 10, 20, 40};
        for (int i = 0; i < 4; ++i) {
            const double x = std::log(2.0 * jv[i]), y = std::log(errs[i]);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        const double slope = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
        std::ostringstream det;
        det << "errors";
        for (double e : errs) det << ' ' << e;
        det << ", slope " << slope;
        out.push_back(make_flag("4. quasiclassical convergence",
                                monotone && slope >= -2.0 && slope <= -0.5, det.str()));
    }
    {   // 5. determinant identities
        double worst_pair = 0.0, worst_drift = 0.0;
        for (const auto& ex : bundled_examples()) {
            const SymbolEvaluator sym(ex.geometry, ex.hamiltonian);
            const ClassicalTrajectory t = solve_trajectory(sym, ex.boundary, st);
            const ActionBreakdown a = total_action(t, sym, ex.boundary, st);
            const JacobiSolution js = solve_jacobi(t, sym, st);
            worst_pair = std::max(worst_pair, rel(det_ratio_jacobi(js),
                                                  det_ratio_product_form(t, sym, a.B_int)));
            worst_drift = std::max(worst_drift, js.wronskian_drift);
        }
        out.push_back(make_check("5. determinant identity", worst_pair, 1e-6));
        out.push_back(make_check("5. Wronskian drift", worst_drift, 1e-8));
    }
    {   // 6. action identities
        double worst_theta = 0.0, worst_mixed = 0.0, worst_free = 0.0;
        for (const auto& ex : bundled_examples()) {
            const SymbolEvaluator sym(ex.geometry, ex.hamiltonian);
            const ClassicalTrajectory t = solve_trajectory(sym, ex.boundary, st);
            worst_theta = std::max(worst_theta, theta_identity_defect(t, sym, ex.boundary, st));
            const cplx a = mixed_second_derivative(t, sym, ex.boundary).value;
            const cplx b = mixed_second_derivative_fd(sym, ex.boundary, st).value;
            worst_mixed = std::max(worst_mixed, rel(a, b));
        }
        for (auto g : {PhaseSpaceGeometry::sphere(3), PhaseSpaceGeometry::plane(1.0),
                       PhaseSpaceGeometry::disk(2.4)}) {
            HamiltonianSpec h;
            h.algebra = algebra_for(g.kind);
            BoundaryData bd{{0.2, 0.15}, {0.1, -0.25}, 0.8};
            const SymbolEvaluator sym(g, h);
            const ClassicalTrajectory t = solve_trajectory(sym, bd, st);
            const ActionBreakdown a = total_action(t, sym, bd, st);
            worst_free = std::max(worst_free,
                                  std::abs(a.Phi_c - log_overlap(g, std::conj(bd.zbar_F), bd.z_I)));
        }
        out.push_back(make_check("6. symplectic-potential identity", worst_theta, 1e-8));
        out.push_back(make_check("6. mixed derivative vs finite differences", worst_mixed, 1e-5));
        out.push_back(make_check("6. free action equals log overlap", worst_free, 1e-10));
    }
    {   // 7. oracle self-consistency: commutators, unitarity, resolution of
        // unity and the cross-module overlap, each at its own tolerance
        const std::vector<CheckResult> sub = run_exact_checks();
        const std::vector<CheckResult> geo = run_geometry_checks();
        bool ok = true;
        double worst_ratio = 0.0;
        std::ostringstream det;
        auto fold = [&](const std::vector<CheckResult>& v, const std::string& name) {
            for (const auto& c : v)
                if (c.name == name) {
                    ok = ok && c.pass;
                    worst_ratio = std::max(worst_ratio, c.measured / c.threshold);
                    det << name << ' ' << c.measured << "; ";
                }
        };
        fold(sub, "exact.commutators");
        fold(sub, "exact.evolve-unitarity");
        fold(sub, "exact.coherent-overlap-su2");
        fold(sub, "exact.coherent-overlap-truncated");
        fold(sub, "exact.amplitude-tau0-overlap");
        fold(geo, "geometry.resolution-of-unity");
        CheckResult c = make_flag("7. oracle self-consistency", ok, det.str());
        c.measured = worst_ratio;
        c.threshold = 1.0;
        out.push_back(std::move(c));
    }
    {   // 8. alpha-scheme independence for the oscillator
        const Example ex = ex_oscillator();
        cplx a0{};
        double worst = 0.0;
        for (double alpha : {0.0, 0.5, 1.0}) {
            const PropagatorResult r =
                propagator_flat_alpha(ex.geometry, ex.hamiltonian, ex.boundary, alpha, st);
            if (alpha == 0.0) a0 = r.amplitude;
            else worst = std::max(worst, rel(r.amplitude, a0));
        }
        out.push_back(make_check("8. alpha-scheme independence", worst, 1e-9));
    }
    return out;
}

std::vector<CheckResult> run_all_checks() {
    std::vector<CheckResult> all;
    auto add = [&](std::vector<CheckResult> v) {
        for (auto& c : v) all.push_back(std::move(c));
    };
    add(run_geometry_checks());
    add(run_symbol_checks());
    add(run_exact_checks());
    add(run_dynamics_checks());
    add(run_action_checks());
    add(run_semiclassics_checks());
    add(run_runner_checks());
    add(run_acceptance_criteria());
    return all;
}

std::string format_check_line(const CheckResult& c) {
    std::ostringstream os;
    os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name;
    os << "  (measured " << c.measured << ", tolerance " << c.threshold << ")";
    if (!c.detail.empty()) os << "  " << c.detail;
    return os.str();
}

} // namespace qcprop
