#include "qcprop/exact.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace qcprop {

Representation Representation::su2(double j) {
    const double l = 2.0 * j;
    if (!(l > 0) || std::abs(l - std::round(l)) > 1e-9)
        throw InvalidSpinError("2j must be a positive integer");
    Representation rep;
    rep.algebra = Algebra::SU2;
    rep.weight = std::round(l);
    rep.dim = static_cast<int>(rep.weight) + 1;
    const int d = rep.dim;
    rep.raise_m = Eigen::MatrixXcd::Zero(d, d);
    rep.lower_m = Eigen::MatrixXcd::Zero(d, d);
    rep.weight_m = Eigen::MatrixXcd::Zero(d, d);
    const double jj = 0.5 * rep.weight;
    for (int n = 0; n < d; ++n) {
        rep.weight_m(n, n) = -jj + n;
        if (n + 1 < d) {
            const double amp = std::sqrt((n + 1.0) * (rep.weight - n));
            rep.raise_m(n + 1, n) = amp;
            rep.lower_m(n, n + 1) = amp;
        }
    }
    return rep;
}

Representation Representation::hw(double gamma, int nmax) {
    if (!(gamma > 0)) throw InvalidWeightError("gamma must be positive");
    if (nmax < 2) throw InvalidWeightError("nmax must be at least 2");
    Representation rep;
    rep.algebra = Algebra::HW;
    rep.weight = gamma;
    rep.dim = nmax;
    rep.raise_m = Eigen::MatrixXcd::Zero(nmax, nmax);
    rep.lower_m = Eigen::MatrixXcd::Zero(nmax, nmax);
    rep.weight_m = Eigen::MatrixXcd::Zero(nmax, nmax);
    for (int n = 0; n < nmax; ++n) {
        rep.weight_m(n, n) = n;
        if (n + 1 < nmax) {
            rep.raise_m(n + 1, n) = std::sqrt(n + 1.0);
            rep.lower_m(n, n + 1) = std::sqrt(n + 1.0);
        }
    }
    return rep;
}

Representation Representation::su11(double k, int nmax) {
    if (!(k > 0.5)) throw InvalidWeightError("SU(1,1) discrete series requires k > 1/2");
    if (nmax < 2) throw InvalidWeightError("nmax must be at least 2");
    Representation rep;
    rep.algebra = Algebra::SU11;
    rep.weight = 2.0 * k;
    rep.dim = nmax;
    rep.raise_m = Eigen::MatrixXcd::Zero(nmax, nmax);
    rep.lower_m = Eigen::MatrixXcd::Zero(nmax, nmax);
    rep.weight_m = Eigen::MatrixXcd::Zero(nmax, nmax);
    for (int n = 0; n < nmax; ++n) {
        rep.weight_m(n, n) = k + n;
        if (n + 1 < nmax) {
            const double amp = std::sqrt((n + 1.0) * (2.0 * k + n));
            rep.raise_m(n + 1, n) = amp;
            rep.lower_m(n, n + 1) = amp;
        }
    }
    return rep;
}

Eigen::MatrixXcd Representation::chart_raise() const {
    if (algebra == Algebra::HW) return std::sqrt(weight) * raise_m;
    return raise_m;
}

Eigen::VectorXcd Representation::coherent_unnormalized(cplx z) const {
    Eigen::VectorXcd c(dim);
    c(0) = 1.0;
    for (int n = 0; n + 1 < dim; ++n) {
        double ratio;
        switch (algebra) {
            case Algebra::SU2:  ratio = (weight - n) / (n + 1.0); break;
            case Algebra::HW:   ratio = weight / (n + 1.0); break;
            case Algebra::SU11: ratio = (weight + n) / (n + 1.0); break;
            default:            ratio = 0.0; break;
        }
        c(n + 1) = c(n) * z * std::sqrt(ratio);
    }
    return c;
}

StateVector coherent_vector(const Representation& rep, cplx z) {
    const double r2 = std::norm(z);
    double lognorm;  // log of the normalization factor
    switch (rep.algebra) {
        case Algebra::SU2:
            lognorm = -0.5 * rep.weight * std::log1p(r2);
            break;
        case Algebra::HW:
            lognorm = -0.5 * rep.weight * r2;
            break;
        case Algebra::SU11:
            if (r2 >= 1.0) throw ChartDomainError("disk coherent state needs |z| < 1");
            lognorm = 0.5 * rep.weight * std::log1p(-r2);
            break;
        default:
            lognorm = 0.0;
    }
    StateVector s;
    s.coefficients = std::exp(lognorm) * rep.coherent_unnormalized(z);
    const double kept = s.coefficients.squaredNorm();
    s.truncation_tail = std::max(0.0, 1.0 - kept);
    if (rep.algebra == Algebra::SU2) s.truncation_tail = 0.0;  // exact
    if (s.truncation_tail > 1e-10)
        throw TruncationTooSevereError("coherent state tail above 1e-10; raise nmax or shrink |z|");
    return s;
}

Eigen::MatrixXcd hamiltonian_matrix(const Representation& rep, const HamiltonianSpec& h, double t) {
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(rep.dim, rep.dim);
    for (const auto& term : h.terms) {
        Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(rep.dim, rep.dim);
        for (GenId id : term.factors) prod = prod * rep.gen(id);
        H += term.coeff(t) * lnorm_factor(term.lnorm, rep.weight) * prod;
    }
    return H;
}

bool spec_is_hermitian(const Representation& rep, const HamiltonianSpec& h, double t_span) {
    for (double t : {0.0, 0.37 * t_span, 0.91 * t_span}) {
        Eigen::MatrixXcd H = hamiltonian_matrix(rep, h, t);
        if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + H.cwiseAbs().maxCoeff()))
            return false;
    }
    return true;
}

namespace {

bool constant_coefficients(const HamiltonianSpec& h) {
    for (const auto& term : h.terms)
        if (term.coeff.form != TimeCoeff::Form::Const) return false;
    return true;
}

// The ordered product runs in extended precision: the rounding random walk
// of a few hundred thousand matrix products would otherwise floor the
// step-doubling test right at its 1e-11 target.
Eigen::MatrixXcd midpoint_product(const Representation& rep, const HamiltonianSpec& h,
                                  double tau, long nsteps) {
    using MatL = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
    const long double dt = static_cast<long double>(tau) / nsteps;
    MatL U = MatL::Identity(rep.dim, rep.dim);
    const std::complex<long double> mi(0.0L, -1.0L);
    for (long k = 0; k < nsteps; ++k) {
        const double tmid = static_cast<double>((k + 0.5L) * dt);
        const MatL Hm = hamiltonian_matrix(rep, h, tmid).cast<std::complex<long double>>();
        U = (mi * dt * Hm).exp() * U;
    }
    return U.cast<cplx>();
}

} // namespace

Eigen::MatrixXcd evolve(const Representation& rep, const HamiltonianSpec& h, double tau,
                        int min_steps) {
    if (h.zero() || tau == 0.0)
        return Eigen::MatrixXcd::Identity(rep.dim, rep.dim);
    if (constant_coefficients(h)) {
        const cplx mi(0.0, -1.0);
        return (mi * tau * hamiltonian_matrix(rep, h, 0.0)).exp();
    }
    long n = std::max(2, min_steps);
    Eigen::MatrixXcd prev = midpoint_product(rep, h, tau, n);
    const long step_cap = 1L << 21;
    while (n <= step_cap) {
        n *= 2;
        Eigen::MatrixXcd next = midpoint_product(rep, h, tau, n);
        const double diff = (next - prev).cwiseAbs().maxCoeff();
        if (diff <= 1e-11) return next;
        prev = next;
    }
    throw NoConvergenceError("time-ordered evolution did not reach 1e-11 within the step cap");
}

cplx exact_amplitude(const Representation& rep, const HamiltonianSpec& h,
                     cplx z_I, cplx z_F, double tau) {
    const StateVector vI = coherent_vector(rep, z_I);
    const StateVector vF = coherent_vector(rep, z_F);
    const Eigen::MatrixXcd U = evolve(rep, h, tau);
    return vF.coefficients.dot(U * vI.coefficients);  // .dot conjugates the left factor
}

Representation representation_for(const PhaseSpaceGeometry& g, int nmax) {
    switch (g.kind) {
        case SpaceKind::Sphere: return Representation::su2(g.spin_j());
        case SpaceKind::Plane:  return Representation::hw(g.weight, nmax > 0 ? nmax : 64);
        case SpaceKind::Disk:   return Representation::su11(g.disk_k(), nmax > 0 ? nmax : 128);
    }
    throw ConfigError("unknown geometry kind");
}

} // namespace qcprop
