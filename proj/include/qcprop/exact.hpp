#pragma once

#include <Eigen/Dense>
#include <complex>

#include "qcprop/errors.hpp"
#include "qcprop/geometry.hpp"
#include "qcprop/hamiltonian.hpp"

namespace qcprop {

// Finite-dimensional ground truth: representation matrices in the weight
// basis, coherent vectors, time-ordered evolution and transition amplitudes.
// Basis element 0 is the fiducial (lowest weight) vector, annihilated by the
// lowering generator.  SU2 is exact; HW and SU11 are truncations whose
// discarded coherent weight is monitored.
struct Representation {
    Algebra algebra = Algebra::HW;
    double weight = 1.0;  // l = 2j | gamma | l = 2k
    int dim = 0;

    Eigen::MatrixXcd raise_m, lower_m, weight_m;

    static Representation su2(double j);
    static Representation hw(double gamma, int nmax = 64);
    static Representation su11(double k, int nmax = 128);

    const Eigen::MatrixXcd& gen(GenId id) const {
        switch (id) {
            case GenId::Raise:  return raise_m;
            case GenId::Lower:  return lower_m;
            case GenId::Weight: return weight_m;
        }
        return weight_m;
    }

    // Matrix of d/dz acting on unnormalized coherent kets: J+, sqrt(gamma) a+,
    // or K+.
    Eigen::MatrixXcd chart_raise() const;

    // Coefficients of exp(z X+)|0>, analytic in z (no conjugation).
    Eigen::VectorXcd coherent_unnormalized(cplx z) const;

    double spin_j() const { return 0.5 * weight; }
};

struct StateVector {
    Eigen::VectorXcd coefficients;
    double truncation_tail = 0.0;
};

// Normalized coherent state in the weight basis.  Throws
// TruncationTooSevereError when the discarded norm exceeds 1e-10.
StateVector coherent_vector(const Representation& rep, cplx z);

// Sum of term matrices at time t, including weight normalization factors.
Eigen::MatrixXcd hamiltonian_matrix(const Representation& rep, const HamiltonianSpec& h, double t);

bool spec_is_hermitian(const Representation& rep, const HamiltonianSpec& h, double t_span = 1.0);

// Time-ordered propagator over [0, tau].  Constant coefficients evaluate as a
// single matrix exponential; otherwise an ordered product of midpoint-rule
// exponentials with step doubling until successive results agree to 1e-11 in
// the entrywise max norm.
Eigen::MatrixXcd evolve(const Representation& rep, const HamiltonianSpec& h, double tau,
                        int min_steps = 32);

// <z_F| T exp(-i int H) |z_I> with normalized coherent states.
cplx exact_amplitude(const Representation& rep, const HamiltonianSpec& h,
                     cplx z_I, cplx z_F, double tau);

// Representation matching a phase space (oracle side of a propagation).
// nmax applies to the truncated algebras only.
Representation representation_for(const PhaseSpaceGeometry& g, int nmax = 0);

} // namespace qcprop
