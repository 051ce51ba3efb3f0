#pragma once

#include <complex>
#include <string>
#include <vector>

#include "qcprop/errors.hpp"
#include "qcprop/geometry.hpp"

namespace qcprop {

enum class Algebra { SU2, HW, SU11 };

// Raise/Lower/Weight are J+/J-/J0 on SU2, adag/a/n on HW, K+/K-/K0 on SU11.
enum class GenId { Raise, Lower, Weight };

// Time dependence of a term coefficient: c, c exp(i nu t), c cos(nu t) or
// c sin(nu t) with complex c and real nu.  Sums are expressed as separate
// terms.
struct TimeCoeff {
    enum class Form { Const, Exp, Cos, Sin };
    Form form = Form::Const;
    cplx amplitude{1.0, 0.0};
    double nu = 0.0;

    cplx operator()(double t) const {
        switch (form) {
            case Form::Const: return amplitude;
            case Form::Exp:   return amplitude * std::exp(cplx(0.0, nu * t));
            case Form::Cos:   return amplitude * std::cos(nu * t);
            case Form::Sin:   return amplitude * std::sin(nu * t);
        }
        return amplitude;
    }
};

struct HamiltonianTerm {
    // Operator product, leftmost factor acts last: {Raise, Raise} is J+ J+.
    std::vector<GenId> factors;
    TimeCoeff coeff;
    // Weight normalization keeping the symbol O(l); InverseWeightMinusOne is
    // the built-in 1/(l-1) factor of the bundled quadratic spin example.
    enum class LNorm { None, InverseWeightMinusOne };
    LNorm lnorm = LNorm::None;

    bool linear() const { return factors.size() == 1 && lnorm == LNorm::None; }
};

struct HamiltonianSpec {
    Algebra algebra = Algebra::SU2;
    std::vector<HamiltonianTerm> terms;

    bool linear() const {
        for (const auto& t : terms)
            if (!t.linear()) return false;
        return true;
    }
    bool zero() const { return terms.empty(); }
};

double lnorm_factor(HamiltonianTerm::LNorm lnorm, double weight);

Algebra algebra_for(SpaceKind kind);
void require_compatible(const HamiltonianSpec& h, const PhaseSpaceGeometry& g);

std::string generator_name(Algebra a, GenId id);
GenId generator_from_name(Algebra a, const std::string& name);

// Bundled model builders.

// 2A J0 + f J+ + conj(f) J-
HamiltonianSpec su2_linear_spec(double A, cplx f);
// omega n
HamiltonianSpec oscillator_spec(double omega);
// omega n - g/2 (adag^2 exp(-2 i omega t) + a^2 exp(+2 i omega t))
HamiltonianSpec parametric_amplifier_spec(double omega, double g);
// (J+^2 + J-^2) / (l - 1)
HamiltonianSpec su2_quadratic_spec();

} // namespace qcprop
