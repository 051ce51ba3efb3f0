#include "qcprop/hamiltonian.hpp"

namespace qcprop {

double lnorm_factor(HamiltonianTerm::LNorm lnorm, double weight) {
    switch (lnorm) {
        case HamiltonianTerm::LNorm::None:
            return 1.0;
        case HamiltonianTerm::LNorm::InverseWeightMinusOne:
            if (weight <= 1.0)
                throw InvalidWeightError("1/(l-1) normalization requires weight l > 1");
            return 1.0 / (weight - 1.0);
    }
    return 1.0;
}

Algebra algebra_for(SpaceKind kind) {
    switch (kind) {
        case SpaceKind::Sphere: return Algebra::SU2;
        case SpaceKind::Plane:  return Algebra::HW;
        case SpaceKind::Disk:   return Algebra::SU11;
    }
    return Algebra::HW;
}

void require_compatible(const HamiltonianSpec& h, const PhaseSpaceGeometry& g) {
    if (h.algebra != algebra_for(g.kind))
        throw IncompatibleAlgebraError("Hamiltonian algebra does not match the phase space");
}

std::string generator_name(Algebra a, GenId id) {
    switch (a) {
        case Algebra::SU2:
            return id == GenId::Raise ? "J+" : id == GenId::Lower ? "J-" : "J0";
        case Algebra::HW:
            return id == GenId::Raise ? "a+" : id == GenId::Lower ? "a" : "n";
        case Algebra::SU11:
            return id == GenId::Raise ? "K+" : id == GenId::Lower ? "K-" : "K0";
    }
    return "?";
}

GenId generator_from_name(Algebra a, const std::string& name) {
    for (GenId id : {GenId::Raise, GenId::Lower, GenId::Weight})
        if (generator_name(a, id) == name) return id;
    // accepted aliases
    if (a == Algebra::HW && (name == "adag" || name == "a†")) return GenId::Raise;
    if (a == Algebra::HW && name == "a+a") return GenId::Weight;
    throw ConfigError("unknown generator '" + name + "' for this algebra");
}

HamiltonianSpec su2_linear_spec(double A, cplx f) {
    HamiltonianSpec h;
    h.algebra = Algebra::SU2;
    h.terms.push_back({{GenId::Weight}, {TimeCoeff::Form::Const, 2.0 * A, 0.0}, HamiltonianTerm::LNorm::None});
    h.terms.push_back({{GenId::Raise}, {TimeCoeff::Form::Const, f, 0.0}, HamiltonianTerm::LNorm::None});
    h.terms.push_back({{GenId::Lower}, {TimeCoeff::Form::Const, std::conj(f), 0.0}, HamiltonianTerm::LNorm::None});
    return h;
}

HamiltonianSpec oscillator_spec(double omega) {
    HamiltonianSpec h;
    h.algebra = Algebra::HW;
    h.terms.push_back({{GenId::Weight}, {TimeCoeff::Form::Const, omega, 0.0}, HamiltonianTerm::LNorm::None});
    return h;
}

HamiltonianSpec parametric_amplifier_spec(double omega, double g) {
    HamiltonianSpec h;
    h.algebra = Algebra::HW;
    if (omega != 0.0)
        h.terms.push_back({{GenId::Weight}, {TimeCoeff::Form::Const, omega, 0.0}, HamiltonianTerm::LNorm::None});
    h.terms.push_back({{GenId::Raise, GenId::Raise},
                       {TimeCoeff::Form::Exp, -0.5 * g, -2.0 * omega},
                       HamiltonianTerm::LNorm::None});
    h.terms.push_back({{GenId::Lower, GenId::Lower},
                       {TimeCoeff::Form::Exp, -0.5 * g, 2.0 * omega},
                       HamiltonianTerm::LNorm::None});
    return h;
}

HamiltonianSpec su2_quadratic_spec() {
    HamiltonianSpec h;
    h.algebra = Algebra::SU2;
    h.terms.push_back({{GenId::Raise, GenId::Raise}, {TimeCoeff::Form::Const, 1.0, 0.0},
                       HamiltonianTerm::LNorm::InverseWeightMinusOne});
    h.terms.push_back({{GenId::Lower, GenId::Lower}, {TimeCoeff::Form::Const, 1.0, 0.0},
                       HamiltonianTerm::LNorm::InverseWeightMinusOne});
    return h;
}

} // namespace qcprop
