#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "qcprop/exact.hpp"
#include "qcprop/geometry.hpp"
#include "qcprop/hamiltonian.hpp"

namespace qcprop {

// Two-slot covariant symbol <z1|H|z2>/<z1|z2> with zbar = zbar1, z = z2.
struct SymbolValue {
    cplx value{}, dz{}, dzbar{};
};

// Full second-order jet, needed by the linearized flow and the fluctuation
// coefficients.
struct SymbolJet {
    cplx value{}, dz{}, dzbar{}, dzz{}, dzbarzbar{}, dzdzbar{};

    SymbolJet& operator+=(const SymbolJet& o) {
        value += o.value; dz += o.dz; dzbar += o.dzbar;
        dzz += o.dzz; dzbarzbar += o.dzbarzbar; dzdzbar += o.dzdzbar;
        return *this;
    }
    SymbolJet scaled(cplx c) const {
        return {c * value, c * dz, c * dzbar, c * dzz, c * dzbarzbar, c * dzdzbar};
    }
};

// Evaluates the covariant symbol of a Hamiltonian over one phase space.
// Generator terms use closed forms; products of generators are evaluated
// through the finite-dimensional representation, with slot derivatives
// obtained from the ladder action on coherent kets.
class SymbolEvaluator {
public:
    SymbolEvaluator(const PhaseSpaceGeometry& g, const HamiltonianSpec& h, int nmax = 0);

    SymbolJet jet(cplx zbar, cplx z, double t) const;
    SymbolValue value(cplx zbar, cplx z, double t) const;
    cplx diagonal(cplx z, double t) const { return value(std::conj(z), z, t).value; }

    const PhaseSpaceGeometry& geometry() const { return geom_; }
    const HamiltonianSpec& spec() const { return spec_; }
    bool has_products() const { return !products_.empty(); }

    // product-term representation, exposed for the cross-checks against the
    // plain matrix route
    const Representation* oracle_rep() const { return rep_ ? &*rep_ : nullptr; }

private:
    PhaseSpaceGeometry geom_;
    HamiltonianSpec spec_;

    // Products of ladder/diagonal generators populate a single matrix
    // diagonal, so every operator here is stored as that diagonal and applied
    // in O(dim).
    struct BandedOp {
        int offset = 0;                 // row - column of the populated diagonal
        Eigen::VectorXcd vals;          // indexed by row
    };
    struct ProductTerm {
        std::size_t term_index;
        BandedOp X, XR, XRR, LX, LLX, LXR;
    };
    std::vector<ProductTerm> products_;
    std::optional<Representation> rep_;

    struct PointData;  // per-point shared coherent vectors and kernel jets
    SymbolJet product_jet(const ProductTerm& p, const PointData& pd) const;
};

// One-shot convenience wrapper.
SymbolValue covariant_symbol(const HamiltonianSpec& h, const PhaseSpaceGeometry& g,
                             cplx zbar, cplx z, double t);

// Laplace-Beltrami of the symbol from its analytic jet.
cplx symbol_laplacian(const SymbolEvaluator& sym, cplx zbar, cplx z, double t);

// First-order Berezin shift between quantization schemes:
// ToCovariant applies (1 + Delta), ToContravariant applies (1 - Delta); both
// are correct to O(1/l^2).
enum class SymbolShift { ToCovariant, ToContravariant };
using TimeField = std::function<cplx(cplx, cplx, double)>;
cplx contravariant_asymptotic(const TimeField& symbol_field, const PhaseSpaceGeometry& g,
                              cplx zbar, cplx z, double t, SymbolShift dir, double step = 1e-4);
cplx contravariant_asymptotic(const SymbolEvaluator& sym, cplx zbar, cplx z, double t,
                              SymbolShift dir);

} // namespace qcprop
