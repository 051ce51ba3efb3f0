#include "qcprop/symbols.hpp"

#include <cmath>

namespace qcprop {

namespace {

// Closed-form jets of the generator symbols.  With u = zbar z,
// D = 1 + u (sphere), E = 1 - u (disk):
//   sphere:  J+ -> l zbar/D,  J- -> l z/D,  J0 -> (l/2)(u-1)/D
//   plane:   a+ -> sqrt(g) zbar, a -> sqrt(g) z, n -> g zbar z
//   disk:    K+ -> l zbar/E,  K- -> l z/E,  K0 -> (l/2)(1+u)/E
SymbolJet linear_jet(const PhaseSpaceGeometry& g, GenId id, cplx zbar, cplx z) {
    const double l = g.weight;
    SymbolJet J;
    switch (g.kind) {
        case SpaceKind::Plane: {
            const double rg = std::sqrt(l);
            if (id == GenId::Raise) { J.value = rg * zbar; J.dzbar = rg; }
            else if (id == GenId::Lower) { J.value = rg * z; J.dz = rg; }
            else { J.value = l * zbar * z; J.dz = l * zbar; J.dzbar = l * z; J.dzdzbar = l; }
            return J;
        }
        case SpaceKind::Sphere: {
            const cplx D = 1.0 + zbar * z;
            if (std::abs(D) < 1e-14 * (1.0 + std::abs(zbar * z)))
                throw ChartDomainError("symbol evaluated at the chart singularity");
            const cplx D2 = D * D, D3 = D2 * D;
            if (id == GenId::Raise) {
                J.value = l * zbar / D;
                J.dz = -l * zbar * zbar / D2;
                J.dzbar = l / D2;
                J.dzz = 2.0 * l * zbar * zbar * zbar / D3;
                J.dzbarzbar = -2.0 * l * z / D3;
                J.dzdzbar = -2.0 * l * zbar / D3;
            } else if (id == GenId::Lower) {
                J.value = l * z / D;
                J.dz = l / D2;
                J.dzbar = -l * z * z / D2;
                J.dzz = -2.0 * l * zbar / D3;
                J.dzbarzbar = 2.0 * l * z * z * z / D3;
                J.dzdzbar = -2.0 * l * z / D3;
            } else {
                J.value = 0.5 * l * (zbar * z - 1.0) / D;
                J.dz = l * zbar / D2;
                J.dzbar = l * z / D2;
                J.dzz = -2.0 * l * zbar * zbar / D3;
                J.dzbarzbar = -2.0 * l * z * z / D3;
                J.dzdzbar = l * (1.0 - zbar * z) / D3;
            }
            return J;
        }
        case SpaceKind::Disk: {
            const cplx E = 1.0 - zbar * z;
            if (std::abs(E) < 1e-14 * (1.0 + std::abs(zbar * z)))
                throw ChartDomainError("symbol evaluated on the disk kernel zero set");
            const cplx E2 = E * E, E3 = E2 * E;
            if (id == GenId::Raise) {
                J.value = l * zbar / E;
                J.dz = l * zbar * zbar / E2;
                J.dzbar = l / E2;
                J.dzz = 2.0 * l * zbar * zbar * zbar / E3;
                J.dzbarzbar = 2.0 * l * z / E3;
                J.dzdzbar = 2.0 * l * zbar / E3;
            } else if (id == GenId::Lower) {
                J.value = l * z / E;
                J.dz = l / E2;
                J.dzbar = l * z * z / E2;
                J.dzz = 2.0 * l * zbar / E3;
                J.dzbarzbar = 2.0 * l * z * z * z / E3;
                J.dzdzbar = 2.0 * l * z / E3;
            } else {
                J.value = 0.5 * l * (1.0 + zbar * z) / E;
                J.dz = l * zbar / E2;
                J.dzbar = l * z / E2;
                J.dzz = 2.0 * l * zbar * zbar / E3;
                J.dzbarzbar = 2.0 * l * z * z / E3;
                J.dzdzbar = l * (1.0 + zbar * z) / E3;
            }
            return J;
        }
    }
    return J;
}

} // namespace

SymbolEvaluator::SymbolEvaluator(const PhaseSpaceGeometry& g, const HamiltonianSpec& h, int nmax)
    : geom_(g), spec_(h) {
    require_compatible(h, g);
    // Products of ladder/diagonal generators land on exactly one matrix
    // diagonal (offsets add under multiplication).
    auto to_banded = [](const Eigen::MatrixXcd& M) {
        BandedOp op;
        const int d = static_cast<int>(M.rows());
        op.offset = 0;
        double best = -1.0;
        for (int off = -(d - 1); off < d; ++off) {
            double mass = 0.0;
            for (int r = std::max(0, off); r < d && r - off < d; ++r)
                mass += std::abs(M(r, r - off));
            if (mass > best) {
                best = mass;
                op.offset = off;
            }
        }
        op.vals = Eigen::VectorXcd::Zero(d);
        Eigen::MatrixXcd rest = M;
        for (int r = std::max(0, op.offset); r < d && r - op.offset < d; ++r) {
            op.vals(r) = M(r, r - op.offset);
            rest(r, r - op.offset) = 0.0;
        }
        if (rest.cwiseAbs().maxCoeff() > 1e-14 * std::max(1.0, M.cwiseAbs().maxCoeff()))
            throw ConfigError("generator product is not single-diagonal");
        return op;
    };
    for (std::size_t i = 0; i < h.terms.size(); ++i) {
        const auto& term = h.terms[i];
        if (term.factors.empty())
            throw ConfigError("Hamiltonian term with no generators");
        if (term.factors.size() == 1 && term.lnorm == HamiltonianTerm::LNorm::None)
            continue;
        if (!rep_) rep_ = representation_for(g, nmax);
        // <z1|P|z2>: the rightmost factor acts first on |z2>.  Slot
        // derivatives multiply the chart ladder matrix on the right (d/dz)
        // or its transpose on the left (d/dzbar).
        Eigen::MatrixXcd X = Eigen::MatrixXcd::Identity(rep_->dim, rep_->dim);
        for (GenId id : term.factors) X = X * rep_->gen(id);
        X *= lnorm_factor(term.lnorm, rep_->weight);
        const Eigen::MatrixXcd R = rep_->chart_raise();
        const Eigen::MatrixXcd L = R.transpose();
        ProductTerm p;
        p.term_index = i;
        p.X = to_banded(X);
        p.XR = to_banded(X * R);
        p.XRR = to_banded(X * R * R);
        p.LX = to_banded(L * X);
        p.LLX = to_banded(L * L * X);
        p.LXR = to_banded(L * X * R);
        products_.push_back(std::move(p));
    }
}

struct SymbolEvaluator::PointData {
    Eigen::VectorXcd b, c;
    cplx K;
    cplx Fz, Fzb, sRR, sLL, sLR;
};

SymbolJet SymbolEvaluator::product_jet(const ProductTerm& p, const PointData& pd) const {
    // quadratic form b^T Op c / K with the single-diagonal operator
    auto s = [&](const BandedOp& op) -> cplx {
        const int d = static_cast<int>(op.vals.size());
        cplx acc = 0.0;
        for (int r = std::max(0, op.offset); r < d && r - op.offset < d; ++r)
            acc += pd.b(r) * op.vals(r) * pd.c(r - op.offset);
        return acc / pd.K;
    };
    const cplx u = s(p.X);
    const cplx uR = s(p.XR);
    const cplx uL = s(p.LX);
    SymbolJet J;
    J.value = u;
    J.dz = uR - u * pd.Fz;
    J.dzbar = uL - u * pd.Fzb;
    J.dzz = s(p.XRR) - 2.0 * uR * pd.Fz - u * pd.sRR + 2.0 * u * pd.Fz * pd.Fz;
    J.dzbarzbar = s(p.LLX) - 2.0 * pd.Fzb * uL - u * pd.sLL + 2.0 * u * pd.Fzb * pd.Fzb;
    J.dzdzbar = s(p.LXR) - pd.Fzb * uR - uL * pd.Fz - u * pd.sLR + 2.0 * u * pd.Fzb * pd.Fz;
    return J;
}

SymbolJet SymbolEvaluator::jet(cplx zbar, cplx z, double t) const {
    SymbolJet total;
    PointData pd;
    if (!products_.empty()) {
        pd.b = rep_->coherent_unnormalized(zbar);
        pd.c = rep_->coherent_unnormalized(z);
        cplx K = 0.0;
        for (int n = 0; n < rep_->dim; ++n) K += pd.b(n) * pd.c(n);
        pd.K = K;
        if (std::abs(pd.K) < 1e-280)
            throw ChartDomainError("coherent kernel vanished in a product symbol");
        if (rep_->algebra != Algebra::SU2) {
            const double tail = std::abs(pd.b(rep_->dim - 1)) * std::abs(pd.c(rep_->dim - 1));
            if (tail > 1e-10 * std::abs(pd.K))
                throw TruncationTooSevereError("product symbol truncation tail above 1e-10");
        }
        // kernel-side logarithmic derivatives, exact from the potential
        pd.Fz = kahler_dz(geom_, zbar, z);
        pd.Fzb = kahler_dzbar(geom_, zbar, z);
        pd.sRR = kahler_dzz(geom_, zbar, z) + pd.Fz * pd.Fz;
        pd.sLL = kahler_dzbarzbar(geom_, zbar, z) + pd.Fzb * pd.Fzb;
        const cplx gm = metric(geom_, zbar, z) - geom_.metric_test_offset;
        pd.sLR = gm + pd.Fzb * pd.Fz;
    }
    std::size_t pi = 0;
    for (std::size_t i = 0; i < spec_.terms.size(); ++i) {
        const auto& term = spec_.terms[i];
        const cplx c = term.coeff(t);
        if (pi < products_.size() && products_[pi].term_index == i) {
            total += product_jet(products_[pi], pd).scaled(c);
            ++pi;
        } else {
            total += linear_jet(geom_, term.factors[0], zbar, z).scaled(c);
        }
    }
    return total;
}

SymbolValue SymbolEvaluator::value(cplx zbar, cplx z, double t) const {
    const SymbolJet J = jet(zbar, z, t);
    return {J.value, J.dz, J.dzbar};
}

SymbolValue covariant_symbol(const HamiltonianSpec& h, const PhaseSpaceGeometry& g,
                             cplx zbar, cplx z, double t) {
    return SymbolEvaluator(g, h).value(zbar, z, t);
}

cplx symbol_laplacian(const SymbolEvaluator& sym, cplx zbar, cplx z, double t) {
    const SymbolJet J = sym.jet(zbar, z, t);
    return J.dzdzbar / metric(sym.geometry(), zbar, z);
}

cplx contravariant_asymptotic(const TimeField& field, const PhaseSpaceGeometry& g,
                              cplx zbar, cplx z, double t, SymbolShift dir, double step) {
    auto frozen = [&](cplx zb, cplx zz) { return field(zb, zz, t); };
    const cplx delta = laplace_beltrami(g, ScalarField(frozen), zbar, z, step);
    const cplx H = field(zbar, z, t);
    return (dir == SymbolShift::ToCovariant) ? H + delta : H - delta;
}

cplx contravariant_asymptotic(const SymbolEvaluator& sym, cplx zbar, cplx z, double t,
                              SymbolShift dir) {
    const cplx H = sym.jet(zbar, z, t).value;
    const cplx delta = symbol_laplacian(sym, zbar, z, t);
    return (dir == SymbolShift::ToCovariant) ? H + delta : H - delta;
}

} // namespace qcprop
