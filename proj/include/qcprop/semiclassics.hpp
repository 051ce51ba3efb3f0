#pragma once

#include <map>
#include <string>

#include "qcprop/action.hpp"

namespace qcprop {

// Quasiclassical amplitude with its full breakdown.
//   amplitude = exp(Phi_c + i B_int / 2) * prefactor
//   prefactor = [ (g_c(tau) g_c(0))^{-1/2} d2 Phi_c / d zbar_F d z_I ]^{1/2}
//   reduced   = prefactor * exp(i B_int / 2)
// The square root sheet is fixed by continuity in the duration from the
// tau -> 0 limit where the bracket tends to 1; `branch` records the sheet.
struct PropagatorResult {
    cplx amplitude{};
    cplx prefactor{};
    cplx reduced{};
    ActionBreakdown breakdown;
    int branch = 0;
    std::map<std::string, double> diagnostics;
};

PropagatorResult propagator_qc(const PhaseSpaceGeometry& g, const HamiltonianSpec& h,
                               const BoundaryData& bd, const SolverSettings& st = {});

// Flat-case propagator in the alpha quantization scheme (covariant alpha = 0,
// Weyl 1/2, contravariant 1).  The classical flow stays the covariant one;
// only the action and the normalization integral shift.
PropagatorResult propagator_flat_alpha(const PhaseSpaceGeometry& g, const HamiltonianSpec& h,
                                       const BoundaryData& bd, double alpha,
                                       const SolverSettings& st = {});

// Stationary-phase exactness probe: transports the metric a short way along
// the Hamiltonian flow on a diagonal sample grid and reports the worst
// Lie-derivative defect.  exact_expected means the flow is an isometry and
// the quasiclassical amplitude should match the quantum one at solver
// accuracy.
struct DhExactnessReport {
    bool exact_expected = false;
    double defect = 0.0;
};
DhExactnessReport dh_exactness_probe(const PhaseSpaceGeometry& g, const HamiltonianSpec& h,
                                     std::vector<cplx> samples = {}, double eps = 1e-3,
                                     double t0 = 0.0);

// Determinant ratio assembled from endpoint data (metric ratio, B integral
// and the boundary sensitivity), the closed product form dual to the Jacobi
// route.
cplx det_ratio_product_form(const ClassicalTrajectory& traj, const SymbolEvaluator& sym,
                            cplx b_int);

} // namespace qcprop
