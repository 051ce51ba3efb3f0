#pragma once

#include "qcprop/dynamics.hpp"

namespace qcprop {

// Scalar functionals of a converged trajectory.  Phi_c = S_kin + S_dyn +
// Gamma is the total action entering the propagator exponent; B_int is the
// normalization integral int_0^tau b dt; winding counts the 2 pi i branch
// corrections picked up by the potential along the path.
struct ActionBreakdown {
    cplx S_kin{};      // geometric part, -1/2 int (zdot F_z - zbardot F_zbar)
    cplx S_dyn{};      // -i int H^cl
    cplx Gamma{};      // endpoint term from the path discontinuity
    cplx Phi_c{};
    cplx B_int{};
    int winding = 0;
    double refine_defect = 0.0;  // change of Phi_c under tolerance refinement
};

ActionBreakdown total_action(const ClassicalTrajectory& traj, const SymbolEvaluator& sym,
                             const BoundaryData& bd, const SolverSettings& st = {});

struct MixedDerivative {
    cplx value{};
    enum class Method { Sensitivity, FiniteDifference } method = Method::Sensitivity;
};

// d2 Phi_c / d zbar_F d z_I from the endpoint sensitivities and metrics.
MixedDerivative mixed_second_derivative(const ClassicalTrajectory& traj,
                                        const SymbolEvaluator& sym, const BoundaryData& bd);

// Same derivative by a 4-point finite difference over re-solved boundary
// problems, the independent cross-check of the sensitivity route.  Uses
// deterministic fixed-step integration so that the differences cancel the
// integration bias.
MixedDerivative mixed_second_derivative_fd(const SymbolEvaluator& sym, const BoundaryData& bd,
                                           const SolverSettings& st = {}, double h = 1e-5);

// |(S + Gamma) - (i int theta - i int H + log<z_F|z_I>)|, the defect of the
// symplectic-potential form of the action.  Identically zero in exact
// arithmetic for any path satisfying the boundary conditions.
double theta_identity_defect(const ClassicalTrajectory& traj, const SymbolEvaluator& sym,
                             const BoundaryData& bd, const SolverSettings& st = {});

// int b dt recomputed from the flow-derivative representation
// b = i/2 (d_z zdot - d_zbar zbardot), with the derivatives taken by central
// differences of the flow; grid quadrature by composite Simpson.
cplx b_term_flow_form(const ClassicalTrajectory& traj, const SymbolEvaluator& sym);

} // namespace qcprop
