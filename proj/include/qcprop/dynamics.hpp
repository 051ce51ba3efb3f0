#pragma once

#include <string>
#include <vector>

#include "qcprop/ode.hpp"
#include "qcprop/symbols.hpp"

namespace qcprop {

// Two-point boundary data for the complexified Hamilton equations: z(0) = z_I
// on the holomorphic side, zbar(tau) = zbar_F on the antiholomorphic side.
// The two paths are independent; zbar_F need not be conj(z_F) of anything.
struct BoundaryData {
    cplx z_I{};
    cplx zbar_F{};
    double tau = 0.0;
};

struct SolverSettings {
    int steps = 240;              // reporting grid resolution (steps+1 nodes)
    double tol = 1e-10;           // shooting residual tolerance
    int newton_max = 30;
    double rmax = 1e6;            // chart overflow threshold for |z|, |zbar|
    double rtol = 1e-12;
    double atol = 1e-14;
    int fixed_steps = 0;          // deterministic fixed-step mode (FD probes),
                                  // step count over the full duration
    bool probe_roots = false;     // perturbed-guess multiplicity probe
    int homotopy_points = 8;      // duration-continuation points for branch tracking
    bool verify_quadrature = true;
};

inline OdeSettings ode_settings(const SolverSettings& st, double duration) {
    OdeSettings os;
    os.rtol = st.rtol;
    os.atol = st.atol;
    if (st.fixed_steps > 0 && duration > 0.0)
        os.fixed_dt = duration / st.fixed_steps;
    return os;
}

// Flow value and linearization at one phase-space point.  P = zdot,
// Q = zbardot; a/b/c are the fluctuation coefficients
//   a = d_z [g^{-1} d_z H],  c = d_zbar [g^{-1} d_zbar H],
//   b = (d_z [g^{-1} d_zbar H] + d_zbar [g^{-1} d_z H]) / 2,
// all at independent slots along the trajectory.
struct FlowDerivatives {
    cplx P{}, Q{};
    cplx Pz{}, Pzb{}, Qz{}, Qzb{};
    cplx a{}, b{}, c{};
};

class FlowField {
public:
    FlowField(const SymbolEvaluator& sym, double rmax = 1e6);

    void flow(double t, cplx z, cplx zbar, cplx& P, cplx& Q) const;
    FlowDerivatives full(double t, cplx z, cplx zbar) const;
    const SymbolEvaluator& symbols() const { return *sym_; }

private:
    const SymbolEvaluator* sym_;
    double rmax_;
    void check_range(cplx z, cplx zbar) const;
};

struct ClassicalTrajectory {
    std::vector<double> grid;
    std::vector<cplx> z_path, zbar_path;   // independent, not conjugates
    // fundamental matrix of the flow linearized about the path,
    // d(z,zbar)(s) / d(z,zbar)(0), on the same grid
    std::vector<cplx> m11, m12, m21, m22;
    cplx sens_zI{1.0, 0.0};     // d z_c(tau) / d z_I at fixed zbar_F
    cplx sens_zbarF{1.0, 0.0};  // d zbar_c(0) / d zbar_F at fixed z_I
    double residual = 0.0;      // |zbar(tau) - zbar_F|
    std::string solver_tag;
    bool multiple_solutions_suspected = false;

    cplx zbar0() const { return zbar_path.front(); }
    double tau() const { return grid.back(); }
};

// Moebius-linearized solution for Hamiltonians linear in the generators.
// The holomorphic Riccati flow is represented by a 2x2 matrix ODE integrated
// forward; the antiholomorphic one by its counterpart integrated backward
// from the final condition.  The boundary residual vanishes by construction.
ClassicalTrajectory solve_linear_flow(const HamiltonianSpec& h, const PhaseSpaceGeometry& g,
                                      const BoundaryData& bd, int steps,
                                      const SolverSettings& st = {});

// Newton shooting on the single complex unknown zbar(0), with the derivative
// taken from the variational integration.
ClassicalTrajectory solve_bvp_shooting(const SymbolEvaluator& sym, const BoundaryData& bd,
                                       cplx guess, const SolverSettings& st = {});

// Dispatch: Moebius flow for linear specs, otherwise shooting from the
// default guess zbar_F with a duration-continuation fallback.
ClassicalTrajectory solve_trajectory(const SymbolEvaluator& sym, const BoundaryData& bd,
                                     const SolverSettings& st = {});

struct JacobiSolution {
    std::vector<double> grid;
    std::vector<cplx> phi, phibar, psi, psibar;
    std::vector<cplx> b_integral;   // int_0^s b dt along the trajectory
    double wronskian_drift = 0.0;
    cplx det_forward{}, det_backward{};
};

// Integrates the gauge-transformed Jacobi system along a converged
// trajectory: forward with (phi, phibar)(0) = (0, 1) and backward with
// (psi, psibar)(tau) = (1, 0).
JacobiSolution solve_jacobi(const ClassicalTrajectory& traj, const SymbolEvaluator& sym,
                            const SolverSettings& st = {});

// Fluctuation determinant ratio phibar(tau)/phibar(0) (= psi(0)/psi(tau));
// both routes are compared and must agree.
cplx det_ratio_jacobi(const JacobiSolution& js);

// Max-norm residual of the flow equations on the stored grid, from high-order
// finite differences of the path arrays.  Diagnostic for tests.
double flow_residual_max(const ClassicalTrajectory& traj, const SymbolEvaluator& sym);

} // namespace qcprop
