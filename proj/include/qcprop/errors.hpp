#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qcprop {

// Base of all failures raised by the library.  Every error carries a stable
// machine-readable code, used by the batch runner to report per-point errors
// without aborting a sweep.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define QCPROP_ERROR_TYPE(Name, code_literal)                                  \
    class Name : public Error {                                               \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(code_literal, what) {}  \
    };

QCPROP_ERROR_TYPE(BranchPointError, "branch-point")
QCPROP_ERROR_TYPE(ChartDomainError, "chart-domain")
QCPROP_ERROR_TYPE(ChartOverflowError, "chart-overflow")
QCPROP_ERROR_TYPE(StepTooLargeError, "step-too-large")
QCPROP_ERROR_TYPE(IncompatibleAlgebraError, "incompatible-algebra")
QCPROP_ERROR_TYPE(InvalidSpinError, "invalid-spin")
QCPROP_ERROR_TYPE(InvalidWeightError, "invalid-weight")
QCPROP_ERROR_TYPE(TruncationTooSevereError, "truncation-too-severe")
QCPROP_ERROR_TYPE(NoConvergenceError, "no-convergence")
QCPROP_ERROR_TYPE(MoebiusPoleError, "moebius-pole")
QCPROP_ERROR_TYPE(IntegratorFailureError, "integrator-failure")
QCPROP_ERROR_TYPE(DegenerateWronskianError, "degenerate-wronskian")
QCPROP_ERROR_TYPE(CausticPrefactorError, "caustic-prefactor")
QCPROP_ERROR_TYPE(QuadratureUnresolvedError, "quadrature-unresolved")
QCPROP_ERROR_TYPE(NotFlatError, "not-flat")
QCPROP_ERROR_TYPE(FitDegenerateError, "fit-degenerate")
QCPROP_ERROR_TYPE(ConfigError, "config")

#undef QCPROP_ERROR_TYPE

} // namespace qcprop
