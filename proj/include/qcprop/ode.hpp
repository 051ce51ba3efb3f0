#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "qcprop/errors.hpp"

namespace qcprop {

using cplx = std::complex<double>;

struct OdeSettings {
    double rtol = 1e-12;
    double atol = 1e-14;
    long max_steps = 4000000;
    // When positive, integrate with equal steps of (at most) this size and no
    // error control.  The result is then a smooth function of the initial
    // data down to roundoff, which the finite-difference probes rely on.
    double fixed_dt = 0.0;
};

// Dormand-Prince 5(4) pair on a complex state vector.  Small systems only
// (a handful of components), so the state is a plain std::vector re-used
// between stages.
//
// rhs(t, y, dy) must fill dy; it may throw to abort the integration.
class DormandPrince5 {
public:
    using State = std::vector<cplx>;
    using Rhs = std::function<void(double, const State&, State&)>;

    DormandPrince5(Rhs rhs, OdeSettings settings = {})
        : rhs_(std::move(rhs)), opt_(settings) {}

    // Advance y from t0 to t1 (either direction).
    void integrate(double t0, double t1, State& y) {
        if (t0 == t1) return;
        if (opt_.fixed_dt > 0.0) {
            fixed(t0, t1, y);
        } else {
            adaptive(t0, t1, y);
        }
    }

    // Integrate across the (sorted) grid, invoking observe(i, grid[i], y) at
    // every node including the first.  The grid may be decreasing.
    void integrate_grid(std::span<const double> grid, State& y,
                        const std::function<void(std::size_t, double, const State&)>& observe) {
        if (grid.empty()) return;
        observe(0, grid[0], y);
        for (std::size_t i = 1; i < grid.size(); ++i) {
            integrate(grid[i - 1], grid[i], y);
            observe(i, grid[i], y);
        }
    }

private:
    Rhs rhs_;
    OdeSettings opt_;
    State k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_, yerr_, incr_;

    void stages(double t, double h, const State& y, State& y5) {
        const std::size_t n = y.size();
        auto resize_all = [n](State& s) { s.assign(n, cplx(0.0)); };
        if (k1_.size() != n) {
            resize_all(k1_); resize_all(k2_); resize_all(k3_); resize_all(k4_);
            resize_all(k5_); resize_all(k6_); resize_all(k7_);
            resize_all(ytmp_); resize_all(yerr_); resize_all(incr_);
        }
        rhs_(t, y, k1_);
        for (std::size_t i = 0; i < n; ++i)
            ytmp_[i] = y[i] + h * (1.0 / 5) * k1_[i];
        rhs_(t + h / 5, ytmp_, k2_);
        for (std::size_t i = 0; i < n; ++i)
            ytmp_[i] = y[i] + h * ((3.0 / 40) * k1_[i] + (9.0 / 40) * k2_[i]);
        rhs_(t + 3 * h / 10, ytmp_, k3_);
        for (std::size_t i = 0; i < n; ++i)
            ytmp_[i] = y[i] + h * ((44.0 / 45) * k1_[i] - (56.0 / 15) * k2_[i] + (32.0 / 9) * k3_[i]);
        rhs_(t + 4 * h / 5, ytmp_, k4_);
        for (std::size_t i = 0; i < n; ++i)
            ytmp_[i] = y[i] + h * ((19372.0 / 6561) * k1_[i] - (25360.0 / 2187) * k2_[i]
                                 + (64448.0 / 6561) * k3_[i] - (212.0 / 729) * k4_[i]);
        rhs_(t + 8 * h / 9, ytmp_, k5_);
        for (std::size_t i = 0; i < n; ++i)
            ytmp_[i] = y[i] + h * ((9017.0 / 3168) * k1_[i] - (355.0 / 33) * k2_[i]
                                 + (46732.0 / 5247) * k3_[i] + (49.0 / 176) * k4_[i]
                                 - (5103.0 / 18656) * k5_[i]);
        rhs_(t + h, ytmp_, k6_);
        for (std::size_t i = 0; i < n; ++i) {
            incr_[i] = h * ((35.0 / 384) * k1_[i] + (500.0 / 1113) * k3_[i]
                          + (125.0 / 192) * k4_[i] - (2187.0 / 6784) * k5_[i]
                          + (11.0 / 84) * k6_[i]);
            y5[i] = y[i] + incr_[i];
        }
        rhs_(t + h, y5, k7_);
        // embedded 4th order error estimate
        for (std::size_t i = 0; i < n; ++i)
            yerr_[i] = h * ((71.0 / 57600) * k1_[i] - (71.0 / 16695) * k3_[i]
                          + (71.0 / 1920) * k4_[i] - (17253.0 / 339200) * k5_[i]
                          + (22.0 / 525) * k6_[i] - (1.0 / 40) * k7_[i]);
    }

    // Fixed-step pass with compensated state accumulation: the rounding
    // random walk of y += increment would otherwise dominate the noise floor
    // of finite differences taken over whole solves.
    void fixed(double t0, double t1, State& y) {
        const long n = std::max(1L, std::lround(std::abs(t1 - t0) / opt_.fixed_dt));
        const double h = (t1 - t0) / static_cast<double>(n);
        State y5 = y;
        State carry(y.size(), cplx(0.0));
        for (long k = 0; k < n; ++k) {
            stages(t0 + k * h, h, y, y5);
            for (std::size_t i = 0; i < y.size(); ++i) {
                const cplx t = incr_[i] - carry[i];
                const cplx ynew = y[i] + t;
                carry[i] = (ynew - y[i]) - t;
                y[i] = ynew;
            }
        }
    }

    void adaptive(double t0, double t1, State& y) {
        const double dir = (t1 > t0) ? 1.0 : -1.0;
        const double span = std::abs(t1 - t0);
        double t = t0;
        double h = dir * std::min(span, std::max(1e-8, span * 1e-2));
        State y5 = y;
        long nsteps = 0;
        while (dir * (t1 - t) > 0) {
            if (++nsteps > opt_.max_steps)
                throw IntegratorFailureError("step limit exceeded in adaptive integration");
            if (dir * (t + h - t1) > 0) h = t1 - t;
            stages(t, h, y, y5);
            double err = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i) {
                const double sc = opt_.atol + opt_.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
                const double e = std::abs(yerr_[i]) / sc;
                err += e * e;
            }
            err = std::sqrt(err / static_cast<double>(y.size()));
            if (err <= 1.0) {
                t += h;
                y = y5;
                const double fac = (err > 0) ? 0.9 * std::pow(err, -0.2) : 5.0;
                h *= std::clamp(fac, 0.2, 5.0);
            } else {
                h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
                if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(t)))
                    throw IntegratorFailureError("step size underflow");
            }
        }
    }
};

} // namespace qcprop
