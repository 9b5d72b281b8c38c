#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "invsq/common.hpp"

namespace invsq {

template <std::size_t N>
using StateN = std::array<double, N>;

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.0;   // 0 = unlimited
    double init_step = 0.0;  // 0 = auto
};

/// Integrate dy/dt = sys(t, y, dydt) from t0 to t1 (either direction) with an
/// adaptive Dormand-Prince 5(4) pair. `obs(t, y)` runs after each accepted step.
template <std::size_t N, class Sys, class Obs>
StateN<N> ode_integrate(Sys&& sys, StateN<N> y, double t0, double t1, const OdeOptions& opt,
                        Obs&& obs) {
    namespace odeint = boost::numeric::odeint;
    if (t0 == t1) return y;

    auto system = [&sys](const StateN<N>& x, StateN<N>& dxdt, double t) { sys(t, x, dxdt); };
    auto stepper =
        odeint::make_controlled(opt.abs_tol, opt.rel_tol, odeint::runge_kutta_dopri5<StateN<N>>());

    const double dir = (t1 > t0) ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    double t = t0;
    double dt = dir * (opt.init_step > 0 ? opt.init_step : std::min(span, 0.1));
    const double dt_floor = span * 1e-14 + 1e-300;

    while (dir * (t1 - t) > 0.0) {
        if (dir * (t + dt) > dir * t1) dt = t1 - t;
        if (opt.max_step > 0 && std::abs(dt) > opt.max_step) dt = dir * opt.max_step;
        const auto res = stepper.try_step(system, y, t, dt);
        if (res == odeint::success) {
            obs(t, y);
        } else if (std::abs(dt) < dt_floor) {
            throw Error("ode_integrate: step size underflow at t = " + std::to_string(t));
        }
    }
    return y;
}

template <std::size_t N, class Sys>
StateN<N> ode_integrate(Sys&& sys, StateN<N> y, double t0, double t1,
                        const OdeOptions& opt = {}) {
    return ode_integrate<N>(sys, y, t0, t1, opt, [](double, const StateN<N>&) {});
}

/// Integrate through a sorted list of output points (ascending or descending,
/// consistent with the direction t0 -> targets.back()), invoking
/// `at(t, y)` exactly at each target.
template <std::size_t N, class Sys, class At>
StateN<N> ode_collect(Sys&& sys, StateN<N> y, double t0, std::span<const double> targets,
                      const OdeOptions& opt, At&& at) {
    double t = t0;
    for (double tk : targets) {
        y = ode_integrate<N>(sys, y, t, tk, opt);
        at(tk, y);
        t = tk;
    }
    return y;
}

}  // namespace invsq
