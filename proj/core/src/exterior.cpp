#include "invsq/exterior.hpp"

#include <algorithm>
#include <cmath>

#include "invsq/common.hpp"
#include "invsq/ode.hpp"

namespace invsq {

namespace {

// Log-variable form: g = r^{1/2} X satisfies g'' + (mu - 1/4 - lambda e^{2u}) g = 0,
// u = ln r. State is (g, g', m) with m' = g^2 e^{2u} (the L^2 mass element X^2 r^2 dr).
struct LogState {
    double g, gp, m;
};

constexpr double kRescaleAt = 1e200;

}  // namespace

ExteriorSolution evaluate_exterior(const AngularMode& mode, double lambda, double r_lo,
                                   double r_hi, int points_per_decade) {
    if (!(lambda > 0.0)) throw Error("evaluate_exterior: lambda must be > 0");
    if (!(r_lo > 0.0) || r_hi < r_lo) throw Error("evaluate_exterior: need 0 < r_lo <= r_hi");
    const double sqrt_lambda = std::sqrt(lambda);
    const double seed_r = std::max(30.0 / sqrt_lambda, r_hi);

    ExteriorSolution sol;
    sol.mode = mode;
    sol.lambda = lambda;
    sol.seed_r = seed_r;

    // Geometric grid, descending for the inward pass.
    std::vector<double> targets;
    if (r_hi == r_lo) {
        targets.push_back(r_lo);
    } else {
        const double decades = std::log10(r_hi / r_lo);
        const int n = std::max(2, static_cast<int>(std::ceil(decades * points_per_decade)) + 1);
        for (int i = 0; i < n; ++i)
            targets.push_back(r_hi * std::pow(r_lo / r_hi, static_cast<double>(i) / (n - 1)));
    }

    const double mu = mode.mu;
    auto sys = [mu, lambda](double u, const StateN<3>& y, StateN<3>& dy) {
        dy[0] = y[1];
        dy[1] = -(mu - 0.25 - lambda * std::exp(2.0 * u)) * y[0];
        dy[2] = y[0] * y[0] * std::exp(2.0 * u);
    };

    // Seed: X = 1, X'/X = -(1/r + sqrt(lambda)) at seed_r, i.e. the leading
    // asymptotic direction; contamination by the growing solution decays like
    // e^{2(x - 30)} going inward.
    const double us = std::log(seed_r);
    StateN<3> y{std::exp(us / 2.0), std::exp(us / 2.0) * (-0.5 - seed_r * sqrt_lambda), 0.0};
    double u = us;
    double acc = 0.0;  // ln of the factor divided out so far
    std::vector<double> accs;
    std::vector<LogState> states;
    OdeOptions opt;
    opt.rel_tol = 1e-12;
    opt.abs_tol = 1e-14;

    for (double rt : targets) {
        const double ut = std::log(rt);
        if (ut < u) y = ode_integrate<3>(sys, y, u, ut, opt);
        u = ut;
        const double scale = std::max(std::abs(y[0]), std::abs(y[1]));
        if (scale > kRescaleAt) {
            y[0] /= scale;
            y[1] /= scale;
            y[2] /= scale * scale;
            acc += std::log(scale);
        }
        states.push_back({y[0], y[1], y[2]});
        accs.push_back(acc);
    }

    sol.log_scale = acc;
    sol.tail_beyond_seed = std::exp(-2.0 * acc) * seed_r * seed_r / (2.0 * sqrt_lambda);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const double rt = targets[i];
        const double ut = std::log(rt);
        const double adj = std::exp(accs[i] - acc);  // bring to the final scaling
        sol.r.push_back(rt);
        sol.X.push_back(adj * states[i].g * std::exp(-ut / 2.0));
        sol.Xp.push_back(adj * (states[i].gp - 0.5 * states[i].g) * std::exp(-1.5 * ut));
        sol.mass_to_seed.push_back(-states[i].m * adj * adj);
    }
    std::reverse(sol.r.begin(), sol.r.end());
    std::reverse(sol.X.begin(), sol.X.end());
    std::reverse(sol.Xp.begin(), sol.Xp.end());
    std::reverse(sol.mass_to_seed.begin(), sol.mass_to_seed.end());
    return sol;
}

double ExteriorSolution::mass_beyond(double radius) const {
    if (r.empty()) throw Error("mass_beyond: empty solution");
    if (radius >= r.back()) return tail_beyond_seed + (radius >= seed_r ? 0.0 : mass_to_seed.back());
    if (radius <= r.front()) return mass_to_seed.front() + tail_beyond_seed;
    const auto it = std::upper_bound(r.begin(), r.end(), radius);
    const std::size_t j = static_cast<std::size_t>(it - r.begin());
    const double w = std::log(radius / r[j - 1]) / std::log(r[j] / r[j - 1]);
    return mass_to_seed[j - 1] + w * (mass_to_seed[j] - mass_to_seed[j - 1]) + tail_beyond_seed;
}

double log_derivative(const AngularMode& mode, double lambda, double rho) {
    const ExteriorSolution sol = evaluate_exterior(mode, lambda, rho, rho);
    const double x = sol.X.front(), xp = sol.Xp.front();
    if (std::abs(x) < 1e-12 * (std::abs(xp) * rho + 1e-300))
        throw Error("log_derivative: node at matching radius");
    return xp / x;
}

double tail_mass(const AngularMode& mode, double lambda, double rho) {
    if (!(lambda > 0.0) || !(rho > 0.0)) throw Error("tail_mass: need lambda, rho > 0");
    const double sqrt_lambda = std::sqrt(lambda);
    const double seed_r = 30.0 / sqrt_lambda;
    if (rho >= seed_r) throw Error("tail_mass: rho must lie inside the seed radius");

    const double mu = mode.mu;
    auto sys = [mu, lambda](double u, const StateN<3>& y, StateN<3>& dy) {
        dy[0] = y[1];
        dy[1] = -(mu - 0.25 - lambda * std::exp(2.0 * u)) * y[0];
        dy[2] = y[0] * y[0] * std::exp(2.0 * u);
    };
    const double us = std::log(seed_r);
    StateN<3> y{std::exp(us / 2.0), std::exp(us / 2.0) * (-0.5 - seed_r * sqrt_lambda), 0.0};
    OdeOptions opt;
    opt.rel_tol = 1e-12;
    opt.abs_tol = 1e-14;
    y = ode_integrate<3>(sys, y, us, std::log(rho), opt);
    // m runs from 0 at the seed to a negative value at rho (inward direction);
    // the analytic tail beyond the seed adds seed_r^2 / (2 sqrt(lambda)).
    return -y[2] + seed_r * seed_r / (2.0 * sqrt_lambda);
}

CosineFit fit_log_cosine(const std::vector<double>& x, const std::vector<double>& y, double tau) {
    if (x.size() != y.size() || x.size() < 4) throw Error("fit_log_cosine: need >= 4 samples");
    double cc = 0.0, cs = 0.0, ss = 0.0, yc = 0.0, ys = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double phi = tau * std::log(x[i]);
        const double c = std::cos(phi), s = std::sin(phi);
        cc += c * c;
        cs += c * s;
        ss += s * s;
        yc += y[i] * c;
        ys += y[i] * s;
    }
    const double det = cc * ss - cs * cs;
    if (std::abs(det) < 1e-12 * cc * ss + 1e-300)
        throw Error("fit_log_cosine: degenerate window (less than a phase oscillation)");
    const double p = (yc * ss - ys * cs) / det;
    const double q = (ys * cc - yc * cs) / det;
    CosineFit fit;
    fit.amplitude = std::hypot(p, q);
    fit.phase = std::atan2(-q, p);
    if (fit.phase < 0.0) fit.phase += 2.0 * kPi;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double phi = tau * std::log(x[i]);
        fit.residual = std::max(
            fit.residual, std::abs(y[i] - p * std::cos(phi) - q * std::sin(phi)) / fit.amplitude);
    }
    return fit;
}

PhaseConstantD phase_constant_d(double tau, double x_lo, double x_hi, bool from_derivative) {
    if (!(tau > 0.0)) throw Error("phase_constant_d: tau must be > 0");
    if (!(0.0 < x_lo && x_lo < x_hi && x_hi <= 0.1))
        throw Error("phase_constant_d: fit window must satisfy 0 < x_lo < x_hi <= 0.1");
    AngularMode mode;
    mode.mu = tau * tau + 0.25;
    classify_mode(mode, 3);
    // lambda = 1 makes x = r sqrt(lambda) the radial coordinate itself.
    const double decades = std::log10(x_hi / x_lo);
    const int ppd = std::max(32, static_cast<int>(std::ceil(240.0 / decades)));
    const ExteriorSolution sol = evaluate_exterior(mode, 1.0, x_lo, x_hi, ppd);

    std::vector<double> ys(sol.r.size());
    PhaseConstantD out;
    out.tau = tau;
    out.x_lo = x_lo;
    out.x_hi = x_hi;
    if (!from_derivative) {
        for (std::size_t i = 0; i < sol.r.size(); ++i)
            ys[i] = std::sqrt(sol.r[i]) * sol.X[i];
        const CosineFit fit = fit_log_cosine(sol.r, ys, tau);
        out.amplitude = fit.amplitude;
        out.d_value = fit.phase;
        out.fit_residual = fit.residual;
    } else {
        // x^{3/2} X'(x) = -A (cos(phi)/2 + tau sin(phi)), phi = tau ln x + d.
        for (std::size_t i = 0; i < sol.r.size(); ++i)
            ys[i] = std::pow(sol.r[i], 1.5) * sol.Xp[i];
        double cc = 0.0, cs = 0.0, ss = 0.0, yc = 0.0, ysum = 0.0;
        for (std::size_t i = 0; i < sol.r.size(); ++i) {
            const double phi = tau * std::log(sol.r[i]);
            const double c = std::cos(phi), s = std::sin(phi);
            cc += c * c;
            cs += c * s;
            ss += s * s;
            yc += ys[i] * c;
            ysum += ys[i] * s;
        }
        const double det = cc * ss - cs * cs;
        const double p = (yc * ss - ysum * cs) / det;
        const double q = (ysum * cc - yc * cs) / det;
        // p = -(Ac/2 + tau As), q = -(tau Ac - As/2) for Ac = A cos d, As = A sin d.
        const double den = -(0.25 + tau * tau);
        const double ac = (0.5 * p + tau * q) / den;
        const double as = (tau * p - 0.5 * q) / den;
        out.amplitude = std::hypot(ac, as);
        out.d_value = std::atan2(as, ac);
        if (out.d_value < 0.0) out.d_value += 2.0 * kPi;
        double res = 0.0;
        for (std::size_t i = 0; i < sol.r.size(); ++i) {
            const double phi = tau * std::log(sol.r[i]);
            res = std::max(res, std::abs(ys[i] - p * std::cos(phi) - q * std::sin(phi)));
        }
        out.fit_residual = res / (out.amplitude * std::hypot(0.5, tau));
    }
    if (out.fit_residual > 1e-4)
        throw Error("phase_constant_d: fit residual above 1e-4 (window too wide)");
    return out;
}

}  // namespace invsq
