#include "invsq/ladder.hpp"

#include <algorithm>
#include <cmath>

#include "invsq/common.hpp"
#include "invsq/ode.hpp"

namespace invsq {

InteriorModel InteriorModel::standard(double mu1, int basis_size) {
    if (!(mu1 > 0.25)) throw Error("InteriorModel::standard: mu1 must exceed 1/4");
    InteriorModel m;
    m.r0 = 1.0;
    m.f = smoothstep(0.0, 1.0);
    m.p = SpherePotential::constant(3, -mu1);
    m.spectrum = angular_spectrum(m.p, basis_size);
    return m;
}

double InteriorModel::coupling(double r) const { return r >= r0 ? 1.0 : f.value(std::max(0.0, r)); }

double InteriorModel::offset(double r) const {
    if (!has_w || r >= r0) return 0.0;
    return w.value(std::max(0.0, r));
}

InteriorSolution interior_solution(const AngularMode& mode, double lambda,
                                   const InteriorModel& model, double r_hi,
                                   int points_per_decade) {
    if (lambda < 0.0) throw Error("interior_solution: lambda must be >= 0");
    if (!(r_hi > 0.0)) throw Error("interior_solution: r_hi must be > 0");
    const double r_start = std::min(1e-6, r_hi * 0.5);

    // mu-coupling at the origin fixes the Frobenius exponent: s(s+1) = -a0.
    const double a0 = mode.mu * model.coupling(0.0) -
                      model.angular_shift * (1.0 - model.coupling(0.0));
    const double disc = 1.0 - 4.0 * a0;
    if (disc < 0.0)
        throw Error("interior_solution: no regular real exponent at r = 0 (coupling too singular)");
    const double s = 0.5 * (-1.0 + std::sqrt(disc));

    auto mu_eff = [&](double r) {
        const double fr = model.coupling(r);
        return mode.mu * fr - model.angular_shift * (1.0 - fr);
    };
    // Log variable u = ln r, Z(u) = Y(e^u): Z'' + Z' + (mu_eff - e^{2u}(w + lambda)) Z = 0.
    auto sys = [&](double u, const StateN<3>& y, StateN<3>& dy) {
        const double r = std::exp(u);
        dy[0] = y[1];
        dy[1] = -y[1] - (mu_eff(r) - r * r * (model.offset(r) + lambda)) * y[0];
        dy[2] = y[0] * y[0] * r * r * r;
    };

    std::vector<double> targets;
    const double decades = std::log10(r_hi / r_start);
    const int n = std::max(2, static_cast<int>(std::ceil(decades * points_per_decade)) + 1);
    for (int i = 0; i < n; ++i)
        targets.push_back(r_start * std::pow(r_hi / r_start, static_cast<double>(i) / (n - 1)));

    InteriorSolution sol;
    sol.mode = mode;
    sol.lambda = lambda;
    sol.r_start = r_start;

    const double u0 = std::log(r_start);
    StateN<3> y{std::exp(s * u0), s * std::exp(s * u0),
                std::pow(r_start, 2.0 * s + 3.0) / (2.0 * s + 3.0)};
    double u = u0;
    double acc = 0.0;
    std::vector<double> accs;
    std::vector<StateN<3>> states;
    OdeOptions opt;
    opt.rel_tol = 1e-12;
    opt.abs_tol = 1e-14;
    for (double rt : targets) {
        const double ut = std::log(rt);
        if (ut > u) y = ode_integrate<3>(sys, y, u, ut, opt);
        u = ut;
        const double scale = std::max(std::abs(y[0]), std::abs(y[1]));
        if (scale > 1e200) {
            y[0] /= scale;
            y[1] /= scale;
            y[2] /= scale * scale;
            acc += std::log(scale);
        }
        states.push_back(y);
        accs.push_back(acc);
    }
    sol.log_scale = acc;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const double adj = std::exp(accs[i] - acc);
        sol.r.push_back(targets[i]);
        sol.Y.push_back(adj * states[i][0]);
        sol.Yp.push_back(adj * states[i][1] / targets[i]);
        sol.mass_from_zero.push_back(adj * adj * states[i][2]);
    }
    return sol;
}

namespace {

const AngularMode& lowest_mode(const InteriorModel& model) {
    if (model.spectrum.modes.empty()) throw Error("model has no angular spectrum");
    return model.spectrum.modes.front();
}

void check_theorem2_mode(const AngularMode& m) {
    if (!m.critical)
        throw Error("lowest angular mode is not critical (mu1 <= 1/4); no ladder exists");
    if (m.multiplicity != 1) throw Error("lowest angular mode is degenerate; ladder not computed");
}

struct Shoot {
    double Y, Yp, X, Xp;  // values at r0, each pair in its own positive scaling
    double value() const { return Yp * X - Y * Xp; }
};

Shoot wronskian_parts(const InteriorModel& model, const AngularMode& mode, double lambda) {
    const InteriorSolution in = interior_solution(mode, lambda, model, model.r0, 8);
    const ExteriorSolution ex = evaluate_exterior(mode, lambda, model.r0, model.r0);
    return {in.Y.back(), in.Yp.back(), ex.X.front(), ex.Xp.front()};
}

double wronskian(const InteriorModel& model, const AngularMode& mode, double lambda) {
    return wronskian_parts(model, mode, lambda).value();
}

}  // namespace

double phase_constant_c(const InteriorModel& model, double r_lo, double r_hi) {
    const AngularMode& mode = lowest_mode(model);
    check_theorem2_mode(mode);
    if (!(model.r0 < r_lo && r_lo < r_hi))
        throw Error("phase_constant_c: fit window must lie beyond r0");
    const InteriorSolution sol = interior_solution(mode, 0.0, model, r_hi, 256);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < sol.r.size(); ++i) {
        if (sol.r[i] < r_lo) continue;
        xs.push_back(sol.r[i]);
        ys.push_back(std::sqrt(sol.r[i]) * sol.Y[i]);
    }
    const CosineFit fit = fit_log_cosine(xs, ys, mode.tau);
    if (fit.residual > 1e-4)
        throw Error("phase_constant_c: fit residual above 1e-4 (window error)");
    return fit.phase;
}

double match_eigenvalue(const InteriorModel& model, const AngularMode& mode, double lambda_lo,
                        double lambda_hi) {
    if (!(0.0 < lambda_lo && lambda_lo < lambda_hi))
        throw Error("match_eigenvalue: need 0 < lambda_lo < lambda_hi");
    double flo = wronskian(model, mode, lambda_lo);
    double fhi = wronskian(model, mode, lambda_hi);
    if (flo == 0.0) return lambda_lo;
    if (fhi == 0.0) return lambda_hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw Error("match_eigenvalue: empty bracket (no sign change of the Wronskian)");
    // Guard against multiple roots in the bracket.
    int sign_changes = 0;
    double prev = flo;
    for (int i = 1; i <= 8; ++i) {
        const double lam = lambda_lo * std::pow(lambda_hi / lambda_lo, i / 8.0);
        const double fv = i == 8 ? fhi : wronskian(model, mode, lam);
        if (fv != 0.0 && (fv > 0.0) != (prev > 0.0)) {
            ++sign_changes;
            prev = fv;
        }
    }
    if (sign_changes > 1)
        throw Error("match_eigenvalue: multiple roots in bracket; use a finer bracket");

    double lo = std::log(lambda_lo), hi = std::log(lambda_hi);
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double fm = wronskian(model, mode, std::exp(mid));
        if (fm == 0.0) return std::exp(mid);
        if ((fm > 0.0) == (flo > 0.0))
            lo = mid;
        else
            hi = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

double predicted_xi(int n, double c, double d, double mu1) {
    if (!(mu1 > 0.25)) throw Error("predicted_xi: mu1 must exceed 1/4");
    const double tau = std::sqrt(mu1 - 0.25);
    return std::exp((-2.0 * kPi * n - 2.0 * (d - c)) / tau);
}

EigenLadder compute_ladder(const InteriorModel& model, int n_max) {
    if (n_max < 1) throw Error("compute_ladder: n_max must be >= 1");
    const AngularMode& mode = lowest_mode(model);
    check_theorem2_mode(mode);

    EigenLadder ladder;
    for (const AngularMode& m : model.spectrum.modes)
        if (m.critical && m.index != mode.index) {
            ladder.warnings.push_back(
                "angular spectrum has additional critical modes (Theorem 2 hypothesis "
                "violated); only the lowest-mode ladder is computed");
            break;
        }

    const double tau = mode.tau;
    const double sigma = std::exp(-2.0 * kPi / tau);
    ladder.sigma = sigma;
    ladder.c = phase_constant_c(model);
    ladder.d = phase_constant_d(tau).d_value;
    double C = 2.0 * (ladder.d - ladder.c);

    // C is only defined mod 2 pi: anchor the branch on an actual eigenvalue
    // found by scanning 1.5 periods of ln(lambda) around the raw xi_{n0}.
    const int n0 = 4;
    const double center = (-2.0 * kPi * n0 - C) / tau;
    const double period = 2.0 * kPi / tau;
    const int scan_n = 120;
    double best = 0.0, best_dist = 1e300;
    double prev_lam = std::exp(center - 0.75 * period);
    double prev_f = wronskian(model, mode, prev_lam);
    for (int i = 1; i <= scan_n; ++i) {
        const double lam = std::exp(center + (-0.75 + 1.5 * i / scan_n) * period);
        const double fv = wronskian(model, mode, lam);
        if (fv == 0.0 || (fv > 0.0) != (prev_f > 0.0)) {
            const double root = match_eigenvalue(model, mode, prev_lam, lam);
            const double dist = std::abs(std::log(root) - center);
            if (dist < best_dist) {
                best_dist = dist;
                best = root;
            }
        }
        prev_lam = lam;
        prev_f = fv;
    }
    if (best == 0.0) throw Error("compute_ladder: no eigenvalue found near xi_" + std::to_string(n0));
    ladder.branch_k =
        static_cast<int>(std::lround((-2.0 * kPi * n0 - C - tau * std::log(best)) / (2.0 * kPi)));
    C += 2.0 * kPi * ladder.branch_k;

    const double half = 0.5 * (1.0 - sigma);
    for (int n = 1; n <= n_max; ++n) {
        const double xi = std::exp((-2.0 * kPi * n - C) / tau);
        ladder.xi_n.push_back(xi);
        double lo = xi * (1.0 - half), hi = xi * (1.0 + half);
        double root;
        try {
            root = match_eigenvalue(model, mode, lo, hi);
        } catch (const Error&) {
            // One widening attempt before giving up on this rung.
            const double w = 1.5;
            try {
                root = match_eigenvalue(model, mode, xi * (1.0 - w * half), xi * (1.0 + w * half));
            } catch (const Error& e) {
                throw Error("compute_ladder: bracket failed at n = " + std::to_string(n) + ": " +
                            e.what());
            }
        }
        ladder.lambda_n.push_back(root);
        ladder.a_estimates.push_back(root / std::pow(sigma, n));
    }
    for (std::size_t i = 0; i + 1 < ladder.lambda_n.size(); ++i)
        ladder.ratios.push_back(ladder.lambda_n[i] / ladder.lambda_n[i + 1]);
    return ladder;
}

namespace {

struct AssembledMode {
    InteriorSolution in;
    ExteriorSolution ex;
    double phi_log = 0.0;   // ln |phi| matching exterior to interior at r0
    double total_mass = 0.0;  // in interior true units
    double interior_mass = 0.0;
};

AssembledMode assemble_mode1(const InteriorModel& model, double lambda, int ppd) {
    const AngularMode& mode = lowest_mode(model);
    AssembledMode a;
    const double r_out = 40.0 / std::sqrt(lambda);
    a.ex = evaluate_exterior(mode, lambda, model.r0, r_out, ppd);
    a.in = interior_solution(mode, lambda, model, model.r0, ppd);
    const double y0 = a.in.Y.back();
    const double x0 = a.ex.X.front();
    if (x0 == 0.0) throw Error("assemble_mode1: exterior node at r0");
    // phi in true units; signs are irrelevant for masses.
    a.phi_log = std::log(std::abs(y0)) + a.in.log_scale - std::log(std::abs(x0)) - a.ex.log_scale;
    a.interior_mass = a.in.mass_from_zero.back() * std::exp(2.0 * a.in.log_scale);
    const double ext_mass =
        a.ex.mass_beyond(model.r0) * std::exp(2.0 * (a.phi_log + a.ex.log_scale));
    a.total_mass = a.interior_mass + ext_mass;
    return a;
}

double mass_inside(const AssembledMode& a, double r0, double r_lo, double r_hi) {
    // Exterior contribution on [max(r_lo, r0), r_hi] plus interior on [r_lo, r0].
    const double ext_scale = std::exp(2.0 * (a.phi_log + a.ex.log_scale));
    double m = (a.ex.mass_beyond(std::max(r_lo, r0)) - a.ex.mass_beyond(std::max(r_hi, r0))) *
               ext_scale;
    if (r_lo < r0) {
        const auto& rs = a.in.r;
        auto interp = [&](double rr) {
            if (rr <= rs.front()) return a.in.mass_from_zero.front();
            if (rr >= rs.back()) return a.in.mass_from_zero.back();
            const auto it = std::upper_bound(rs.begin(), rs.end(), rr);
            const std::size_t j = static_cast<std::size_t>(it - rs.begin());
            const double w = std::log(rr / rs[j - 1]) / std::log(rs[j] / rs[j - 1]);
            return a.in.mass_from_zero[j - 1] +
                   w * (a.in.mass_from_zero[j] - a.in.mass_from_zero[j - 1]);
        };
        m += (interp(std::min(r_hi, r0)) - interp(r_lo)) * std::exp(2.0 * a.in.log_scale);
    }
    return m;
}

}  // namespace

double annulus_mass(const InteriorModel& model, double lambda_n, double r_lo, double r_hi) {
    if (!(0.0 < r_lo && r_lo < r_hi)) throw Error("annulus_mass: need 0 < r_lo < r_hi");
    const AssembledMode a = assemble_mode1(model, lambda_n, 96);
    return mass_inside(a, model.r0, r_lo, r_hi) / a.total_mass;
}

LocalizationReport localization(const InteriorModel& model, int n, double lambda_n, double sigma,
                                double envelope_threshold) {
    const AngularMode& mode = lowest_mode(model);
    check_theorem2_mode(mode);
    const AssembledMode a = assemble_mode1(model, lambda_n, 96);
    const double sq = std::sqrt(lambda_n);

    // Envelope of the density X^2 s^2 over a sliding log window of half-width
    // pi/tau (half an oscillation period), then the 2% threshold.
    const std::size_t m = a.ex.r.size();
    std::vector<double> ls(m), dens(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double s = a.ex.r[i] * sq;
        ls[i] = std::log(s);
        dens[i] = a.ex.X[i] * a.ex.X[i] * s * s;
    }
    const double halfw = kPi / mode.tau;
    std::vector<double> env(m, 0.0);
    std::size_t jlo = 0, jhi = 0;
    for (std::size_t i = 0; i < m; ++i) {
        while (jlo < m && ls[jlo] < ls[i] - halfw) ++jlo;
        while (jhi < m && ls[jhi] <= ls[i] + halfw) ++jhi;
        for (std::size_t j = jlo; j < jhi; ++j) env[i] = std::max(env[i], dens[j]);
    }
    const double peak = *std::max_element(env.begin(), env.end());
    const double thresh = envelope_threshold * peak;
    std::size_t i_lo = m, i_hi = 0;
    for (std::size_t i = 0; i < m; ++i)
        if (env[i] >= thresh) {
            i_lo = std::min(i_lo, i);
            i_hi = std::max(i_hi, i);
        }
    if (i_lo >= i_hi) throw Error("localization: degenerate density envelope");

    LocalizationReport rep;
    rep.n = n;
    rep.lambda = lambda_n;
    rep.r_lo = a.ex.r[i_lo];
    rep.r_hi = a.ex.r[i_hi];
    rep.mass_fraction = mass_inside(a, model.r0, rep.r_lo, rep.r_hi) / a.total_mass;
    rep.interior_fraction = a.interior_mass / a.total_mass;
    const double scale = std::pow(sigma, 0.5 * n);
    rep.C_minus = rep.r_lo * scale;
    rep.C_plus = rep.r_hi * scale;
    return rep;
}

}  // namespace invsq
