#include "invsq/approxefn.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "invsq/common.hpp"
#include "invsq/exterior.hpp"
#include "invsq/quadrature.hpp"

namespace invsq {

PiecewisePoly make_smoothing() {
    PiecewisePoly h;
    h.append(PiecewisePoly::linear(1.0, 1.5, 0.0, 1.0));
    h.append(PiecewisePoly::hermite(1.5, 2.0, 0.5, 1.0, 0.0, 0.0, 0.0, 0.0));
    return h;
}

double smoothing_value(const PiecewisePoly& h, double t) {
    return (t <= 1.0 || t >= 2.0) ? 0.0 : h.value(t);
}
double smoothing_deriv(const PiecewisePoly& h, double t) {
    return (t <= 1.0 || t >= 2.0) ? 0.0 : h.deriv(t);
}
double smoothing_second(const PiecewisePoly& h, double t) {
    return (t <= 1.0 || t >= 2.0) ? 0.0 : h.second(t);
}

namespace {

// int_a^b amp^2 r cos^2(tau ln r + c) dr, closed form.
double oscillatory_mass(double amp, double tau, double c, double a, double b) {
    auto prim = [&](double r) {
        const std::complex<double> i(0.0, 1.0);
        const std::complex<double> osc =
            std::exp(2.0 * i * c) * std::pow(std::complex<double>(r, 0.0), 2.0 + 2.0 * i * tau) /
            (2.0 + 2.0 * i * tau);
        return r * r / 4.0 + 0.5 * osc.real();
    };
    return amp * amp * (prim(b) - prim(a));
}

struct ZeroModeForm {
    double amp = 0.0;
    double c = 0.0;
    double mass_inside_r0 = 0.0;
};

// Beyond r0 the lambda=0 mode-1 solution is exactly A r^{-1/2} cos(tau ln r + c).
ZeroModeForm zero_mode_form(const InteriorModel& model, const AngularMode& mode) {
    const double r_hi = 20.0 * model.r0;
    const InteriorSolution sol = interior_solution(mode, 0.0, model, r_hi, 256);
    std::vector<double> xs, ys;
    double mass_r0 = 0.0;
    for (std::size_t i = 0; i < sol.r.size(); ++i) {
        if (sol.r[i] <= model.r0) mass_r0 = sol.mass_from_zero[i];
        if (sol.r[i] < 2.0 * model.r0) continue;
        xs.push_back(sol.r[i]);
        ys.push_back(std::sqrt(sol.r[i]) * sol.Y[i]);
    }
    const CosineFit fit = fit_log_cosine(xs, ys, mode.tau);
    if (fit.residual > 1e-6)
        throw Error("zero mode is not of the pure oscillatory form beyond r0");
    ZeroModeForm form;
    form.amp = fit.amplitude * std::exp(sol.log_scale);
    form.c = fit.phase;
    form.mass_inside_r0 = mass_r0 * std::exp(2.0 * sol.log_scale);
    return form;
}

double frozen_Y(const ZeroModeForm& f, double tau, double r) {
    return f.amp * std::cos(tau * std::log(r) + f.c) / std::sqrt(r);
}
double frozen_Yp(const ZeroModeForm& f, double tau, double r) {
    const double phi = tau * std::log(r) + f.c;
    return -f.amp * (0.5 * std::cos(phi) + tau * std::sin(phi)) * std::pow(r, -1.5);
}

double matching_G(const AngularMode& mode, const ZeroModeForm& form,
                  double lambda, double rho) {
    const ExteriorSolution ex = evaluate_exterior(mode, lambda, rho, rho);
    return ex.Xp.front() * frozen_Y(form, mode.tau, rho) -
           frozen_Yp(form, mode.tau, rho) * ex.X.front();
}

double bisect_G(const AngularMode& mode, const ZeroModeForm& form,
                double rho, double lambda_lo, double lambda_hi) {
    double flo = matching_G(mode, form, lambda_lo, rho);
    double fhi = matching_G(mode, form, lambda_hi, rho);
    if (flo == 0.0) return lambda_lo;
    if (fhi == 0.0) return lambda_hi;
    if ((flo > 0.0) == (fhi > 0.0)) throw Error("empty bracket for the matching function");
    double lo = std::log(lambda_lo), hi = std::log(lambda_hi);
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double fm = matching_G(mode, form, std::exp(mid), rho);
        if (fm == 0.0) return std::exp(mid);
        if ((fm > 0.0) == (flo > 0.0))
            lo = mid;
        else
            hi = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

void check_delta(const InteriorModel& model, double delta) {
    double bound = 0.25;
    if (model.spectrum.modes.size() > 1) {
        const double a2 = model.spectrum.modes[1].alpha.real();
        bound = std::min(bound, -a2 / (1.0 - 2.0 * a2));
    }
    if (!(delta > 0.0 && delta < bound))
        throw Error("delta = " + std::to_string(delta) +
                    " violates the constraint delta < min(1/4, -alpha_2/(1-2 alpha_2)) = " +
                    std::to_string(bound));
}

}  // namespace

ApproxContext make_approx_context(const InteriorModel& model) {
    if (model.spectrum.modes.empty()) throw Error("model has no angular spectrum");
    const AngularMode& mode = model.spectrum.modes.front();
    if (!mode.critical || mode.multiplicity != 1)
        throw Error("construction requires a simple critical lowest mode");
    ApproxContext ctx;
    ctx.tau = mode.tau;
    ctx.sigma = std::exp(-2.0 * kPi / ctx.tau);
    const ZeroModeForm form = zero_mode_form(model, mode);
    ctx.c = form.c;
    ctx.amp_Y = form.amp;
    ctx.mass_inside_r0 = form.mass_inside_r0;
    ctx.d = phase_constant_d(ctx.tau).d_value;
    ctx.C = 2.0 * (ctx.d - ctx.c);

    // Anchor the 2 pi branch of C on an actual root of the matching function.
    const int n0 = 4;
    const double delta = 0.2;
    const double center = (-2.0 * kPi * n0 - ctx.C) / ctx.tau;
    const double period = 2.0 * kPi / ctx.tau;
    const int scan_n = 120;
    double best = 0.0, best_dist = 1e300;
    auto g_at = [&](double lam) {
        return matching_G(mode, form, lam, std::pow(lam, -0.5 + 0.5 * delta));
    };
    double prev_lam = std::exp(center - 0.75 * period);
    double prev_f = g_at(prev_lam);
    for (int i = 1; i <= scan_n; ++i) {
        const double lam = std::exp(center + (-0.75 + 1.5 * i / scan_n) * period);
        const double fv = g_at(lam);
        if (fv == 0.0 || (fv > 0.0) != (prev_f > 0.0)) {
            const double rho = std::pow(std::sqrt(prev_lam * lam), -0.5 + 0.5 * delta);
            const double root = bisect_G(mode, form, rho, prev_lam, lam);
            const double dist = std::abs(std::log(root) - center);
            if (dist < best_dist) {
                best_dist = dist;
                best = root;
            }
        }
        prev_lam = lam;
        prev_f = fv;
    }
    if (best == 0.0) throw Error("make_approx_context: no matching root found near xi_4");
    ctx.branch_k = static_cast<int>(
        std::lround((-2.0 * kPi * n0 - ctx.C - ctx.tau * std::log(best)) / (2.0 * kPi)));
    ctx.C += 2.0 * kPi * ctx.branch_k;
    return ctx;
}

double solve_approx_lambda(const InteriorModel& model, const ApproxContext& ctx, int n,
                           double delta) {
    if (n < 1) throw Error("solve_approx_lambda: n must be >= 1");
    check_delta(model, delta);
    const AngularMode& mode = model.spectrum.modes.front();
    const ZeroModeForm form{ctx.amp_Y, ctx.c, ctx.mass_inside_r0};
    const double xi = std::exp((-2.0 * kPi * n - ctx.C) / ctx.tau);
    const double half = 0.5 * (1.0 - ctx.sigma);
    double lambda = xi;
    // rho varies slowly with lambda; two frozen-rho solves converge it.
    for (int pass = 0; pass < 2; ++pass) {
        const double rho = std::pow(lambda, -0.5 + 0.5 * delta);
        if (rho <= model.r0)
            throw Error("solve_approx_lambda: matching radius inside r0 (n too small)");
        try {
            lambda = bisect_G(mode, form, rho, xi * (1.0 - half), xi * (1.0 + half));
        } catch (const Error&) {
            lambda = bisect_G(mode, form, rho, xi * (1.0 - 1.5 * half),
                              xi * (1.0 + 1.5 * half));
        }
    }
    return lambda;
}

PhiFunction build_phi(const InteriorModel& model, double lambda, int mode_cut, double delta,
                      const std::vector<double>& psi) {
    if (mode_cut < 1) throw Error("build_phi: mode_cut must be >= 1");
    if (!(lambda > 0.0)) throw Error("build_phi: lambda must be > 0");
    check_delta(model, delta);
    if (static_cast<std::size_t>(mode_cut) > model.spectrum.modes.size())
        throw Error("build_phi: mode_cut exceeds the computed angular spectrum");
    const AngularMode& mode1 = model.spectrum.modes.front();
    if (!mode1.critical || mode1.multiplicity != 1)
        throw Error("construction requires a simple critical lowest mode");

    PhiFunction out;
    out.lambda = lambda;
    out.delta = delta;
    out.rho = std::pow(lambda, -0.5 + 0.5 * delta);
    if (out.rho <= 2.0 * model.r0) throw Error("build_phi: matching radius too close to r0");
    const double rho = out.rho;
    const PiecewisePoly h = make_smoothing();
    const ZeroModeForm form = zero_mode_form(model, mode1);

    // Mode 1: regular zero mode inside, no smoothing bump.
    {
        const ExteriorSolution ex = evaluate_exterior(mode1, lambda, rho, 2.0 * rho, 96);
        const double exs = std::exp(ex.log_scale);
        const double X = ex.X.front() * exs, Xp = ex.Xp.front() * exs;
        const double Y = frozen_Y(form, mode1.tau, rho), Yp = frozen_Yp(form, mode1.tau, rho);
        if (X == 0.0) throw Error("build_phi: mode-1 exterior node at rho");
        PhiMode pm;
        pm.mode = mode1;
        pm.psi = 1.0;
        pm.phi = Y / X;
        pm.chi = rho * (Yp - pm.phi * Xp);
        out.modes.push_back(pm);
        const double m_in =
            form.mass_inside_r0 + oscillatory_mass(form.amp, mode1.tau, form.c, model.r0, rho);
        out.interior_mass += m_in;
        out.norm2 += m_in + pm.phi * pm.phi * exs * exs * ex.mass_beyond(rho);
        out.value_mismatch = 0.0;
        out.deriv_mismatch = std::abs(pm.chi / rho) /
                             std::max(std::abs(Yp), std::abs(pm.phi * Xp) + 1e-300);
    }

    for (int i = 1; i < mode_cut; ++i) {
        const AngularMode& mode = model.spectrum.modes[static_cast<std::size_t>(i)];
        if (mode.critical)
            throw Error("build_phi: retained mode " + std::to_string(i + 1) +
                        " is critical; the truncated construction needs non-critical higher modes");
        const double psi_i = static_cast<std::size_t>(i) < psi.size()
                                 ? psi[static_cast<std::size_t>(i)]
                                 : 1.0;
        const double alpha = mode.alpha.real();
        const ExteriorSolution ex = evaluate_exterior(mode, lambda, rho, 2.0 * rho, 96);
        const double exs = std::exp(ex.log_scale);
        const double X = ex.X.front() * exs, Xp = ex.Xp.front() * exs;
        if (std::abs(X) < 1e-280) {
            out.warnings.push_back("mode " + std::to_string(i + 1) +
                                   " dropped: exterior value underflows at rho");
            continue;
        }
        PhiMode pm;
        pm.mode = mode;
        pm.psi = psi_i;
        const double Y = psi_i * std::pow(rho, alpha);
        const double Yp = psi_i * alpha * std::pow(rho, alpha - 1.0);
        pm.phi = Y / X;
        pm.chi = rho * (Yp - pm.phi * Xp);
        out.modes.push_back(pm);

        // Interior annulus mass r0 <= r <= rho of psi r^alpha.
        const double e = 2.0 * alpha + 3.0;
        const double m_in = psi_i * psi_i *
                            (std::abs(e) < 1e-12
                                 ? std::log(rho / model.r0)
                                 : (std::pow(rho, e) - std::pow(model.r0, e)) / e);
        out.interior_mass += m_in;

        // Exterior norm over [rho, 2 rho] (trapezoid; X is smooth here) plus tail.
        double seg = 0.0;
        for (std::size_t j = 0; j + 1 < ex.r.size(); ++j) {
            auto val = [&](std::size_t k) {
                const double v =
                    pm.phi * ex.X[k] * exs + pm.chi * smoothing_value(h, ex.r[k] / rho);
                return v * v * ex.r[k] * ex.r[k];
            };
            seg += 0.5 * (val(j) + val(j + 1)) * (ex.r[j + 1] - ex.r[j]);
        }
        const double ext = seg + pm.phi * pm.phi * exs * exs * ex.mass_beyond(2.0 * rho);
        out.norm2 += m_in + ext;
        out.nonprincipal_norm2 += ext;

        // Defect of the bump term under the mode operator
        // A[H] = H'' + 2H'/r + (mu/r^2 - lambda) H, H = chi h(r/rho).
        auto defect2 = [&](double r) {
            const double t = r / rho;
            const double H = pm.chi * smoothing_value(h, t);
            const double Hp = pm.chi * smoothing_deriv(h, t) / rho;
            const double Hpp = pm.chi * smoothing_second(h, t) / (rho * rho);
            const double a = Hpp + 2.0 * Hp / r + (mode.mu / (r * r) - lambda) * H;
            return a * a * r * r;
        };
        out.bump_defect2 += integrate(defect2, rho, 1.5 * rho, 32) +
                            integrate(defect2, 1.5 * rho, 2.0 * rho, 32);

        const double dv = std::abs(Yp - pm.phi * Xp - pm.chi / rho) /
                          std::max(std::abs(Yp), std::abs(pm.phi * Xp) + 1e-300);
        out.deriv_mismatch = std::max(out.deriv_mismatch, dv);
    }
    return out;
}

ResidualNorm residual_norm(const PhiFunction& phi) {
    ResidualNorm rn;
    rn.num = std::sqrt(phi.lambda * phi.lambda * phi.interior_mass + phi.bump_defect2);
    rn.ratio = rn.num / std::sqrt(phi.norm2);
    return rn;
}

SpectralInterval localize_spectrum(const PhiFunction& phi) {
    const ResidualNorm rn = residual_norm(phi);
    return {phi.lambda - rn.ratio, phi.lambda + rn.ratio};
}

}  // namespace invsq
