// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Each check is self-contained and runs on the library API only.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "invsq/approxefn.hpp"
#include "invsq/common.hpp"
#include "invsq/experiments.hpp"
#include "invsq/exterior.hpp"
#include "invsq/ladder.hpp"
#include "invsq/oscillation.hpp"

using namespace invsq;

namespace {

int failures = 0;

void report(int idx, const char* name, bool ok, const std::string& detail) {
    std::printf("criterion %2d [%s] %s (%s)\n", idx, ok ? "PASS" : "FAIL", name, detail.c_str());
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Least squares slope of y against x.
double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

const std::vector<double> kEGrid{1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12};
const double kMuHalf = 0.25 + std::pow(2.0 * kPi / std::log(2.0), 2.0);

void criteria_1_2() {
    const auto t0 = std::chrono::steady_clock::now();
    const SpherePotential p = SpherePotential::constant(3, -5.0);
    const AngularSpectrum s = angular_spectrum(p, 10);
    const CountReport rep = count_report(s, kEGrid, RadialPerturbation::zero(), 3);
    const double target = (std::sqrt(4.75) + 3.0 * std::sqrt(2.75)) / (2.0 * kPi);
    const double rel = std::abs(rep.fit.slope / target - 1.0);
    const double elapsed = seconds_since(t0);
    report(1, "constant-potential slope within 3% of the Theorem 1 value",
           rel < 0.03 && elapsed < 120.0,
           "slope=" + std::to_string(rep.fit.slope) + " target=" + std::to_string(target) +
               " rel=" + std::to_string(rel) + " time=" + std::to_string(elapsed) + "s");
    report(2, "bounded remainder: max |fit residual| <= 3", rep.fit.max_abs_residual <= 3.0,
           "max_residual=" + std::to_string(rep.fit.max_abs_residual));
}

void criterion_3() {
    std::mt19937 rng(421);
    std::uniform_real_distribution<double> mu_dist(0.3, 30.0);
    std::uniform_real_distribution<double> logE_dist(-10.0, -2.0);
    std::uniform_real_distribution<double> c_dist(0.2, 5.0);
    std::uniform_real_distribution<double> p_dist(1.1, 3.0);
    int instances = 0, draws = 0, sign_ok = 0, sign_checked = 0, inertia_ok = 0;
    std::string first_bad;
    while (instances < 55 && draws < 150) {
        ++draws;
        const double mu = mu_dist(rng);
        const double E = std::pow(10.0, logE_dist(rng));
        const RadialPerturbation t =
            (draws % 2 == 1) ? RadialPerturbation::log_power(c_dist(rng), p_dist(rng),
                                                             draws % 4 == 1 ? +1 : -1)
                             : RadialPerturbation::zero();
        const QProfile q(mu, 3, E, t);
        const double r_max = q.turning_point() + 20.0;
        const PruferTrace trace = count_zeros(q, r_max);
        AngularMode m;
        m.mu = mu;
        classify_mode(m, 3);
        int inert = 0;
        try {
            inert = inertia_oracle(m, 3, E, t, std::exp(q.turning_point() + 12.0), 60000);
        } catch (const Error&) {
            continue;  // grid not converged (eigenvalue on the -E boundary)
        }
        ++instances;
        if (!trace.tail_zero_possible) {
            ++sign_checked;
            const int oracle = sign_change_oracle(q, r_max, 1e-3);
            if (trace.zero_count == oracle)
                ++sign_ok;
            else if (first_bad.empty())
                first_bad = "sign mismatch at mu=" + std::to_string(mu) +
                            " E=" + std::to_string(E) + ": " + std::to_string(trace.zero_count) +
                            " vs " + std::to_string(oracle);
        }
        if (std::abs(trace.zero_count - inert) <= 1)
            ++inertia_ok;
        else if (first_bad.empty())
            first_bad = "inertia mismatch at mu=" + std::to_string(mu) +
                        " E=" + std::to_string(E) + ": " + std::to_string(trace.zero_count) +
                        " vs " + std::to_string(inert);
    }
    report(3, "zero counts agree with both independent oracles",
           instances >= 50 && sign_ok == sign_checked && inertia_ok == instances,
           std::to_string(instances) + " instances, sign oracle " + std::to_string(sign_ok) + "/" +
               std::to_string(sign_checked) + ", inertia " + std::to_string(inertia_ok) + "/" +
               std::to_string(instances) + (first_bad.empty() ? "" : "; " + first_bad));
}

void criterion_4() {
    const std::vector<double> tame_grid{1e-4, 1e-6, 1e-8, 1e-10, 1e-12};
    const std::vector<int> tame =
        sharpness_experiment(RadialPerturbation::log_power(9.0, 2.5), tame_grid);
    bool constant = true;
    for (int n : tame) constant = constant && n == tame.front();
    const CounterexampleT T = build_counterexample_T(build_periodic_g());
    const std::vector<int> sharp = sharpness_experiment(T.perturbation(), {1e-3, 1e-5, 1e-7});
    const bool growing = sharp[0] < sharp[1] && sharp[1] < sharp[2];
    report(4, "decay-hypothesis sharpness: decaying tail flat, periodic tail growing",
           constant && growing,
           "log_power counts " + std::to_string(tame.front()) + ".." + std::to_string(tame.back()) +
               ", periodic counts " + std::to_string(sharp[0]) + "," + std::to_string(sharp[1]) +
               "," + std::to_string(sharp[2]));
}

void criteria_5_to_8() {
    const auto t0 = std::chrono::steady_clock::now();
    const InteriorModel model = InteriorModel::standard(kMuHalf);
    const EigenLadder lad = compute_ladder(model, 26);
    bool ratios_ok = true;
    double worst = 0.0;
    for (int n = 15; n <= 25; ++n) {
        const double r = lad.ratios[n - 1];
        worst = std::max(worst, std::abs(r - 2.0));
        ratios_ok = ratios_ok && std::abs(r - 2.0) <= 1e-4;
    }
    bool cauchy_ok = true;
    double prev_gap = 1e100;
    for (std::size_t i = 14; i + 1 < lad.a_estimates.size(); ++i) {
        const double gap = std::abs(lad.a_estimates[i + 1] - lad.a_estimates[i]) /
                           lad.a_estimates[i];
        cauchy_ok = cauchy_ok && gap <= prev_gap * (1.0 + 1e-9);
        prev_gap = gap;
    }
    const double elapsed = seconds_since(t0);
    report(5, "geometric ladder: ratios in 2 +- 1e-4 and Cauchy a-estimates",
           ratios_ok && cauchy_ok && elapsed < 300.0,
           "worst |ratio-2|=" + std::to_string(worst) + " time=" + std::to_string(elapsed) + "s");

    // 6: approximate eigenvalues against xi_n
    const ApproxContext ctx = make_approx_context(model);
    std::vector<double> lx, ly;
    bool decreasing = true;
    double prev_rel = 1e100;
    for (int n = 4; n <= 11; ++n) {
        const double lam = solve_approx_lambda(model, ctx, n);
        const double xi = predicted_xi(n, 0.0, ctx.C / 2.0, kMuHalf);  // C = 2(d-c), c folded in
        const double rel = std::abs(lam / xi - 1.0);
        decreasing = decreasing && rel < prev_rel;
        prev_rel = rel;
        const double rho = std::pow(lam, -0.5 + 0.1);
        lx.push_back(std::log(rho * std::sqrt(xi)));
        ly.push_back(std::log(rel));
    }
    const double slope6 = lsq_slope(lx, ly);
    report(6, "lambda_approx/xi_n - 1 decreasing with log-log slope >= 0.9",
           decreasing && slope6 >= 0.9,
           "slope=" + std::to_string(slope6) + " last_rel=" + std::to_string(prev_rel));

    // 7: residual scaling + spectral localization
    const EigenLadder lad12 = lad;  // reuse; lambdas 1..26 available
    std::vector<double> rx, ry;
    bool bracket_ok = true;
    std::string bracket_detail;
    for (int n = 4; n <= 9; ++n) {
        const double lam = solve_approx_lambda(model, ctx, n);
        const PhiFunction phi = build_phi(model, lam, 1);
        const ResidualNorm res = residual_norm(phi);
        rx.push_back(std::log(lam));
        ry.push_back(std::log(res.ratio));
        const SpectralInterval iv = localize_spectrum(phi);
        int inside = 0;
        for (double exact : lad12.lambda_n)
            if (iv.lo <= exact && exact <= iv.hi) ++inside;
        if (inside != 1) {
            bracket_ok = false;
            bracket_detail = " n=" + std::to_string(n) + " contains " + std::to_string(inside);
        }
    }
    const double slope7 = lsq_slope(rx, ry);
    report(7, "residual ratio log-log slope >= 0.5 and unique eigenvalue per interval",
           slope7 >= 0.5 && bracket_ok, "slope=" + std::to_string(slope7) + bracket_detail);

    // 8: localization with stabilized constants
    const LocalizationReport ref = localization(model, 14, lad.lambda_n[13], lad.sigma);
    bool mass_ok = true;
    double worst_mass = 1.0;
    for (int n = 10; n <= 14; ++n) {
        const double r_lo = ref.C_minus * std::pow(lad.sigma, -0.5 * n);
        const double r_hi = ref.C_plus * std::pow(lad.sigma, -0.5 * n);
        const double mass = annulus_mass(model, lad.lambda_n[n - 1], r_lo, r_hi);
        worst_mass = std::min(worst_mass, mass);
        mass_ok = mass_ok && mass >= 0.9;
    }
    report(8, "mass fraction >= 0.9 in the predicted annulus for n >= 10", mass_ok,
           "worst mass=" + std::to_string(worst_mass));
}

void criterion_9() {
    const HemisphereResult res = hemisphere_experiment(0.01, kEGrid, 32);
    bool odd_flat = true;
    for (int n : res.counts_odd) odd_flat = odd_flat && n == res.counts_odd.front();
    const bool even_grows = res.counts_even.back() > res.counts_even.front();
    report(9, "hemisphere lemma: even minimum < -1/4, odd >= -1/18; count contrast",
           res.lambda_min_even < -0.25 && res.lambda_min_odd >= -1.0 / 18.0 - 1e-6 && odd_flat &&
               even_grows,
           "lambda_min_even=" + std::to_string(res.lambda_min_even) +
               " lambda_min_odd=" + std::to_string(res.lambda_min_odd) + " even counts " +
               std::to_string(res.counts_even.front()) + "->" +
               std::to_string(res.counts_even.back()));
}

void criterion_10() {
    const AngularSpectrum s = angular_spectrum(SpherePotential::constant(3, 0.0), 12);
    double worst = 0.0;
    for (int l = 0; l <= 8; ++l)
        worst = std::max(worst, std::abs(s.modes[l].eigenvalue() - l * (l + 1.0)));
    report(10, "free-sphere eigenvalues match l(l+1) to 1e-8", worst <= 1e-8,
           "worst deviation=" + std::to_string(worst));
}

}  // namespace

int main() {
    criteria_1_2();
    criterion_3();
    criterion_4();
    criteria_5_to_8();
    criterion_9();
    criterion_10();
    if (failures) std::printf("%d criterion(s) FAILED\n", failures);
    else std::printf("all criteria passed\n");
    return failures == 0 ? 0 : 1;
}
