#include "invsq/experiments.hpp"

#include <cmath>
#include <string>

#include "invsq/common.hpp"

namespace invsq {

namespace {

double fold_period(double t, int& k) {
    // t = tb * 4^k with tb in [1, 4).
    k = static_cast<int>(std::floor(std::log(t) / std::log(4.0)));
    double tb = t / std::pow(4.0, k);
    if (tb < 1.0) {
        tb *= 4.0;
        --k;
    } else if (tb >= 4.0) {
        tb /= 4.0;
        ++k;
    }
    return tb;
}

}  // namespace

double PeriodicG::value(double t) const {
    if (t < 1.0) throw Error("PeriodicG: defined for t >= 1");
    int k;
    const double tb = fold_period(t, k);
    return base.value(tb);
}

double PeriodicG::deriv(double t) const {
    int k;
    const double tb = fold_period(t, k);
    return base.deriv(tb) * std::pow(4.0, -k);
}

double PeriodicG::second(double t) const {
    int k;
    const double tb = fold_period(t, k);
    return base.second(tb) * std::pow(16.0, -k);
}

PeriodicG build_periodicg_unchecked(const PeriodicGParams& q) {
    const double w = q.halfwidth_log;
    const double a1 = q.z1 * std::exp(-w), b1 = q.z1 * std::exp(w);
    const double a2 = q.z2 * std::exp(-w), b2 = q.z2 * std::exp(w);
    PeriodicG g;
    g.params = q;
    g.z1 = q.z1;
    g.z2 = q.z2;
    // Extrema at t = 1, 2, 4 (slope 0); C^2 periodicity fixes g''(1) = 16 g''(4).
    g.base.append(PiecewisePoly::hermite(1.0, a1, 1.0, 0.0, 16.0 * q.curv_4,
                                         q.slope_z1 * (a1 - q.z1), q.slope_z1, 0.0));
    g.base.append(PiecewisePoly::linear(a1, b1, q.slope_z1 * (a1 - q.z1), q.slope_z1));
    g.base.append(PiecewisePoly::hermite(b1, 2.0, q.slope_z1 * (b1 - q.z1), q.slope_z1, 0.0, -1.0,
                                         0.0, q.curv_2));
    g.base.append(PiecewisePoly::hermite(2.0, a2, -1.0, 0.0, q.curv_2, q.slope_z2 * (a2 - q.z2),
                                         q.slope_z2, 0.0));
    g.base.append(PiecewisePoly::linear(a2, b2, q.slope_z2 * (a2 - q.z2), q.slope_z2));
    g.base.append(PiecewisePoly::hermite(b2, 4.0, q.slope_z2 * (b2 - q.z2), q.slope_z2, 0.0, 1.0,
                                         0.0, q.curv_4));
    return g;
}

PeriodicG build_periodic_g(const PeriodicGParams& q) {
    std::string bad;
    const double w = q.halfwidth_log;
    if (!(w > 0.0 && w < 0.2)) bad += " halfwidth_log outside (0, 0.2);";
    if (!(1.0 < q.z1 * std::exp(-w) && q.z1 * std::exp(w) < 2.0))
        bad += " z1 linear zone not inside (1, 2);";
    if (!(2.0 < q.z2 * std::exp(-w) && q.z2 * std::exp(w) < 4.0))
        bad += " z2 linear zone not inside (2, 4);";
    if (!(q.slope_z1 < 0.0)) bad += " slope_z1 must be negative;";
    if (!(q.slope_z2 > 0.0)) bad += " slope_z2 must be positive;";
    if (!(q.curv_2 >= 0.0)) bad += " curv_2 must be >= 0 (minimum at t = 2);";
    if (!(q.curv_4 <= 0.0)) bad += " curv_4 must be <= 0 (maximum at t = 4);";
    if (!bad.empty()) throw Error("build_periodic_g: infeasible shape parameters:" + bad);

    PeriodicG g = build_periodicg_unchecked(q);
    const int n = 4000;
    for (int i = 1; i < n; ++i) {
        const double t = 1.0 + i / static_cast<double>(n);
        if (g.base.deriv(t) > 1e-12)
            throw Error("build_periodic_g: g not monotone decreasing on (1,2) at t = " +
                        std::to_string(t));
    }
    for (int i = 1; i < n; ++i) {
        const double t = 2.0 + 2.0 * i / static_cast<double>(n);
        if (g.base.deriv(t) < -1e-12)
            throw Error("build_periodic_g: g not monotone increasing on (2,4) at t = " +
                        std::to_string(t));
    }
    return g;
}

namespace {

double T_base(const PeriodicG& g, double tb) {
    const double v = g.base.value(tb);
    // Near the zeros g is linear by construction, so T extends by 0.
    if (std::abs(v) < 1e-12) return 0.0;
    return -g.base.second(tb) / v;
}

// The radial equation on the log scale carries the tail as r^2 T(r); with
// T(4t) = T(t)/16 this coefficient is ln(4)-periodic in u, so the zero-energy
// solution oscillates forever and the counting function diverges.
double T_at_log(const PeriodicG& g, double u) {
    if (u < 0.0) return 0.0;
    const double ln4 = std::log(4.0);
    double ub = u - std::floor(u / ln4) * ln4;
    if (ub < 0.0) ub += ln4;
    const double tb = std::exp(ub);
    return tb * tb * T_base(g, tb);
}

}  // namespace

double CounterexampleT::at_log(double u) const { return T_at_log(g, u); }

RadialPerturbation CounterexampleT::perturbation() const {
    PeriodicG copy = g;
    return RadialPerturbation::callable([copy](double u) { return T_at_log(copy, u); }, 0.0,
                                        sup_t2_T);
}

CounterexampleT build_counterexample_T(const PeriodicG& g) {
    CounterexampleT out;
    out.g = g;
    for (int i = 0; i <= 20000; ++i) {
        const double t = 1.0 + 3.0 * i / 20000.0;
        if (std::abs(g.base.value(t)) < 0.05 && std::abs(g.base.second(t)) > 1e-9)
            throw Error("build_counterexample_T: g'' does not vanish near a zero of g");
        out.sup_t2_T = std::max(out.sup_t2_T, t * t * std::abs(T_base(g, t)));
    }
    return out;
}

std::vector<int> sharpness_experiment(const RadialPerturbation& t,
                                      const std::vector<double>& E_grid, int d) {
    std::vector<int> counts;
    for (double E : E_grid) {
        const QProfile q(critical_coupling(d), d, E, t);
        const PruferTrace trace = count_zeros(q, q.turning_point() + 20.0);
        counts.push_back(trace.zero_count);
    }
    return counts;
}

HemisphereResult hemisphere_experiment(double epsilon, const std::vector<double>& E_grid,
                                       int basis_size) {
    HemisphereResult res;
    const SpherePotential p_ev = SpherePotential::hemisphere(epsilon, Parity::Even);
    const SpherePotential p_odd = SpherePotential::hemisphere(epsilon, Parity::Odd);
    res.spectrum_even = angular_spectrum(p_ev, basis_size);
    res.spectrum_odd = angular_spectrum(p_odd, basis_size);
    res.lambda_min_even = res.spectrum_even.modes.front().eigenvalue();
    res.lambda_min_odd = res.spectrum_odd.modes.front().eigenvalue();
    const RadialPerturbation none = RadialPerturbation::zero();
    const std::vector<AngularMode> crit_ev = critical_modes(res.spectrum_even, 3);
    for (double E : E_grid) {
        res.counts_even.push_back(count_bound_states(res.spectrum_even, E, none, 3, true).total);
        res.counts_odd.push_back(count_bound_states(res.spectrum_odd, E, none, 3, true).total);
        res.predicted_even.push_back(crit_ev.empty() ? 0.0 : predicted_count(crit_ev, E, 3));
    }
    return res;
}

}  // namespace invsq
