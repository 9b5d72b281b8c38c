#include "invsq/oscillation.hpp"

#include <algorithm>
#include <cmath>

#include "invsq/common.hpp"
#include "invsq/ode.hpp"

namespace invsq {

RadialPerturbation RadialPerturbation::zero() { return {}; }

RadialPerturbation RadialPerturbation::log_power(double c, double p, int sign) {
    if (c < 0) throw Error("log_power perturbation: C must be >= 0");
    if (p <= 0) throw Error("log_power perturbation: p must be > 0");
    if (sign != 1 && sign != -1) throw Error("perturbation sign must be +1 or -1");
    RadialPerturbation t;
    t.kind_ = Kind::LogPower;
    t.c_ = c;
    t.p_ = p;
    t.sign_ = sign;
    t.bound_ = c;  // attained at r = 1
    return t;
}

RadialPerturbation RadialPerturbation::tabulated(PiecewisePoly table, int sign, double log_period,
                                                 double period_factor) {
    if (sign != 1 && sign != -1) throw Error("perturbation sign must be +1 or -1");
    if (table.pieces().empty()) throw Error("tabulated perturbation: empty table");
    if (log_period > 0.0) {
        if (std::abs((table.hi() - table.lo()) - log_period) > 1e-12)
            throw Error("tabulated perturbation: table must cover exactly one log-period");
        if (std::abs(period_factor) >= 1.0)
            throw Error("tabulated perturbation: periodic extension must decay (|factor| < 1)");
        if (std::abs(table.value(table.hi()) - period_factor * table.value(table.lo())) >
            1e-10 * std::max(1.0, std::abs(table.value(table.lo()))))
            throw Error("tabulated perturbation: table endpoints violate the periodic scaling");
    }
    // Continuity across pieces (the type requires a continuous T).
    const auto& pieces = table.pieces();
    for (std::size_t i = 1; i < pieces.size(); ++i) {
        double left = 0.0;
        for (int k = 5; k >= 0; --k) left = left + pieces[i - 1].c[static_cast<std::size_t>(k)];
        if (std::abs(left - pieces[i].c[0]) > 1e-9 * std::max(1.0, std::abs(left)))
            throw Error("tabulated perturbation: discontinuity at piece boundary");
    }
    RadialPerturbation t;
    t.kind_ = Kind::Tabulated;
    t.sign_ = sign;
    t.table_ = std::move(table);
    t.log_period_ = log_period;
    t.factor_ = period_factor;
    double m = 0.0;
    for (const auto& piece : t.table_.pieces())
        for (int k = 0; k <= 256; ++k)
            m = std::max(m, std::abs(t.table_.value(piece.lo + (piece.hi - piece.lo) * k / 256.0)));
    t.bound_ = m;
    return t;
}

RadialPerturbation RadialPerturbation::callable(std::function<double(double)> t_of_log_r,
                                                double lo, double sup_bound, int sign) {
    if (!t_of_log_r) throw Error("callable perturbation: empty function");
    if (sign != 1 && sign != -1) throw Error("perturbation sign must be +1 or -1");
    if (!(sup_bound >= 0.0)) throw Error("callable perturbation: bound must be >= 0");
    RadialPerturbation t;
    t.kind_ = Kind::Callable;
    t.sign_ = sign;
    t.fn_ = std::move(t_of_log_r);
    t.fn_lo_ = lo;
    t.bound_ = sup_bound;
    return t;
}

double RadialPerturbation::at_log(double u) const {
    switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::Callable:
            return u < fn_lo_ ? 0.0 : sign_ * fn_(u);
        case Kind::LogPower:
            // t(r) = C (1 + log r)^{-p}, log r = u >= 0.
            return sign_ * c_ * std::pow(1.0 + std::max(0.0, u), -p_);
        case Kind::Tabulated: {
            const double lo = table_.lo();
            if (u < lo) return 0.0;
            if (log_period_ > 0.0) {
                const double k = std::floor((u - lo) / log_period_);
                return sign_ * std::pow(factor_, k) * table_.value(u - k * log_period_);
            }
            if (u > table_.hi()) return 0.0;
            return sign_ * table_.value(u);
        }
    }
    return 0.0;
}

double RadialPerturbation::bound() const { return bound_; }

void RadialPerturbation::require_decay(double min_power) const {
    if (kind_ == Kind::LogPower && p_ <= min_power)
        throw Error("perturbation decays too slowly: need (1+log r)^{-p} with p > " +
                    std::to_string(min_power));
}

QProfile::QProfile(double mu, int d, double E, RadialPerturbation t)
    : mu_(mu), d_(d), E_(E), t_(std::move(t)), kappa_(mu - critical_coupling(d)) {
    if (d < 3) throw Error("QProfile: dimension must be >= 3");
    if (E <= 0.0) throw Error("QProfile: E must be > 0");
}

double QProfile::operator()(double r) const { return kappa_ - E_ * std::exp(2.0 * r) + t_.at_log(r); }

double QProfile::turning_point() const {
    const double top = kappa_ + t_.bound();
    if (top <= 0.0 && (*this)(0.0) < 0.0) return 0.0;
    // Beyond hi the envelope term dominates and Q stays negative.
    const double hi = std::max(0.5, 0.5 * std::log((std::max(top, 0.0) + 1.0) / E_));
    const double step = 0.25;
    for (double r = hi; r > 0.0; r -= step) {
        const double r_lo = std::max(0.0, r - step);
        if ((*this)(r_lo) >= 0.0 || (*this)(r) >= 0.0) {
            double a = r_lo, b = r;
            if ((*this)(b) >= 0.0) return b;  // only possible at b = hi edge effects
            for (int it = 0; it < 80; ++it) {
                const double m = 0.5 * (a + b);
                ((*this)(m) >= 0.0 ? a : b) = m;
            }
            return 0.5 * (a + b);
        }
    }
    return 0.0;
}

QProfile make_q_profile(const AngularMode& mode, int d, double E, const RadialPerturbation& t) {
    return QProfile(mode.mu, d, E, t);
}

PruferTrace count_zeros(const QProfile& q, double r_max, double integrator_tolerance) {
    if (r_max <= 0.0) throw Error("count_zeros: r_max must be > 0");
    OdeOptions opt;
    opt.rel_tol = integrator_tolerance;
    opt.abs_tol = integrator_tolerance * 1e-2;
    opt.max_step = 0.25;

    auto sys = [&q](double r, const StateN<1>& y, StateN<1>& dy) {
        const double c = std::cos(y[0]), s = std::sin(y[0]);
        dy[0] = -(q(r) * c * c + s * s);
    };

    PruferTrace trace;
    const double dt = 0.25;
    double r = 0.0;
    StateN<1> y{kPi / 2.0};
    trace.theta_samples.emplace_back(r, y[0]);
    double held_since = 0.0;  // start of the current Q < -1 stretch
    if (q(0.0) >= -1.0) held_since = 0.0;

    bool plateau = false;
    bool capture_ambiguous = false;
    // Beyond the turning region the equation is stiff (|dtheta'/dtheta| ~
    // sqrt(-Q)); once Q < -q_cap permanently, theta is slaved to the
    // equilibria and the at-most-one remaining crossing is decided by
    // position, so integration can stop there.
    const double q_cap = 1e6;
    while (r < r_max) {
        const double r_next = std::min(r + dt, r_max);
        y = ode_integrate<1>(sys, y, r, r_next, opt);
        r = r_next;
        trace.theta_samples.emplace_back(r, y[0]);
        const double Q = q(r);
        if (Q >= -1.0) held_since = r;
        if (Q <= -q_cap &&
            q.energy() * std::exp(2.0 * r) >= q.kappa() + q.perturbation().bound() + q_cap) {
            // Levels are pi/2 - k pi. theta crosses the level just below it
            // iff it sits inside the repulsion strip of half-width
            // delta = atan(1/sqrt(-Q)) above that level; otherwise it
            // converges upward to the stable equilibrium below the next
            // level. Both outcomes leave theta a full pi minus delta above
            // the next crossing, so no tail zero remains.
            const double p = (kPi / 2.0 - y[0]) / kPi;
            const double level = kPi / 2.0 - std::ceil(p - 1e-12) * kPi;
            const double dist = y[0] - level;
            const double delta = std::atan(1.0 / std::sqrt(-Q));
            if (dist < delta * 0.95)
                y[0] = level - delta;  // pending crossing happens
            else if (dist > delta * 1.05)
                y[0] = level + kPi - delta;  // captured without crossing
            else
                capture_ambiguous = true;  // borderline: count stays a lower bound
            plateau = true;
            break;
        }
        if (r - held_since >= 5.0 && trace.theta_samples.size() > 4) {
            const double theta_back = trace.theta_samples[trace.theta_samples.size() - 5].second;
            if (std::abs(y[0] - theta_back) < 1e-8) {
                plateau = true;
                break;
            }
        }
    }

    trace.r_end = r;
    trace.theta_end = y[0];
    trace.terminated_by = plateau ? PruferTrace::Stop::PhasePlateau : PruferTrace::Stop::RMax;
    if (!plateau && trace.theta_samples.size() > 4) {
        const double theta_back = trace.theta_samples[trace.theta_samples.size() - 5].second;
        if (std::abs(y[0] - theta_back) >= 1e-8)
            trace.warning = "r_max reached with the phase still advancing; count is a lower bound";
    }

    // Crossing levels are pi/2 - k*pi; theta descends through each exactly once.
    const double progress = (kPi / 2.0 - y[0]) / kPi;
    trace.zero_count = std::max(0, static_cast<int>(std::floor(progress + 1e-12)));
    const double pending = (std::ceil(progress - 1e-12) - progress) * kPi;
    trace.tail_zero_possible = pending < 1e-3 || capture_ambiguous;
    return trace;
}

int sign_change_oracle(const QProfile& q, double r_max, double step) {
    if (step <= 0.0 || r_max <= 0.0) throw Error("sign_change_oracle: bad step or range");
    const long n = std::lround(std::ceil(r_max / step));
    const double h = r_max / static_cast<double>(n);
    double g = 0.0, dg = 1.0, r = 0.0;
    int changes = 0;
    int prev_sign = 0;
    auto f = [&q](double rr, double gg) { return -q(rr) * gg; };
    for (long i = 0; i < n; ++i) {
        // Classical RK4 on (g, g').
        const double k1g = dg, k1d = f(r, g);
        const double k2g = dg + 0.5 * h * k1d, k2d = f(r + 0.5 * h, g + 0.5 * h * k1g);
        const double k3g = dg + 0.5 * h * k2d, k3d = f(r + 0.5 * h, g + 0.5 * h * k2g);
        const double k4g = dg + h * k3d, k4d = f(r + h, g + h * k3g);
        g += h / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
        dg += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        r += h;
        const double scale = std::max(std::abs(g), std::abs(dg));
        if (scale > 1e100) {
            g /= scale;
            dg /= scale;
        }
        const int s = g > 0.0 ? 1 : (g < 0.0 ? -1 : 0);
        if (s != 0) {
            if (prev_sign != 0 && s != prev_sign) ++changes;
            prev_sign = s;
        }
    }
    return changes;
}

namespace {

// Negative-eigenvalue count of a symmetric tridiagonal matrix by LDL^T pivots.
int tridiagonal_inertia(const std::vector<double>& diag, double off) {
    int negatives = 0;
    double piv = 0.0;
    const double off2 = off * off;
    for (std::size_t i = 0; i < diag.size(); ++i) {
        piv = diag[i] - (i == 0 ? 0.0 : off2 / piv);
        if (piv == 0.0) piv = -1e-300;  // treat an exact zero pivot as a crossing
        if (piv < 0.0) ++negatives;
    }
    return negatives;
}

int inertia_count_once(double kappa, const RadialPerturbation& t, double E, double u_max, int n) {
    const double h = u_max / (n + 1);
    std::vector<double> diag(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double u = h * (i + 1);
        // -g'' - (kappa + t(e^u)) g + E e^{2u} g, Dirichlet at u = 0 and u_max.
        diag[static_cast<std::size_t>(i)] =
            2.0 / (h * h) - (kappa + t.at_log(u)) + E * std::exp(2.0 * u);
    }
    return tridiagonal_inertia(diag, -1.0 / (h * h));
}

}  // namespace

int inertia_oracle(const AngularMode& mode, int d, double E, const RadialPerturbation& t,
                   double r_max, int n_grid) {
    if (r_max <= 1.0) throw Error("inertia_oracle: R_max must exceed 1");
    if (n_grid < 16) throw Error("inertia_oracle: grid too small");
    const double kappa = mode.mu - critical_coupling(d);
    const double u_max = std::log(r_max);
    const double h = u_max / (n_grid + 1);
    const int count = inertia_count_once(kappa, t, E, u_max, n_grid);
    // Same mesh width on the doubled domain; a converged count must not move.
    const double u_big = std::log(2.0 * r_max);
    const int n_big = static_cast<int>(std::lround(u_big / h)) - 1;
    const int count_big = inertia_count_once(kappa, t, E, u_big, n_big);
    if (count_big != count)
        throw Error("inertia_oracle: R_max too small (count changes when R_max doubles)");
    return count;
}

double predicted_count(const std::vector<AngularMode>& modes, double E, int d) {
    if (E <= 0.0) throw Error("predicted_count: E must be > 0");
    double sum = 0.0;
    for (const AngularMode& m : modes) {
        AngularMode mode = m;
        classify_mode(mode, d);
        if (!mode.critical)
            throw Error("predicted_count: mode with mu = " + std::to_string(m.mu) +
                        " is not critical");
        sum += mode.multiplicity * mode.tau;
    }
    return std::log(1.0 / E) / (2.0 * kPi) * sum;
}

BoundStateCount count_bound_states(const AngularSpectrum& spectrum, double E,
                                   const RadialPerturbation& t, int d, bool exhaustive) {
    if (E <= 0.0) throw Error("count_bound_states: E must be > 0");
    BoundStateCount out;
    for (const AngularMode& mode : spectrum.modes) {
        if (!mode.critical && !exhaustive) continue;
        const QProfile q = make_q_profile(mode, d, E, t);
        const double r_max = q.turning_point() + 20.0;
        const PruferTrace trace = count_zeros(q, r_max);
        ModeCount mc;
        mc.mode_index = mode.index;
        mc.mu = mode.mu;
        mc.multiplicity = mode.multiplicity;
        mc.critical = mode.critical;
        mc.count = trace.zero_count;
        mc.tail_zero_possible = trace.tail_zero_possible;
        out.per_mode.push_back(mc);
        out.total += mode.multiplicity * trace.zero_count;
    }
    return out;
}

CountReport count_report(const AngularSpectrum& spectrum, const std::vector<double>& E_grid,
                         const RadialPerturbation& t, int d, bool exhaustive) {
    CountReport report;
    report.E_grid = E_grid;
    std::vector<AngularMode> critical = critical_modes(spectrum, d);
    for (double E : E_grid) {
        const BoundStateCount c = count_bound_states(spectrum, E, t, d, exhaustive);
        if (report.mode_info.empty()) report.mode_info = c.per_mode;
        std::vector<int> row;
        row.reserve(c.per_mode.size());
        for (const ModeCount& mc : c.per_mode) row.push_back(mc.count);
        report.per_mode_counts.push_back(std::move(row));
        report.totals.push_back(c.total);
        report.predicted.push_back(critical.empty() ? 0.0 : predicted_count(critical, E, d));
    }
    if (E_grid.size() >= 5) {
        std::vector<double> totals(report.totals.begin(), report.totals.end());
        double lo = *std::min_element(E_grid.begin(), E_grid.end());
        double hi = *std::max_element(E_grid.begin(), E_grid.end());
        if (std::log(hi / lo) >= 6.0 * std::log(10.0) - 1e-9)
            report.fit = slope_fit(E_grid, totals);
    }
    return report;
}

SlopeFit slope_fit(const std::vector<double>& E_grid, const std::vector<double>& totals) {
    if (E_grid.size() != totals.size()) throw Error("slope_fit: size mismatch");
    if (E_grid.size() < 5) throw Error("slope_fit: need at least 5 grid points");
    double lo = *std::min_element(E_grid.begin(), E_grid.end());
    double hi = *std::max_element(E_grid.begin(), E_grid.end());
    if (!(lo > 0.0) || std::log(hi / lo) < 6.0 * std::log(10.0) - 1e-9)
        throw Error("slope_fit: E grid must span at least 6 decades");
    const std::size_t n = E_grid.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(1.0 / E_grid[i]);
        sx += x;
        sy += totals[i];
        sxx += x * x;
        sxy += x * totals[i];
    }
    SlopeFit fit;
    const double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(1.0 / E_grid[i]);
        fit.max_abs_residual =
            std::max(fit.max_abs_residual, std::abs(totals[i] - fit.slope * x - fit.intercept));
    }
    return fit;
}

}  // namespace invsq
