#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "invsq/angular.hpp"
#include "invsq/piecewise.hpp"

namespace invsq {

/// Radial tail term t(r) of the envelope potentials P(omega)/r^2 +- t(r).
/// log_power means t(r) = C (1 + log r)^{-p} for r >= 1; tabulated supplies
/// T(u) = t(e^u) directly as a piecewise polynomial of the log variable u,
/// optionally extended log-periodically: T(u + period) = factor * T(u).
class RadialPerturbation {
  public:
    enum class Kind { Zero, LogPower, Tabulated, Callable };

    static RadialPerturbation zero();
    static RadialPerturbation log_power(double c, double p, int sign = +1);
    static RadialPerturbation tabulated(PiecewisePoly t_of_log_r, int sign = +1,
                                        double log_period = 0.0, double period_factor = 1.0);
    /// Arbitrary T(u) = t(e^u) for u >= lo (0 below); the caller supplies
    /// sup |T|, which the envelope bound and turning-point search rely on.
    static RadialPerturbation callable(std::function<double(double)> t_of_log_r, double lo,
                                       double sup_bound, int sign = +1);

    Kind kind() const { return kind_; }
    int sign() const { return sign_; }
    double coefficient() const { return c_; }
    double power() const { return p_; }
    double log_period() const { return log_period_; }
    double period_factor() const { return factor_; }

    /// t(e^u) with the envelope sign applied; u >= 0. Tabulated kinds return 0
    /// below the table and, without a periodic extension, above it.
    double at_log(double u) const;
    /// sup |t| over r >= 1.
    double bound() const;
    /// Require the decay hypothesis: p > 1 (hypothesis i) or p > 2 (hypothesis ii).
    void require_decay(double min_power) const;

  private:
    RadialPerturbation() = default;
    Kind kind_ = Kind::Zero;
    double c_ = 0.0;
    double p_ = 0.0;
    int sign_ = +1;
    PiecewisePoly table_;
    std::function<double(double)> fn_;
    double fn_lo_ = 0.0;
    double log_period_ = 0.0;
    double factor_ = 1.0;
    double bound_ = 0.0;
};

/// Coefficient of the transformed radial equation g'' + Q g = 0 on the log
/// scale: Q(r) = mu - (d-2)^2/4 - E e^{2r} + t(e^r) for r >= 0.
class QProfile {
  public:
    QProfile(double mu, int d, double E, RadialPerturbation t);

    double operator()(double r) const;
    double mu() const { return mu_; }
    int dimension() const { return d_; }
    double energy() const { return E_; }
    const RadialPerturbation& perturbation() const { return t_; }
    /// mu - (d-2)^2/4, the r-independent part without the tail term.
    double kappa() const { return kappa_; }
    /// Largest r with Q(r) = 0 (0 if Q < 0 on all of [0, inf)).
    double turning_point() const;

  private:
    double mu_;
    int d_;
    double E_;
    RadialPerturbation t_;
    double kappa_;
};

QProfile make_q_profile(const AngularMode& mode, int d, double E, const RadialPerturbation& t);

/// Record of one Prufer phase integration. zero_count is the number of
/// downward crossings of theta through pi/2 mod pi; theta' = -1 exactly at
/// those levels, so crossings are monotone and the count follows from
/// theta(r_end).
struct PruferTrace {
    int zero_count = 0;
    std::vector<std::pair<double, double>> theta_samples;  // (r, theta)
    double r_end = 0.0;
    double theta_end = 0.0;
    enum class Stop { PhasePlateau, RMax } terminated_by = Stop::PhasePlateau;
    bool tail_zero_possible = false;  // theta within 1e-3 above the next crossing level
    std::string warning;              // set when r_max hit with theta still advancing
};

/// Integrate theta' = -(Q cos^2 theta + sin^2 theta), theta(0) = pi/2
/// (encodes g(0) = 0, i.e. X(1) = 0), and count zeros of g on (0, r_end].
/// Stops early once Q < -1 has held for 5 units of r and theta has moved
/// less than 1e-8 over the last unit.
PruferTrace count_zeros(const QProfile& q, double r_max, double integrator_tolerance = 1e-10);

/// Brute-force check: fixed-step integration of g'' = -Q g, g(0)=0, g'(0)=1,
/// counting strict sign changes of g at the step points. Rescales when the
/// solution grows toward the overflow threshold. Must equal
/// count_zeros().zero_count whenever tail_zero_possible is false.
int sign_change_oracle(const QProfile& q, double r_max, double step);

/// Second check: eigenvalues below -E of the Dirichlet finite-difference
/// discretization of the mode operator on 1 <= r <= R_max, counted by
/// tridiagonal LDL^T inertia on the log grid. Errors if the count changes
/// when R_max is doubled.
int inertia_oracle(const AngularMode& mode, int d, double E, const RadialPerturbation& t,
                   double r_max, int n_grid);

/// Leading term of the counting law: (ln(1/E)/2pi) * sum multiplicity_i tau_i.
/// All modes must be critical.
double predicted_count(const std::vector<AngularMode>& modes, double E, int d);

struct ModeCount {
    int mode_index = 0;
    double mu = 0.0;
    int multiplicity = 1;
    bool critical = false;
    int count = 0;  // per copy of the mode
    bool tail_zero_possible = false;
};

struct BoundStateCount {
    int total = 0;  // sum of multiplicity * count over counted modes
    std::vector<ModeCount> per_mode;
};

/// Total bound-state count below -E. Critical modes only by default;
/// non-critical modes have bounded counts and enter only with `exhaustive`,
/// so the default total carries an O(1) offset from the true value.
BoundStateCount count_bound_states(const AngularSpectrum& spectrum, double E,
                                   const RadialPerturbation& t, int d, bool exhaustive = false);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_abs_residual = 0.0;
};

struct CountReport {
    std::vector<double> E_grid;
    std::vector<std::vector<int>> per_mode_counts;  // [E index][mode]
    std::vector<ModeCount> mode_info;               // mode metadata, shared across E
    std::vector<int> totals;
    std::vector<double> predicted;
    SlopeFit fit;
};

CountReport count_report(const AngularSpectrum& spectrum, const std::vector<double>& E_grid,
                         const RadialPerturbation& t, int d, bool exhaustive = false);

/// Least-squares line of totals against ln(1/E). Requires >= 5 grid points
/// spanning >= 6 decades.
SlopeFit slope_fit(const std::vector<double>& E_grid, const std::vector<double>& totals);

}  // namespace invsq
