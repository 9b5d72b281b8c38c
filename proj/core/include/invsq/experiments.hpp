#pragma once

#include <vector>

#include "invsq/angular.hpp"
#include "invsq/oscillation.hpp"
#include "invsq/piecewise.hpp"
#include "invsq/potential.hpp"

namespace invsq {

/// Shape of the multiplicatively periodic comparison function g on [1, 4]:
/// g(1) = 1, g(2) = -1, g(4) = 1, strictly monotone between, linear (so
/// g'' = 0) on log-neighborhoods of its zeros z1 in (1,2) and z2 in (2,4),
/// and C^2 under the extension g(4t) = g(t), which forces g'(1) = 4 g'(4)
/// and g''(1) = 16 g''(4). With t = 1, 2, 4 all extrema, g'(1) = g'(2) =
/// g'(4) = 0, leaving the zero slopes and the curvatures at 2 and 4 free.
struct PeriodicGParams {
    double z1 = 1.5;
    double z2 = 3.5;
    double slope_z1 = -3.0;  // g' on the linear zone around z1
    double slope_z2 = 1.5;
    double curv_2 = 4.0;     // g''(2) >= 0 (minimum)
    double curv_4 = -4.0;    // g''(4) <= 0 (maximum); g''(1) = 16 g''(4)
    double halfwidth_log = 0.05;  // linear-zone half-width in ln t
};

struct PeriodicG {
    PeriodicGParams params;
    PiecewisePoly base;  // one period, t in [1, 4]
    double z1 = 0.0, z2 = 0.0;

    /// g and derivatives for any t >= 1 via the multiplicative extension.
    double value(double t) const;
    double deriv(double t) const;
    double second(double t) const;
};

/// Builds the piecewise-quintic g and verifies strict monotonicity on (1, 2)
/// and (2, 4) by dense sampling; errors list the violated condition.
PeriodicG build_periodic_g(const PeriodicGParams& params = {});

/// The sharpness tail T(t) = -g''(t)/g(t), satisfying T(4t) = T(t)/16 and
/// sup t^2 |T| < infinity. at_log exposes the log-scale coefficient
/// t^2 T(t) at t = e^u (0 for u < 0), which is ln(4)-periodic in u: bounded
/// but non-decaying, violating the (ln r)^{-2-eps} decay hypothesis.
struct CounterexampleT {
    PeriodicG g;
    double sup_t2_T = 0.0;  // attained within the first period

    double at_log(double u) const;
    RadialPerturbation perturbation() const;
};

CounterexampleT build_counterexample_T(const PeriodicG& g);

/// Zero counts at critical coupling (mu = (d-2)^2/4, so kappa = 0) with the
/// given tail, per E. The hypothesis-(ii) contrast replaces T by a
/// log_power(C, 2.5) tail, for which the counts stay bounded.
std::vector<int> sharpness_experiment(const RadialPerturbation& t,
                                      const std::vector<double>& E_grid, int d = 3);

struct HemisphereResult {
    double lambda_min_even = 0.0;
    double lambda_min_odd = 0.0;
    AngularSpectrum spectrum_even;
    AngularSpectrum spectrum_odd;
    std::vector<int> counts_even;  // totals per E, all modes
    std::vector<int> counts_odd;
    std::vector<double> predicted_even;  // leading-term law per E
};

/// Both hemisphere potentials through the angular + counting pipelines.
/// (The paper's phase-space remark: the even operator's phase-space volume
/// contains two disjoint copies of the odd one's; documented, not computed.)
HemisphereResult hemisphere_experiment(double epsilon, const std::vector<double>& E_grid,
                                       int basis_size = 32);

}  // namespace invsq
