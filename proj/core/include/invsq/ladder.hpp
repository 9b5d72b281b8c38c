#pragma once

#include <string>
#include <vector>

#include "invsq/angular.hpp"
#include "invsq/exterior.hpp"
#include "invsq/piecewise.hpp"
#include "invsq/potential.hpp"

namespace invsq {

/// The d=3 separable model: V = f(r) P(omega) / r^2 + w(r), with f = 1 and
/// w = 0 for r >= r0. The optional angular shift W replaces the coupling by
/// mu_i f(r) - W (1 - f(r)), realizing interior eigenvalues nu_i = W when
/// f = 0 inside.
struct InteriorModel {
    double r0 = 1.0;
    PiecewisePoly f;  // coupling ramp, f(0) = 0 (with f', f'' = 0 there), f = 1 for r >= r0
    PiecewisePoly w;  // bounded radial offset, 0 for r >= r0
    bool has_w = false;
    double angular_shift = 0.0;
    SpherePotential p = SpherePotential::constant(3, 0.0);
    AngularSpectrum spectrum;

    /// Default test model: P = -mu1 constant, f the quintic smoothstep on
    /// [0, 1], w = 0, r0 = 1. mu1 = 1/4 + (2 pi / ln 2)^2 gives sigma = 1/2.
    static InteriorModel standard(double mu1, int basis_size = 12);

    double coupling(double r) const;  // mu-multiplier f(r)
    double offset(double r) const;    // w(r)
};

/// Regular solution of the mode radial equation
///   r^2 Y'' + 2 r Y' + (mu_i f(r) - W(1-f(r)) - r^2 (w(r) + lambda)) Y = 0
/// started from the Frobenius exponent at r -> 0.
struct InteriorSolution {
    AngularMode mode;
    double lambda = 0.0;
    std::vector<double> r;
    std::vector<double> Y;
    std::vector<double> Yp;
    std::vector<double> mass_from_zero;  // int_0^r Y^2 r^2 dr, stored scaling
    double r_start = 0.0;
    double log_scale = 0.0;
};

InteriorSolution interior_solution(const AngularMode& mode, double lambda,
                                   const InteriorModel& model, double r_hi,
                                   int points_per_decade = 48);

/// Phase constant of the lowest-mode zero mode: r^{1/2} Y_1(r; lambda=0)
/// equals A cos(tau_1 ln r + c) exactly for r >= r0; c from a cosine fit
/// over [r_lo, r_hi], canonical in [0, 2pi).
double phase_constant_c(const InteriorModel& model, double r_lo = 2.0, double r_hi = 20.0);

/// Exact eigenvalue by shooting: root of the Wronskian mismatch
///   F(lambda) = Y'(r0) X^lambda(r0) - Y(r0) (X^lambda)'(r0)
/// by bisection in ln(lambda) to relative tolerance 1e-12. Both solutions are
/// evaluated at the trial lambda. -lambda* is an eigenvalue of the model.
double match_eigenvalue(const InteriorModel& model, const AngularMode& mode, double lambda_lo,
                        double lambda_hi);

/// xi_n = exp((-2 pi n - C) / tau), C = 2 (d - c), tau = sqrt(mu1 - 1/4).
double predicted_xi(int n, double c, double d, double mu1);

struct EigenLadder {
    std::vector<double> lambda_n;     // descending; eigenvalues are -lambda_n
    std::vector<double> ratios;       // lambda_n / lambda_{n+1}
    double sigma = 0.0;               // exp(-2 pi / sqrt(mu1 - 1/4))
    std::vector<double> a_estimates;  // lambda_n / sigma^n
    std::vector<double> xi_n;
    double c = 0.0, d = 0.0;  // phase constants used
    int branch_k = 0;         // 2 pi k adjustment applied to C = 2(d - c)
    std::vector<std::string> warnings;
};

/// Ladder of the lowest angular mode: lambda_1..lambda_n_max from
/// match_eigenvalue on xi_n-centered brackets of half-width xi_n (1-sigma)/2.
/// Requires the lowest mode critical and simple; additional critical modes
/// violate the Theorem 2 hypothesis and are recorded as a warning (their own
/// ladders interleave but are not computed here).
EigenLadder compute_ladder(const InteriorModel& model, int n_max);

struct LocalizationReport {
    int n = 0;
    double lambda = 0.0;
    double mass_fraction = 0.0;   // inside [r_lo, r_hi]
    double r_lo = 0.0, r_hi = 0.0;
    double C_minus = 0.0, C_plus = 0.0;  // r_bounds * sigma^{n/2}
    double interior_fraction = 0.0;      // mass inside r <= r0
};

/// Annulus where the sliding-window envelope of the density X^2 s^2
/// (s = r sqrt(lambda)) exceeds envelope_threshold of its peak; window half-width pi/tau in
/// ln s. Reports the contained mass fraction of the full mode-1 eigenfunction.
LocalizationReport localization(const InteriorModel& model, int n, double lambda_n, double sigma,
                                double envelope_threshold = 0.02);

/// Mass fraction of the mode-1 eigenfunction at lambda_n inside [r_lo, r_hi].
double annulus_mass(const InteriorModel& model, double lambda_n, double r_lo, double r_hi);

}  // namespace invsq
