#pragma once

#include <vector>

#include "invsq/angular.hpp"

namespace invsq {

/// Decaying solution of the exterior mode equation
///   r^2 X'' + 2 r X' + (mu - r^2 lambda) X = 0   (d = 3)
/// obtained by inward integration from the asymptotic regime r*sqrt(lambda)
/// = 30, where X ~ r^{-1} e^{-r sqrt(lambda)}. Values are stored relative to
/// seed amplitude 1 at the seed radius; any rescaling applied to avoid
/// overflow is accumulated in log_scale (true X = stored X * e^{log_scale}).
struct ExteriorSolution {
    AngularMode mode;
    double lambda = 0.0;
    std::vector<double> r;
    std::vector<double> X;
    std::vector<double> Xp;
    std::vector<double> mass_to_seed;  // int_r^seed X^2 r^2 dr, stored scaling
    double tail_beyond_seed = 0.0;     // int_seed^inf of the same integrand
    double seed_r = 0.0;
    double log_scale = 0.0;

    /// mass_to_seed + tail at an arbitrary radius, by log-linear interpolation.
    double mass_beyond(double radius) const;
};

/// Evaluate the decaying solution on a geometric grid covering [r_lo, r_hi].
/// The seed radius is max(30/sqrt(lambda), r_hi).
ExteriorSolution evaluate_exterior(const AngularMode& mode, double lambda, double r_lo,
                                   double r_hi, int points_per_decade = 48);

/// X'(rho)/X(rho); errors when rho sits on a node of a critical-mode solution.
double log_derivative(const AngularMode& mode, double lambda, double rho);

/// L^2 tail mass int_rho^inf X^2 r^2 dr in the seed normalization (the
/// analytic tail beyond the seed radius is included).
double tail_mass(const AngularMode& mode, double lambda, double rho);

/// Phase constant of the small-argument oscillation
///   x^{1/2} X(x) -> A cos(tau ln x + d),  x = r sqrt(lambda) -> 0,
/// from a least-squares cosine fit over x in [x_lo, x_hi]. With
/// `from_derivative` the same constant is extracted from the fitted X'.
struct PhaseConstantD {
    double tau = 0.0;
    double d_value = 0.0;  // canonical in [0, 2pi)
    double amplitude = 0.0;
    double x_lo = 0.0, x_hi = 0.0;
    double fit_residual = 0.0;  // max deviation / amplitude
};

PhaseConstantD phase_constant_d(double tau, double x_lo = 1e-4, double x_hi = 1e-2,
                                bool from_derivative = false);

/// Least-squares fit y ~ A cos(tau ln x + d); returns (A, d in [0, 2pi),
/// max residual / A). Shared by the exterior and interior phase fits.
struct CosineFit {
    double amplitude = 0.0;
    double phase = 0.0;
    double residual = 0.0;
};

CosineFit fit_log_cosine(const std::vector<double>& x, const std::vector<double>& y, double tau);

}  // namespace invsq
