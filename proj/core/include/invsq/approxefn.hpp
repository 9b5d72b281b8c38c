#pragma once

#include <string>
#include <vector>

#include "invsq/ladder.hpp"
#include "invsq/piecewise.hpp"

namespace invsq {

/// Smoothing bump h: h(t) = t - 1 on [1, 1.5], joined C^2 to 0 at t = 2,
/// supported on [1, 2].
PiecewisePoly make_smoothing();
double smoothing_value(const PiecewisePoly& h, double t);   // 0 outside [1, 2]
double smoothing_deriv(const PiecewisePoly& h, double t);
double smoothing_second(const PiecewisePoly& h, double t);

/// Phase data shared by the approximate-eigenfunction construction: the
/// interior zero-mode amplitude/phase (exact beyond r0, where the mode
/// equation has the pure r^{-1/2} cos(tau ln r + c) solution), the exterior
/// phase constant d, and the branch-adjusted C = 2(d - c) anchoring xi_n.
struct ApproxContext {
    double tau = 0.0;
    double sigma = 0.0;
    double c = 0.0;
    double d = 0.0;
    double C = 0.0;  // branch-adjusted
    int branch_k = 0;
    double amp_Y = 0.0;         // amplitude of r^{1/2} Y_1(r; 0) beyond r0
    double mass_inside_r0 = 0;  // int_0^{r0} Y_1^2 r^2 dr at lambda = 0
};

ApproxContext make_approx_context(const InteriorModel& model);

/// Approximate eigenvalue of rung n: root of the mode-1 matching function
/// G(lambda) = (X_1^lambda)'(rho) Y_1(rho) - Y_1'(rho) X_1^lambda(rho) with
/// the interior frozen at lambda = 0 and rho = lambda^{-1/2+delta/2} made
/// self-consistent by two fixed-point passes.
double solve_approx_lambda(const InteriorModel& model, const ApproxContext& ctx, int n,
                           double delta = 0.2);

struct PhiMode {
    AngularMode mode;
    double psi = 1.0;  // interior coefficient
    double phi = 0.0;  // Y_i(rho) / X_i^lambda(rho)
    double chi = 0.0;  // rho (Y_i'(rho) - phi (X_i^lambda)'(rho))
};

/// Truncated approximate eigenfunction: interior lambda=0 zero-mode pieces on
/// the ball r <= rho (mode 1 regular at 0; modes i >= 2 the decaying branch
/// psi_i r^{alpha_i}, defined for r >= r0), exterior phi_i X_i^lambda +
/// chi_i h(r/rho) per mode. The i=1 bump is omitted (chi_1 vanishes at the
/// matched lambda). All norms are squared L^2 quantities.
struct PhiFunction {
    double lambda = 0.0;
    double rho = 0.0;
    double delta = 0.0;
    std::vector<PhiMode> modes;
    double interior_mass = 0.0;      // ||Psi||^2 on the ball
    double norm2 = 0.0;              // ||Phi||^2
    double nonprincipal_norm2 = 0.0;  // exterior ||Phi - phi_1 X_1 J_1||^2
    double bump_defect2 = 0.0;       // sum_i int ((L+lambda)(chi_i h J_i))^2
    double value_mismatch = 0.0;     // relative C^0 defect at rho, worst mode
    double deriv_mismatch = 0.0;     // relative C^1 defect at rho, worst mode
    std::vector<std::string> warnings;
};

/// psi defaults to all ones; extra entries beyond mode_cut are ignored.
PhiFunction build_phi(const InteriorModel& model, double lambda, int mode_cut,
                      double delta = 0.2, const std::vector<double>& psi = {});

/// ||(L+lambda) Phi||_2 and the relative residual ||(L+lambda)Phi|| / ||Phi||.
/// The interior contribution is exactly lambda^2 ||Psi||^2 (L Psi = 0 there);
/// the bump region contributes the mode ODE defect of chi_i h(r/rho).
struct ResidualNorm {
    double num = 0.0;
    double ratio = 0.0;
};

ResidualNorm residual_norm(const PhiFunction& phi);

/// Interval [lambda - ratio, lambda + ratio] guaranteed to intersect the
/// model's spectrum (in the -lambda convention of the ladder).
struct SpectralInterval {
    double lo = 0.0, hi = 0.0;
};

SpectralInterval localize_spectrum(const PhiFunction& phi);

}  // namespace invsq
