#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "invsq/potential.hpp"

namespace invsq {

/// One eigenpair of Delta_{S^{d-1}} + P. The operator eigenvalue is -mu, so
/// larger mu means deeper. Indicial exponents alpha, beta solve
/// s^2 + (d-2)s + mu = 0; the mode is critical when mu > (d-2)^2/4.
struct AngularMode {
    int index = 1;  // 1-based, ascending operator eigenvalue
    double mu = 0.0;
    int multiplicity = 1;
    std::complex<double> alpha{0.0, 0.0};
    std::complex<double> beta{0.0, 0.0};
    bool critical = false;
    bool borderline = false;       // |mu - (d-2)^2/4| below threshold
    bool near_degenerate = false;  // close to a neighbour but not merged
    double tau = 0.0;              // sqrt(mu - (d-2)^2/4) when critical

    double eigenvalue() const { return -mu; }
};

struct AngularSpectrum {
    int dimension = 3;
    int basis_size = 0;              // number of l values in the basis (l = 0..basis_size-1)
    double galerkin_residual = 0.0;  // largest eigenpair residual norm
    std::vector<AngularMode> modes;  // ascending operator eigenvalue
};

/// Dense symmetric Galerkin matrix of Delta_{S^2} + P in the real
/// spherical-harmonic basis (degree l < basis_size, all orders m).
/// Entries are computed by Gauss-Legendre quadrature in cos(theta); the
/// node count is at least 4*basis_size and is validated by doubling.
Eigen::MatrixXd build_angular_operator(const SpherePotential& p, int basis_size);

/// Eigendecomposition of a matrix produced by build_angular_operator,
/// with multiplicities merged at relative tolerance `degeneracy_tol`.
AngularSpectrum angular_eigenvalues(const Eigen::MatrixXd& matrix, int dimension,
                                    double degeneracy_tol = 1e-8);

/// Convenience path: closed form for constant P (any d >= 3), per-azimuthal
/// blocks for axisymmetric P on S^2. Equals the dense route within tolerance.
AngularSpectrum angular_spectrum(const SpherePotential& p, int basis_size,
                                 double degeneracy_tol = 1e-8);

/// Critical modes (mu > (d-2)^2/4), exponents and tau filled. Borderline
/// eigenvalues are excluded and, when `hypothesis_i` is set, raise an error:
/// hypothesis (i) requires the threshold not to be an eigenvalue.
std::vector<AngularMode> critical_modes(const AngularSpectrum& spectrum, int d,
                                        bool hypothesis_i = false);

/// Fill alpha/beta/tau/criticality of a mode for dimension d.
void classify_mode(AngularMode& mode, int d, double borderline_tol = 1e-9);

/// One azimuthal block of the axisymmetric S^2 problem, with eigenvectors
/// (used by the parity diagnostics and tests).
struct AzimuthalBlock {
    int m = 0;
    std::vector<int> ls;  // degree of each basis row
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
    double residual = 0.0;
};

std::vector<AzimuthalBlock> solve_axisymmetric_blocks(const SpherePotential& p, int basis_size);

/// Normalized associated Legendre values Theta_{l,m}(x) for l = m..l_max,
/// with int_{-1}^{1} Theta^2 dx = 1.
std::vector<double> normalized_legendre(int l_max, int m, double x);

}  // namespace invsq
