#include "invsq/angular.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "invsq/common.hpp"
#include "invsq/quadrature.hpp"

namespace invsq {

std::vector<double> normalized_legendre(int l_max, int m, double x) {
    if (m < 0 || l_max < m) throw Error("normalized_legendre: need 0 <= m <= l_max");
    std::vector<double> theta(static_cast<std::size_t>(l_max - m + 1));
    // Seed Theta_{m,m}, built up from Theta_{0,0} = sqrt(1/2).
    double seed = std::sqrt(0.5);
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    for (int k = 1; k <= m; ++k) seed *= std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
    theta[0] = seed;
    if (l_max == m) return theta;
    theta[1] = x * std::sqrt(2.0 * m + 3.0) * seed;
    for (int l = m + 2; l <= l_max; ++l) {
        const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
        const double b = std::sqrt(((l - 1.0) * (l - 1.0) - static_cast<double>(m) * m) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
        theta[static_cast<std::size_t>(l - m)] =
            a * (x * theta[static_cast<std::size_t>(l - m - 1)] - b * theta[static_cast<std::size_t>(l - m - 2)]);
    }
    return theta;
}

namespace {

// <Theta_{l,m}, P Theta_{l',m}> for l, l' = m..l_max, by Gauss-Legendre in
// cos(theta), composited over the profile's breakpoints so each panel sees a
// smooth integrand.
Eigen::MatrixXd coupling_block(const SpherePotential& p, int m, int l_max, int nodes) {
    const int n = l_max - m + 1;
    const GaussRule& rule = gauss_legendre(nodes);
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
    std::vector<double> cuts{-1.0};
    {
        const std::vector<double> knots = p.theta_knots();
        for (auto it = knots.rbegin(); it != knots.rend(); ++it) cuts.push_back(std::cos(*it));
    }
    cuts.push_back(1.0);
    for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
        const double mid = 0.5 * (cuts[seg] + cuts[seg + 1]);
        const double half = 0.5 * (cuts[seg + 1] - cuts[seg]);
        if (half <= 0.0) continue;
        for (std::size_t q = 0; q < rule.x.size(); ++q) {
            const double x = mid + half * rule.x[q];
            const double pv = p(std::acos(std::clamp(x, -1.0, 1.0))) * rule.w[q] * half;
            if (pv == 0.0) continue;
            const std::vector<double> th = normalized_legendre(l_max, m, x);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j)
                    v(i, j) += pv * th[static_cast<std::size_t>(i)] * th[static_cast<std::size_t>(j)];
        }
    }
    return v.selfadjointView<Eigen::Upper>();
}

// Quadrature entries must be stable under node doubling, else the profile is
// under-resolved for this basis size.
Eigen::MatrixXd validated_block(const SpherePotential& p, int m, int l_max, int nodes) {
    Eigen::MatrixXd v = coupling_block(p, m, l_max, nodes);
    Eigen::MatrixXd v2 = coupling_block(p, m, l_max, 2 * nodes);
    const double diff = (v - v2).cwiseAbs().maxCoeff();
    if (diff > 1e-9 * std::max(1.0, p.bound()))
        throw Error("angular quadrature did not converge: profile too rough for basis size " +
                    std::to_string(l_max + 1));
    return v2;
}

int quad_nodes(int basis_size) { return std::max(4 * basis_size, 32); }

struct WeightedEval {
    double value;  // operator eigenvalue
    int weight;    // azimuthal multiplicity contribution
};

AngularSpectrum merge_spectrum(std::vector<WeightedEval> evals, int dimension, int basis_size,
                               double residual, double tol) {
    std::sort(evals.begin(), evals.end(),
              [](const WeightedEval& a, const WeightedEval& b) { return a.value < b.value; });
    AngularSpectrum spec;
    spec.dimension = dimension;
    spec.basis_size = basis_size;
    spec.galerkin_residual = residual;
    struct Group {
        double sum = 0.0;
        double anchor = 0.0;
        int mult = 0;
    };
    std::vector<Group> groups;
    for (const WeightedEval& e : evals) {
        const double scale = std::max(1.0, std::abs(e.value));
        if (!groups.empty() && std::abs(e.value - groups.back().anchor) <= tol * scale) {
            groups.back().sum += e.value * e.weight;
            groups.back().mult += e.weight;
        } else {
            groups.push_back({e.value * e.weight, e.value, e.weight});
        }
    }
    for (std::size_t i = 0; i < groups.size(); ++i) {
        AngularMode mode;
        mode.index = static_cast<int>(i) + 1;
        const double lam = groups[i].sum / groups[i].mult;
        mode.mu = -lam;
        mode.multiplicity = groups[i].mult;
        const double scale = std::max(1.0, std::abs(lam));
        const double gap_lo = i == 0 ? 1e30 : std::abs(lam - groups[i - 1].sum / groups[i - 1].mult);
        const double gap_hi =
            i + 1 == groups.size() ? 1e30 : std::abs(groups[i + 1].sum / groups[i + 1].mult - lam);
        mode.near_degenerate = std::min(gap_lo, gap_hi) < 1e-6 * scale;
        classify_mode(mode, dimension);
        spec.modes.push_back(mode);
    }
    return spec;
}

int harmonic_multiplicity(int l, int d) {
    // dim of degree-l spherical harmonics on S^{d-1}.
    auto choose = [](int n, int k) {
        double r = 1.0;
        for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / i;
        return static_cast<long long>(std::llround(r));
    };
    long long m = choose(l + d - 1, d - 1);
    if (l >= 2) m -= choose(l + d - 3, d - 1);
    return static_cast<int>(m);
}

}  // namespace

Eigen::MatrixXd build_angular_operator(const SpherePotential& p, int basis_size) {
    if (basis_size < 1) throw Error("build_angular_operator: basis_size must be >= 1");
    if (p.dimension() != 3)
        throw Error("build_angular_operator: dense Galerkin matrix is implemented for d = 3");
    const int L = basis_size;  // degrees l = 0..L-1
    const int n = L * L;       // full real-harmonic count
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    const int nodes = quad_nodes(basis_size);
    int offset = 0;
    // P depends only on theta, so the matrix is block diagonal over azimuthal
    // order m and over the cos/sin families; both families share one block.
    for (int m = 0; m < L; ++m) {
        const Eigen::MatrixXd v = validated_block(p, m, L - 1, nodes);
        const int bn = L - m;
        const int copies = m == 0 ? 1 : 2;
        for (int c = 0; c < copies; ++c) {
            for (int i = 0; i < bn; ++i) {
                const double l = m + i;
                a(offset + i, offset + i) = l * (l + 1.0);
                for (int j = 0; j < bn; ++j) a(offset + i, offset + j) += v(i, j);
            }
            offset += bn;
        }
    }
    return a;
}

AngularSpectrum angular_eigenvalues(const Eigen::MatrixXd& matrix, int dimension,
                                    double degeneracy_tol) {
    if (matrix.rows() != matrix.cols() || matrix.rows() < 1)
        throw Error("angular_eigenvalues: matrix must be square and nonempty");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix);
    if (solver.info() != Eigen::Success) throw Error("angular_eigenvalues: eigensolver failed");
    double residual = 0.0;
    for (int i = 0; i < matrix.rows(); ++i) {
        const Eigen::VectorXd r =
            matrix * solver.eigenvectors().col(i) - solver.eigenvalues()(i) * solver.eigenvectors().col(i);
        residual = std::max(residual, r.norm());
    }
    std::vector<WeightedEval> evals;
    evals.reserve(static_cast<std::size_t>(matrix.rows()));
    for (int i = 0; i < matrix.rows(); ++i) evals.push_back({solver.eigenvalues()(i), 1});
    const int basis_size = static_cast<int>(std::llround(std::sqrt(static_cast<double>(matrix.rows()))));
    return merge_spectrum(std::move(evals), dimension, basis_size, residual, degeneracy_tol);
}

std::vector<AzimuthalBlock> solve_axisymmetric_blocks(const SpherePotential& p, int basis_size) {
    if (basis_size < 1) throw Error("solve_axisymmetric_blocks: basis_size must be >= 1");
    if (p.dimension() != 3) throw Error("solve_axisymmetric_blocks: requires d = 3");
    const int L = basis_size;
    const int nodes = quad_nodes(basis_size);
    std::vector<AzimuthalBlock> blocks;
    for (int m = 0; m < L; ++m) {
        const int bn = L - m;
        Eigen::MatrixXd a = validated_block(p, m, L - 1, nodes);
        for (int i = 0; i < bn; ++i) {
            const double l = m + i;
            a(i, i) += l * (l + 1.0);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
        if (solver.info() != Eigen::Success)
            throw Error("solve_axisymmetric_blocks: eigensolver failed for m = " + std::to_string(m));
        AzimuthalBlock blk;
        blk.m = m;
        for (int i = 0; i < bn; ++i) blk.ls.push_back(m + i);
        blk.eigenvalues = solver.eigenvalues();
        blk.eigenvectors = solver.eigenvectors();
        for (int i = 0; i < bn; ++i) {
            const Eigen::VectorXd r =
                a * solver.eigenvectors().col(i) - solver.eigenvalues()(i) * solver.eigenvectors().col(i);
            blk.residual = std::max(blk.residual, r.norm());
        }
        blocks.push_back(std::move(blk));
    }
    return blocks;
}

AngularSpectrum angular_spectrum(const SpherePotential& p, int basis_size, double degeneracy_tol) {
    if (basis_size < 1) throw Error("angular_spectrum: basis_size must be >= 1");
    const int d = p.dimension();
    if (p.kind() == AngularKind::Constant) {
        std::vector<WeightedEval> evals;
        for (int l = 0; l < basis_size; ++l)
            evals.push_back({l * (l + d - 2.0) + p.constant_value(), harmonic_multiplicity(l, d)});
        return merge_spectrum(std::move(evals), d, basis_size, 0.0, degeneracy_tol);
    }
    const std::vector<AzimuthalBlock> blocks = solve_axisymmetric_blocks(p, basis_size);
    std::vector<WeightedEval> evals;
    double residual = 0.0;
    for (const AzimuthalBlock& blk : blocks) {
        residual = std::max(residual, blk.residual);
        const int weight = blk.m == 0 ? 1 : 2;  // cos and sin families coincide
        for (int i = 0; i < blk.eigenvalues.size(); ++i) evals.push_back({blk.eigenvalues(i), weight});
    }
    return merge_spectrum(std::move(evals), d, basis_size, residual, degeneracy_tol);
}

void classify_mode(AngularMode& mode, int d, double borderline_tol) {
    const double crit = critical_coupling(d);
    const double disc = (d - 2.0) * (d - 2.0) - 4.0 * mode.mu;  // discriminant of s^2+(d-2)s+mu
    mode.borderline = std::abs(mode.mu - crit) < borderline_tol;
    mode.critical = !mode.borderline && mode.mu > crit;
    if (mode.critical) {
        mode.tau = std::sqrt(mode.mu - crit);
        mode.alpha = {-(d - 2.0) / 2.0, -mode.tau};
        mode.beta = {-(d - 2.0) / 2.0, mode.tau};
    } else {
        mode.tau = 0.0;
        const double root = std::sqrt(std::max(0.0, disc));
        mode.alpha = {(-(d - 2.0) - root) / 2.0, 0.0};
        mode.beta = {(-(d - 2.0) + root) / 2.0, 0.0};
    }
}

std::vector<AngularMode> critical_modes(const AngularSpectrum& spectrum, int d, bool hypothesis_i) {
    std::vector<AngularMode> out;
    for (const AngularMode& m : spectrum.modes) {
        if (m.borderline && hypothesis_i)
            throw Error("critical_modes: eigenvalue at the critical threshold violates hypothesis (i)");
        AngularMode mode = m;
        classify_mode(mode, d);
        if (mode.critical) out.push_back(mode);
    }
    return out;
}

}  // namespace invsq
