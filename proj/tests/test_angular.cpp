#include <doctest.h>

#include <cmath>

#include "invsq/angular.hpp"
#include "invsq/common.hpp"
#include "invsq/potential.hpp"
#include "invsq/quadrature.hpp"

using namespace invsq;

TEST_CASE("free sphere spectrum is l(l+1) with multiplicity 2l+1") {
    const SpherePotential p = SpherePotential::constant(3, 0.0);
    const AngularSpectrum s = angular_spectrum(p, 12);
    REQUIRE(s.modes.size() >= 9);
    for (int l = 0; l <= 8; ++l) {
        const AngularMode& m = s.modes[l];
        CHECK(std::abs(m.eigenvalue() - l * (l + 1.0)) <= 1e-8);
        CHECK(m.multiplicity == 2 * l + 1);
        CHECK_FALSE(m.critical);
    }
}

TEST_CASE("dense Galerkin route agrees with the closed form for constant P") {
    const SpherePotential p = SpherePotential::constant(3, -7.25);
    const AngularSpectrum closed = angular_spectrum(p, 8);
    const AngularSpectrum dense = angular_eigenvalues(build_angular_operator(p, 8), 3);
    REQUIRE(closed.modes.size() == dense.modes.size());
    for (std::size_t i = 0; i < closed.modes.size(); ++i) {
        CHECK(dense.modes[i].eigenvalue() ==
              doctest::Approx(closed.modes[i].eigenvalue()).epsilon(1e-10));
        CHECK(dense.modes[i].multiplicity == closed.modes[i].multiplicity);
    }
}

TEST_CASE("harmonic multiplicities in higher dimension") {
    // dim of degree-l harmonics on S^{d-1}: C(l+d-1,d-1) - C(l+d-3,d-1)
    const SpherePotential p = SpherePotential::constant(5, 0.0);
    const AngularSpectrum s = angular_spectrum(p, 6);
    // d=5: l=0 -> 1, l=1 -> 5, l=2 -> 14, l=3 -> 30
    REQUIRE(s.modes.size() >= 4);
    CHECK(s.modes[0].multiplicity == 1);
    CHECK(s.modes[1].multiplicity == 5);
    CHECK(s.modes[2].multiplicity == 14);
    CHECK(s.modes[3].multiplicity == 30);
    // eigenvalues l(l+d-2)
    CHECK(s.modes[3].eigenvalue() == doctest::Approx(3.0 * 6.0));
}

TEST_CASE("indicial exponents solve s^2 + (d-2)s + mu = 0") {
    for (double mu : {-3.0, 0.2, 0.25, 3.7, 30.0}) {
        AngularMode m;
        m.mu = mu;
        classify_mode(m, 3);
        const auto res = [&](std::complex<double> s) {
            return std::abs(s * s + (3.0 - 2.0) * s + mu);
        };
        CHECK(res(m.alpha) < 1e-10);
        CHECK(res(m.beta) < 1e-10);
        CHECK(m.critical == (mu > 0.25 + 1e-9));
        if (m.critical) CHECK(m.tau == doctest::Approx(std::sqrt(mu - 0.25)));
        // alpha is the decaying exponent
        if (!m.critical) CHECK(m.alpha.real() <= m.beta.real());
    }
}

TEST_CASE("normalized Legendre functions are orthonormal") {
    const GaussRule g = gauss_legendre(64);
    for (int m = 0; m <= 3; ++m) {
        // int Theta_{l,m} Theta_{l',m} dx = delta_{l l'}
        for (int l = m; l <= m + 3; ++l) {
            for (int lp = m; lp <= l; ++lp) {
                double s = 0.0;
                for (std::size_t i = 0; i < g.x.size(); ++i) {
                    const auto a = normalized_legendre(l, m, g.x[i]);
                    s += g.w[i] * a[l - m] * a[lp - m];
                }
                CHECK(s == doctest::Approx(l == lp ? 1.0 : 0.0).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("hemisphere odd spectrum from parity blocks matches the dense matrix") {
    const SpherePotential p = SpherePotential::hemisphere(0.01, Parity::Odd);
    const AngularSpectrum blocks = angular_spectrum(p, 20);
    const AngularSpectrum dense = angular_eigenvalues(build_angular_operator(p, 20), 3);
    CHECK(blocks.modes.front().eigenvalue() ==
          doctest::Approx(dense.modes.front().eigenvalue()).epsilon(1e-9));
}

TEST_CASE("hemisphere potential shape") {
    const SpherePotential p = SpherePotential::hemisphere(0.01, Parity::Even);
    CHECK(p(0.1) == doctest::Approx(-1.0 / 3.0));
    CHECK(p(kPi / 2.0 - 0.005) == doctest::Approx(0.0));
    CHECK(p(kPi - 0.1) == doctest::Approx(-1.0 / 3.0));  // even continuation
    const SpherePotential po = SpherePotential::hemisphere(0.01, Parity::Odd);
    CHECK(po(kPi - 0.1) == doctest::Approx(1.0 / 3.0));  // odd continuation
}
