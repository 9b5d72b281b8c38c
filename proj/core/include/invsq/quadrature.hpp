#pragma once

#include <vector>

namespace invsq {

struct GaussRule {
    std::vector<double> x;  // nodes on [-1, 1]
    std::vector<double> w;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
GaussRule gauss_legendre(int n);

/// Integrate f over [a, b] with an n-point Gauss-Legendre rule.
template <class F>
double integrate(F&& f, double a, double b, const GaussRule& rule) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) s += rule.w[i] * f(mid + half * rule.x[i]);
    return s * half;
}

template <class F>
double integrate(F&& f, double a, double b, int n = 64) {
    return integrate(f, a, b, gauss_legendre(n));
}

}  // namespace invsq
