#include "invsq/potential.hpp"

#include <algorithm>
#include <cmath>

#include "invsq/common.hpp"

namespace invsq {

SpherePotential SpherePotential::constant(int dimension, double value) {
    if (dimension < 3) throw Error("SpherePotential: dimension must be >= 3");
    SpherePotential p;
    p.dimension_ = dimension;
    p.kind_ = AngularKind::Constant;
    p.constant_ = value;
    p.bound_ = std::abs(value);
    return p;
}

SpherePotential SpherePotential::axisymmetric(int dimension, PiecewisePoly profile) {
    if (dimension != 3) throw Error("SpherePotential: axisymmetric profiles ship for d = 3 only");
    SpherePotential p;
    p.dimension_ = dimension;
    p.kind_ = AngularKind::Axisymmetric;
    p.profile_ = std::move(profile);
    double b = 0.0;
    for (int i = 0; i <= 2000; ++i) b = std::max(b, std::abs(p.profile_.value(kPi * i / 2000.0)));
    p.bound_ = b;
    return p;
}

SpherePotential SpherePotential::hemisphere(double epsilon, Parity parity) {
    if (!(epsilon > 0.0 && epsilon <= 0.01))
        throw Error("SpherePotential: hemisphere epsilon must lie in (0, 0.01]");
    SpherePotential p;
    p.dimension_ = 3;
    p.kind_ = AngularKind::Hemisphere;
    p.parity_ = parity;
    p.epsilon_ = epsilon;
    const double a = kPi / 2 - 2 * epsilon, b = kPi / 2 - epsilon;
    PiecewisePoly prof;
    prof.append(PiecewisePoly::constant(0.0, a, -1.0 / 3.0));
    prof.append(PiecewisePoly::hermite(a, b, -1.0 / 3.0, 0, 0, 0.0, 0, 0));
    prof.append(PiecewisePoly::constant(b, kPi / 2, 0.0));
    p.profile_ = std::move(prof);
    p.bound_ = 1.0 / 3.0;
    return p;
}

std::vector<double> SpherePotential::theta_knots() const {
    std::vector<double> knots;
    if (kind_ == AngularKind::Constant) return knots;
    for (const auto& piece : profile_.pieces())
        if (piece.lo > 0.0 && piece.lo < kPi) knots.push_back(piece.lo);
    if (kind_ == AngularKind::Hemisphere) {
        // The profile covers the upper hemisphere; mirror its breakpoints.
        std::vector<double> mirrored;
        for (double k : knots) mirrored.push_back(kPi - k);
        knots.push_back(kPi / 2);
        knots.insert(knots.end(), mirrored.begin(), mirrored.end());
    }
    std::sort(knots.begin(), knots.end());
    return knots;
}

double SpherePotential::operator()(double theta) const {
    switch (kind_) {
        case AngularKind::Constant:
            return constant_;
        case AngularKind::Axisymmetric:
            return profile_.value(std::clamp(theta, 0.0, kPi));
        case AngularKind::Hemisphere: {
            theta = std::clamp(theta, 0.0, kPi);
            if (theta <= kPi / 2) return profile_.value(theta);
            const double up = profile_.value(kPi - theta);
            return parity_ == Parity::Even ? up : -up;
        }
    }
    return 0.0;
}

}  // namespace invsq
