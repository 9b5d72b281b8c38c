#pragma once

#include <vector>

#include "invsq/piecewise.hpp"

namespace invsq {

enum class AngularKind { Constant, Axisymmetric, Hemisphere };
enum class Parity { Even, Odd };

/// The angular factor P of a potential behaving like P(omega)/r^2 at infinity.
///
/// Three shapes are supported: a constant (any dimension d >= 3), an
/// axisymmetric profile P(theta) on S^2 given as a piecewise polynomial of
/// theta in [0, pi], and the hemisphere even/odd construction: -1/3 for
/// theta < pi/2 - 2*eps, 0 on (pi/2 - eps, pi/2), a monotone C^2 quintic in
/// between, continued to the lower hemisphere evenly or oddly.
class SpherePotential {
  public:
    static SpherePotential constant(int dimension, double value);
    static SpherePotential axisymmetric(int dimension, PiecewisePoly profile);
    static SpherePotential hemisphere(double epsilon, Parity parity);

    int dimension() const { return dimension_; }
    AngularKind kind() const { return kind_; }
    Parity parity() const { return parity_; }
    double epsilon() const { return epsilon_; }
    double constant_value() const { return constant_; }

    /// P(theta) for axisymmetric evaluation (constant potentials ignore theta).
    double operator()(double theta) const;

    /// sup |P| over the sphere.
    double bound() const { return bound_; }

    /// Sorted interior breakpoints of P(theta) on (0, pi); quadrature splits
    /// the integration at these to stay spectrally accurate.
    std::vector<double> theta_knots() const;

  private:
    SpherePotential() = default;

    int dimension_ = 3;
    AngularKind kind_ = AngularKind::Constant;
    double constant_ = 0.0;
    PiecewisePoly profile_;       // upper-hemisphere profile for Hemisphere kind
    Parity parity_ = Parity::Even;
    double epsilon_ = 0.0;
    double bound_ = 0.0;
};

}  // namespace invsq
