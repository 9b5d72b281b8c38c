#include <doctest.h>

#include <cmath>

#include "invsq/common.hpp"
#include "invsq/experiments.hpp"

using namespace invsq;

TEST_CASE("periodic comparison function has the required shape") {
    const PeriodicG g = build_periodic_g();
    CHECK(g.value(1.0) == doctest::Approx(1.0));
    CHECK(g.value(2.0) == doctest::Approx(-1.0));
    CHECK(g.value(4.0) == doctest::Approx(1.0));
    CHECK(g.deriv(1.0) == doctest::Approx(0.0));
    CHECK(g.deriv(2.0) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(g.base.deriv(4.0) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(g.base.second(1.0) == doctest::Approx(16.0 * g.base.second(4.0)).epsilon(1e-9));
    // zeros exactly at z1, z2 inside linear zones
    CHECK(g.value(g.z1) == doctest::Approx(0.0));
    CHECK(g.value(g.z2) == doctest::Approx(0.0));
    // multiplicative extension: g(4t) = g(t)
    for (double t : {1.3, 2.7, 3.9}) {
        CHECK(g.value(4.0 * t) == doctest::Approx(g.value(t)).epsilon(1e-12));
        CHECK(g.deriv(4.0 * t) == doctest::Approx(g.deriv(t) / 4.0).epsilon(1e-10));
        CHECK(g.second(4.0 * t) == doctest::Approx(g.second(t) / 16.0).epsilon(1e-10));
    }
}

TEST_CASE("infeasible shapes are rejected with the violated condition") {
    PeriodicGParams p;
    p.slope_z1 = 1.0;  // wrong sign
    CHECK_THROWS_AS(build_periodic_g(p), Error);
    PeriodicGParams q;
    q.z1 = 1.01;  // linear zone pokes out of (1, 2)
    CHECK_THROWS_AS(build_periodic_g(q), Error);
}

TEST_CASE("T satisfies the defining identities") {
    const PeriodicG g = build_periodic_g();
    const CounterexampleT T = build_counterexample_T(g);
    CHECK(T.sup_t2_T > 0.0);
    // g'' + T g = 0 away from the zeros, and T vanishes on the linear zones
    for (double t = 1.0; t <= 4.0; t += 0.013) {
        const double u = std::log(t);
        const double Tt = T.at_log(u) / (t * t);  // at_log carries t^2 T(t)
        CHECK(g.second(t) + Tt * g.value(t) == doctest::Approx(0.0).epsilon(1e-9));
    }
    CHECK(T.at_log(std::log(g.z1)) == doctest::Approx(0.0));
    // log-scale coefficient is ln(4)-periodic
    for (double u : {0.1, 0.9, 1.3}) {
        CHECK(T.at_log(u + std::log(4.0)) == doctest::Approx(T.at_log(u)).epsilon(1e-10));
    }
    CHECK(T.at_log(-0.5) == 0.0);
    // sup t^2 |T| is attained within the first period
    double sup = 0.0;
    for (double u = 0.0; u < std::log(4.0); u += 1e-4)
        sup = std::max(sup, std::abs(T.at_log(u)));
    CHECK(sup == doctest::Approx(T.sup_t2_T).epsilon(1e-3));
}

TEST_CASE("sharpness contrast: periodic tail diverges, decaying tail does not") {
    const CounterexampleT T = build_counterexample_T(build_periodic_g());
    const std::vector<double> grid{1e-3, 1e-5, 1e-7};
    const std::vector<int> sharp = sharpness_experiment(T.perturbation(), grid);
    REQUIRE(sharp.size() == 3);
    CHECK(sharp[0] < sharp[1]);
    CHECK(sharp[1] < sharp[2]);
    const std::vector<double> wide{1e-4, 1e-6, 1e-8, 1e-10, 1e-12};
    const std::vector<int> tame =
        sharpness_experiment(RadialPerturbation::log_power(9.0, 2.5), wide);
    for (int n : tame) CHECK(n == tame.front());
}

TEST_CASE("hemisphere experiment reproduces the lemma bounds") {
    const std::vector<double> grid{1e-2, 1e-6, 1e-10, 1e-12};
    const HemisphereResult res = hemisphere_experiment(0.01, grid, 24);
    CHECK(res.lambda_min_even < -0.25);
    CHECK(res.lambda_min_odd >= -1.0 / 18.0 - 1e-6);
    // odd counts flat, even counts eventually growing
    for (int n : res.counts_odd) CHECK(n == res.counts_odd.front());
    CHECK(res.counts_even.back() > res.counts_even.front());
    // predicted law grows linearly in ln(1/E)
    CHECK(res.predicted_even.back() > res.predicted_even.front());
}
