#include <doctest.h>

#include <cmath>
#include <random>

#include "invsq/angular.hpp"
#include "invsq/common.hpp"
#include "invsq/oscillation.hpp"

using namespace invsq;

namespace {
AngularMode make_mode(double mu) {
    AngularMode m;
    m.mu = mu;
    classify_mode(m, 3);
    return m;
}
}  // namespace

TEST_CASE("Prufer count matches the sign-change oracle on random instances") {
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> mu_dist(0.3, 30.0);
    std::uniform_real_distribution<double> logE_dist(-10.0, -2.0);
    int compared = 0;
    for (int i = 0; i < 25; ++i) {
        const double mu = mu_dist(rng);
        const double E = std::pow(10.0, logE_dist(rng));
        const RadialPerturbation t =
            (i % 2 == 0) ? RadialPerturbation::zero()
                         : RadialPerturbation::log_power(1.0 + (i % 5), 1.5, i % 4 ? +1 : -1);
        const QProfile q(mu, 3, E, t);
        const double r_max = q.turning_point() + 20.0;
        const PruferTrace trace = count_zeros(q, r_max);
        if (trace.tail_zero_possible) continue;
        ++compared;
        CHECK(trace.zero_count == sign_change_oracle(q, r_max, 1e-3));
    }
    CHECK(compared >= 15);
}

TEST_CASE("inertia oracle agrees within one state") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> mu_dist(0.5, 20.0);
    int converged = 0;
    for (int i = 0; i < 8; ++i) {
        const double mu = mu_dist(rng);
        const double E = std::pow(10.0, -3.0 - i);
        const AngularMode m = make_mode(mu);
        const QProfile q(mu, 3, E, RadialPerturbation::zero());
        const PruferTrace trace = count_zeros(q, q.turning_point() + 20.0);
        int inert = 0;
        try {
            inert = inertia_oracle(m, 3, E, RadialPerturbation::zero(),
                                   std::exp(q.turning_point() + 12.0), 40000);
        } catch (const Error&) {
            continue;  // an eigenvalue sits on the -E boundary for this domain
        }
        ++converged;
        CHECK(std::abs(trace.zero_count - inert) <= 1);
    }
    CHECK(converged >= 5);
}

TEST_CASE("Sturm monotonicity: deeper coupling never loses zeros") {
    const double E = 1e-6;
    int prev = -1;
    for (double mu : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
        const QProfile q(mu, 3, E, RadialPerturbation::zero());
        const int n = count_zeros(q, q.turning_point() + 20.0).zero_count;
        CHECK(n >= prev);
        prev = n;
    }
}

TEST_CASE("counts increase as E decreases") {
    int prev = -1;
    for (double lg = -2.0; lg >= -12.0; lg -= 2.0) {
        const QProfile q(5.0, 3, std::pow(10.0, lg), RadialPerturbation::zero());
        const int n = count_zeros(q, q.turning_point() + 20.0).zero_count;
        CHECK(n >= prev);
        prev = n;
    }
}

TEST_CASE("turning point sits at ln(1/E)/2 + O(1)") {
    for (double lg : {-3.0, -6.0, -9.0, -12.0}) {
        const double E = std::pow(10.0, lg);
        const QProfile q(5.0, 3, E, RadialPerturbation::zero());
        // Q = mu - 1/4 - E e^{2r} = 0 at r = ln((mu-1/4)/E)/2
        const double exact = 0.5 * std::log((5.0 - 0.25) / E);
        CHECK(q.turning_point() == doctest::Approx(exact).epsilon(1e-8));
        CHECK(std::abs(q.turning_point() - 0.5 * std::log(1.0 / E)) < 2.0);
    }
}

TEST_CASE("predicted count reproduces the Theorem 1 leading term") {
    AngularMode a = make_mode(4.75 + 0.25);  // tau = sqrt(4.75)
    AngularMode b = make_mode(2.75 + 0.25);  // tau = sqrt(2.75)
    b.multiplicity = 3;
    const double E = 1e-8;
    const double expect =
        std::log(1.0 / E) / (2.0 * kPi) * (std::sqrt(4.75) + 3.0 * std::sqrt(2.75));
    CHECK(predicted_count({a, b}, E, 3) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("non-critical modes contribute bounded counts") {
    // mu below the threshold: the count stays the same across decades of E.
    const QProfile q1(0.2, 3, 1e-4, RadialPerturbation::zero());
    const QProfile q2(0.2, 3, 1e-12, RadialPerturbation::zero());
    CHECK(count_zeros(q1, q1.turning_point() + 20.0).zero_count ==
          count_zeros(q2, q2.turning_point() + 20.0).zero_count);
}

TEST_CASE("slope fit requires a wide grid and fits an exact line") {
    const std::vector<double> grid{1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12};
    std::vector<double> y;
    for (double E : grid) y.push_back(2.0 * std::log(1.0 / E) + 0.5);
    const SlopeFit fit = slope_fit(grid, y);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(fit.max_abs_residual < 1e-9);
    CHECK_THROWS_AS(slope_fit({1e-2, 1e-3, 1e-4}, {1.0, 2.0, 3.0}), Error);
}

TEST_CASE("log_power perturbation validation") {
    CHECK_THROWS_AS(RadialPerturbation::log_power(-1.0, 2.0), Error);
    CHECK_THROWS_AS(RadialPerturbation::log_power(1.0, 2.0, 3), Error);
    const RadialPerturbation t = RadialPerturbation::log_power(2.0, 1.5, -1);
    CHECK(t.at_log(0.0) == doctest::Approx(-2.0));
    CHECK(t.bound() == doctest::Approx(2.0));
    CHECK_NOTHROW(t.require_decay(1.0));
    CHECK_THROWS_AS(t.require_decay(2.0), Error);
}

TEST_CASE("count_report totals combine multiplicities") {
    const SpherePotential p = SpherePotential::constant(3, -5.0);
    const AngularSpectrum s = angular_spectrum(p, 8);
    const std::vector<double> grid{1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12};
    const CountReport rep = count_report(s, grid, RadialPerturbation::zero(), 3);
    REQUIRE(rep.totals.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        int total = 0;
        for (std::size_t k = 0; k < rep.mode_info.size(); ++k)
            total += rep.mode_info[k].multiplicity * rep.per_mode_counts[i][k];
        CHECK(total == rep.totals[i]);
        CHECK(std::abs(rep.totals[i] - rep.predicted[i]) <= 3.0);
    }
    CHECK(rep.fit.slope == doctest::Approx(rep.fit.slope));  // fit was produced
}
