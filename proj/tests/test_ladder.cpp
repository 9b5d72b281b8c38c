#include <doctest.h>

#include <cmath>

#include "invsq/common.hpp"
#include "invsq/exterior.hpp"
#include "invsq/ladder.hpp"

using namespace invsq;

namespace {
const double kMuHalf = 0.25 + std::pow(2.0 * kPi / std::log(2.0), 2.0);  // sigma = 1/2
}

TEST_CASE("standard model validation") {
    CHECK_THROWS_AS(InteriorModel::standard(0.2), Error);
    const InteriorModel m = InteriorModel::standard(2.0);
    CHECK(m.coupling(0.0) == doctest::Approx(0.0));
    CHECK(m.coupling(1.0) == doctest::Approx(1.0));
    CHECK(m.coupling(5.0) == doctest::Approx(1.0));
    CHECK(m.offset(0.5) == 0.0);
    CHECK(m.spectrum.modes.front().mu == doctest::Approx(2.0));
}

TEST_CASE("interior zero mode is a pure log-cosine beyond r0") {
    const InteriorModel m = InteriorModel::standard(kMuHalf);
    const AngularMode& mode = m.spectrum.modes.front();
    const InteriorSolution sol = interior_solution(mode, 0.0, m, 50.0);
    const double tau = std::sqrt(mode.mu - 0.25);
    std::vector<double> x, y;
    for (std::size_t i = 0; i < sol.r.size(); ++i) {
        if (sol.r[i] < 2.0) continue;
        x.push_back(sol.r[i]);
        y.push_back(std::sqrt(sol.r[i]) * sol.Y[i]);
    }
    REQUIRE(x.size() > 20);
    const CosineFit fit = fit_log_cosine(x, y, tau);
    CHECK(fit.residual < 1e-8);
    CHECK(phase_constant_c(m) == doctest::Approx(fit.phase).epsilon(1e-8));
}

TEST_CASE("matched eigenvalues satisfy the Wronskian equation") {
    const InteriorModel m = InteriorModel::standard(kMuHalf);
    const EigenLadder lad = compute_ladder(m, 6);
    const AngularMode& mode = m.spectrum.modes.front();
    for (double lam : lad.lambda_n) {
        const InteriorSolution in = interior_solution(mode, lam, m, m.r0, 8);
        const ExteriorSolution ex = evaluate_exterior(mode, lam, m.r0, m.r0);
        const double wr = in.Yp.back() * ex.X.front() - in.Y.back() * ex.Xp.front();
        const double scale = std::abs(in.Yp.back() * ex.X.front()) +
                             std::abs(in.Y.back() * ex.Xp.front());
        CHECK(std::abs(wr) / scale < 1e-8);
    }
}

TEST_CASE("ladder follows the geometric law") {
    const InteriorModel m = InteriorModel::standard(kMuHalf);
    const EigenLadder lad = compute_ladder(m, 10);
    CHECK(lad.sigma == doctest::Approx(0.5).epsilon(1e-12));
    REQUIRE(lad.lambda_n.size() == 10);
    for (std::size_t i = 0; i + 1 < lad.lambda_n.size(); ++i) {
        CHECK(lad.lambda_n[i] > lad.lambda_n[i + 1]);
        CHECK(lad.ratios[i] == doctest::Approx(2.0).epsilon(5e-3));
    }
    // predicted xi_n tracks lambda_n increasingly well
    double prev = 1e9;
    for (std::size_t i = 2; i < lad.lambda_n.size(); ++i) {
        const double rel = std::abs(lad.lambda_n[i] / lad.xi_n[i] - 1.0);
        CHECK(rel < prev * 1.2);
        prev = rel;
    }
    // the sigma=1/2 default model has additional critical modes -> warning
    CHECK(!lad.warnings.empty());
}

TEST_CASE("predicted_xi is the exponential of the phase relation") {
    const double c = 1.0, d = 2.5, mu1 = kMuHalf;
    const double tau = std::sqrt(mu1 - 0.25);
    const double xi3 = predicted_xi(3, c, d, mu1);
    CHECK(std::log(xi3) == doctest::Approx((-2.0 * kPi * 3.0 - 2.0 * (d - c)) / tau));
    CHECK(predicted_xi(4, c, d, mu1) / xi3 ==
          doctest::Approx(std::exp(-2.0 * kPi / tau)).epsilon(1e-12));
}

TEST_CASE("localization annulus carries the mass") {
    const InteriorModel m = InteriorModel::standard(kMuHalf);
    const EigenLadder lad = compute_ladder(m, 11);
    const LocalizationReport rep = localization(m, 11, lad.lambda_n[10], lad.sigma);
    CHECK(rep.mass_fraction > 0.9);
    CHECK(rep.r_lo < rep.r_hi);
    CHECK(rep.interior_fraction < 0.05);
    const double direct = annulus_mass(m, lad.lambda_n[10], rep.r_lo, rep.r_hi);
    CHECK(direct == doctest::Approx(rep.mass_fraction).epsilon(1e-6));
}
