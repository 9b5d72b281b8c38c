#include <doctest.h>

#include <string>

#include "invsq/common.hpp"
#include "invsq/spec_file.hpp"

using namespace invsq;

TEST_CASE("constant spec round-trips") {
    const PotentialSpec s = parse_potential_spec(R"({
        "dimension": 3,
        "angular": {"kind": "constant", "value": -5.0},
        "radial": {"kind": "log_power", "C": 2.0, "p": 1.5, "sign": "minus"}
    })");
    CHECK(s.angular.kind() == AngularKind::Constant);
    CHECK(s.angular.constant_value() == doctest::Approx(-5.0));
    CHECK(s.radial.kind() == RadialPerturbation::Kind::LogPower);
    CHECK(s.radial.sign() == -1);
    CHECK(s.radial.at_log(0.0) == doctest::Approx(-2.0));
    CHECK_FALSE(s.has_interior);
}

TEST_CASE("hemisphere and interior fields") {
    const PotentialSpec s = parse_potential_spec(R"({
        "angular": {"kind": "hemisphere", "epsilon": 0.005, "parity": "odd"},
        "interior": {"r0": 2.0, "W": 0.5}
    })");
    CHECK(s.angular.kind() == AngularKind::Hemisphere);
    CHECK(s.angular.parity() == Parity::Odd);
    CHECK(s.has_interior);
    CHECK(s.r0 == doctest::Approx(2.0));
    CHECK(s.angular_shift == doctest::Approx(0.5));
}

TEST_CASE("axisymmetric pieces build a profile") {
    const PotentialSpec s = parse_potential_spec(R"({
        "angular": {"kind": "axisymmetric", "pieces": [
            {"lo": 0.0, "hi": 3.141592653589793, "coeffs": [-1.0, 0.5]}
        ]}
    })");
    CHECK(s.angular.kind() == AngularKind::Axisymmetric);
    CHECK(s.angular(0.0) == doctest::Approx(-1.0));
}

TEST_CASE("field diagnostics name the offending field") {
    auto message_of = [](const std::string& text) {
        try {
            parse_potential_spec(text);
        } catch (const Error& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(message_of("{") .find("invalid JSON") != std::string::npos);
    CHECK(message_of(R"({"radial": {"kind": "zero"}})").find("angular") != std::string::npos);
    CHECK(message_of(R"({"angular": {"kind": "nope"}})").find("angular.kind") !=
          std::string::npos);
    CHECK(message_of(R"({"angular": {"kind": "constant"}})").find("angular.value") !=
          std::string::npos);
    CHECK(message_of(R"({"angular": {"kind": "constant", "value": 0}, "dimension": 2})")
              .find("dimension") != std::string::npos);
    CHECK(message_of(R"({"angular": {"kind": "constant", "value": 0}, "bogus": 1})")
              .find("unknown field") != std::string::npos);
    CHECK(message_of(
              R"({"angular": {"kind": "constant", "value": 0}, "radial": {"kind": "log_power"}})")
              .find("radial.C") != std::string::npos);
}

TEST_CASE("interior model derives from the spec") {
    const PotentialSpec s = parse_potential_spec(R"({
        "angular": {"kind": "constant", "value": -82.41915382089529},
        "interior": {"r0": 1.0}
    })");
    const InteriorModel m = interior_model(s, 12);
    CHECK(m.spectrum.modes.front().mu == doctest::Approx(82.41915382089529));
    CHECK(m.coupling(0.0) == doctest::Approx(0.0));
    CHECK(m.coupling(1.5) == doctest::Approx(1.0));
}
