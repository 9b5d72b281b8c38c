#include "invsq/spec_file.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "invsq/common.hpp"

namespace invsq {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw Error("potential spec: " + field + ": " + what);
}

const json& require(const json& j, const std::string& parent, const std::string& key) {
    auto it = j.find(key);
    if (it == j.end()) fail(parent.empty() ? key : parent + "." + key, "missing required field");
    return *it;
}

double require_number(const json& j, const std::string& parent, const std::string& key) {
    const json& v = require(j, parent, key);
    if (!v.is_number()) fail(parent + "." + key, "expected a number");
    return v.get<double>();
}

std::string require_string(const json& j, const std::string& parent, const std::string& key) {
    const json& v = require(j, parent, key);
    if (!v.is_string()) fail(parent + "." + key, "expected a string");
    return v.get<std::string>();
}

SpherePotential parse_angular(const json& j, int dimension) {
    if (!j.is_object()) fail("angular", "expected an object");
    const std::string kind = require_string(j, "angular", "kind");
    if (kind == "constant") {
        return SpherePotential::constant(dimension, require_number(j, "angular", "value"));
    }
    if (kind == "axisymmetric") {
        const json& arr = require(j, "angular", "pieces");
        if (!arr.is_array() || arr.empty()) fail("angular.pieces", "expected a non-empty array");
        PiecewisePoly profile;
        int idx = 0;
        for (const json& pj : arr) {
            const std::string field = "angular.pieces[" + std::to_string(idx++) + "]";
            if (!pj.is_object()) fail(field, "expected an object");
            PiecewisePoly::Piece piece;
            piece.lo = require_number(pj, field, "lo");
            piece.hi = require_number(pj, field, "hi");
            const json& cs = require(pj, field, "coeffs");
            if (!cs.is_array() || cs.size() > 6)
                fail(field + ".coeffs", "expected an array of at most 6 numbers");
            for (std::size_t k = 0; k < cs.size(); ++k) {
                if (!cs[k].is_number()) fail(field + ".coeffs", "expected numbers");
                piece.c[k] = cs[k].get<double>();
            }
            profile.append(piece);
        }
        return SpherePotential::axisymmetric(dimension, profile);
    }
    if (kind == "hemisphere") {
        const double eps = require_number(j, "angular", "epsilon");
        const std::string parity = require_string(j, "angular", "parity");
        if (parity != "even" && parity != "odd")
            fail("angular.parity", "expected \"even\" or \"odd\"");
        return SpherePotential::hemisphere(eps, parity == "even" ? Parity::Even : Parity::Odd);
    }
    fail("angular.kind", "unknown kind \"" + kind + "\" (constant|axisymmetric|hemisphere)");
}

int parse_sign(const json& j) {
    auto it = j.find("sign");
    if (it == j.end()) return +1;
    if (it->is_string()) {
        const std::string s = it->get<std::string>();
        if (s == "plus") return +1;
        if (s == "minus") return -1;
        fail("radial.sign", "expected \"plus\" or \"minus\"");
    }
    if (it->is_number_integer()) {
        const int s = it->get<int>();
        if (s == 1 || s == -1) return s;
    }
    fail("radial.sign", "expected \"plus\", \"minus\", 1, or -1");
}

RadialPerturbation parse_radial(const json& j) {
    if (!j.is_object()) fail("radial", "expected an object");
    const std::string kind = require_string(j, "radial", "kind");
    if (kind == "zero") return RadialPerturbation::zero();
    if (kind == "log_power") {
        const double C = require_number(j, "radial", "C");
        const double p = require_number(j, "radial", "p");
        return RadialPerturbation::log_power(C, p, parse_sign(j));
    }
    fail("radial.kind", "unknown kind \"" + kind + "\" (zero|log_power)");
}

}  // namespace

PotentialSpec parse_potential_spec(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("potential spec: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error("potential spec: top level must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k != "dimension" && k != "angular" && k != "radial" && k != "interior")
            fail(k, "unknown field (dimension|angular|radial|interior)");
    }

    PotentialSpec spec;
    int dimension = 3;
    if (auto it = j.find("dimension"); it != j.end()) {
        if (!it->is_number_integer()) fail("dimension", "expected an integer");
        dimension = it->get<int>();
        if (dimension < 3) fail("dimension", "must be >= 3");
    }
    spec.angular = parse_angular(require(j, "", "angular"), dimension);
    if (auto it = j.find("radial"); it != j.end()) spec.radial = parse_radial(*it);
    if (auto it = j.find("interior"); it != j.end()) {
        const json& ij = *it;
        if (!ij.is_object()) fail("interior", "expected an object");
        spec.has_interior = true;
        if (auto r = ij.find("r0"); r != ij.end()) {
            if (!r->is_number()) fail("interior.r0", "expected a number");
            spec.r0 = r->get<double>();
            if (!(spec.r0 > 0.0)) fail("interior.r0", "must be > 0");
        }
        if (auto w = ij.find("W"); w != ij.end()) {
            if (!w->is_number()) fail("interior.W", "expected a number");
            spec.angular_shift = w->get<double>();
        }
    }
    return spec;
}

PotentialSpec load_potential_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("potential spec: cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_potential_spec(ss.str());
    } catch (const Error& e) {
        throw Error(std::string(e.what()) + " (file: " + path + ")");
    }
}

InteriorModel interior_model(const PotentialSpec& spec, int basis_size) {
    if (spec.angular.dimension() != 3)
        throw Error("interior_model: the separable interior model is d = 3 only");
    InteriorModel m;
    m.r0 = spec.r0;
    m.f = smoothstep(0.0, spec.r0);
    m.angular_shift = spec.angular_shift;
    m.p = spec.angular;
    m.spectrum = angular_spectrum(m.p, basis_size);
    return m;
}

}  // namespace invsq
