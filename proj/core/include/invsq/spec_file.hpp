#pragma once

#include <string>

#include "invsq/ladder.hpp"
#include "invsq/oscillation.hpp"
#include "invsq/potential.hpp"

namespace invsq {

/// Parsed potential-spec file (JSON syntax), the single description of a
/// potential shared by all subcommands. Schema (docs/potential-spec.md):
///
///   {
///     "dimension": 3,
///     "angular":  {"kind": "constant", "value": -5.0}
///               | {"kind": "axisymmetric", "pieces": [{"lo","hi","coeffs"}]}
///               | {"kind": "hemisphere", "epsilon": 0.01, "parity": "even"},
///     "radial":   {"kind": "zero"}
///               | {"kind": "log_power", "C": 1.0, "p": 2.5, "sign": "minus"},
///     "interior": {"r0": 1.0, "W": 0.0}          // optional, ladder model
///   }
///
/// "radial" is optional (default zero); axisymmetric coefficients are in the
/// scaled variable s = (theta - lo)/(hi - lo), ascending degree.
struct PotentialSpec {
    SpherePotential angular = SpherePotential::constant(3, 0.0);
    RadialPerturbation radial = RadialPerturbation::zero();
    bool has_interior = false;
    double r0 = 1.0;
    double angular_shift = 0.0;
};

/// Parses JSON text; errors name the offending field ("angular.kind: ...").
PotentialSpec parse_potential_spec(const std::string& text);

/// Reads and parses a file; I/O and parse errors include the path.
PotentialSpec load_potential_spec(const std::string& path);

/// Interior model for the ladder/residual pipelines: the spec's angular
/// spectrum with the standard smoothstep coupling ramp on [0, r0] and the
/// optional angular shift W.
InteriorModel interior_model(const PotentialSpec& spec, int basis_size = 12);

}  // namespace invsq
