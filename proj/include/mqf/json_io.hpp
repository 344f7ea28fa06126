#pragma once

#include <complex>
#include <json.hpp>
#include <string>

#include "mqf/elliptical.hpp"
#include "mqf/matrix.hpp"

namespace mqf {

using json = nlohmann::json;

// Matrix record {"beta": B, "rows": n, "cols": m, "data": [[[c1..cB], ...], ...]}.
json matrix_to_json(const DAMatrix& m);
DAMatrix matrix_from_json(const json& j);
// As above, with real (beta = 1) input lifted into the target algebra.
DAMatrix matrix_from_json(const json& j, AlgebraKind target);
DAMatrix promote(const DAMatrix& m, AlgebraKind target);
// As above, then validated as self-adjoint.
HermitianMatrix hermitian_from_json(const json& j);
HermitianMatrix hermitian_from_json(const json& j, AlgebraKind target);

// {"kind": "normal"} | {"kind": "pearson7", "s": .., "g": ..} | {"kind": "t", "g": ..} | {"kind": "cauchy"}
json family_to_json(const GeneratorFamily& f);
GeneratorFamily family_from_json(const json& j);

// {"family": .., "beta": B, "mu": matrix, "theta": matrix, "sigma": matrix}
json model_to_json(const EllipticalModel& m);
EllipticalModel model_from_json(const json& j);

json complex_to_json(std::complex<double> z);

json read_json_file(const std::string& path);

/// Serialises with every floating-point number printed as %.17g, so JSON and
/// CSV renderings of the same value are textually identical. Object keys
/// keep nlohmann's sorted order, which makes the output deterministic.
std::string dump_json(const json& j, int indent = 2);

std::string format_double(double v);

} // namespace mqf
