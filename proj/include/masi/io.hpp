#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "masi/loewner_certifier.hpp"
#include "masi/matrix_core.hpp"
#include "masi/skew_information.hpp"

namespace masi {

using json = nlohmann::ordered_json;

/// A parsed matrix file: a validated state or observable.
using ParsedMatrix = std::variant<DensityMatrix, HermitianMatrix>;

/// Reads the single-document JSON schema
///   {"kind": "state"|"observable", "dim": n, "re": [[...]], "im": [[...]]}
/// and validates the matrix-core invariants. States whose trace is within
/// 1e-6 of 1 are normalized to exact unit trace; larger deficits are
/// rejected. Throws validation_error with the offending quantity named.
ParsedMatrix parse_matrix_file(const std::string& path);
ParsedMatrix parse_matrix_json(const json& doc);

/// Inverse of parse: full-precision JSON document for a matrix.
json matrix_to_json(const CMatrix& m, const std::string& kind);

json report_to_json(const SkewInfoReport& report);
json report_to_json(const CertificationReport& report, const std::string& target);

/// Flattens a JSON object into "key,value" CSV rows (header included).
std::string json_to_csv(const json& doc);

} // namespace masi
