#pragma once

#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "qspec/discretize.hpp"
#include "qspec/metric.hpp"

namespace qspec {

/// {"kind": "UniformGrid" | "FourierGrid" | "Hermite", "n": int, "L": real}
BasisSpec basis_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BasisSpec& basis);

/// Builds an operator from an expression tree. Leaves: "X", "D", "P", "I",
/// {"op": "const", "value": c}, {"op": "funcmul", "f": "<expr>"},
/// {"op": "diag", "values": [...]}, {"op": "matrix", "rows": [[...], ...]},
/// {"op": "rank_one", "u": <vector>, "v": <vector>},
/// {"op": "oscillator", "alpha": a, "omega": w},
/// {"op": "example", "name": "<pair>", "role": "A" | "B" | "T"}.
/// Combinators: {"op": "add" | "mul", "args": [...]}, {"op": "scale", "factor": c, "arg": ...},
/// {"op": "adjoint", "arg": ...}. Complex numbers are written as [re, im].
LinearOperator operator_from_json(const nlohmann::json& node, const BasisSpec& basis,
                                  const std::filesystem::path& base_dir = {});

/// Vectors: "gaussian", {"values": [...]}, {"mode": k}, {"expr": "<f(x)>", "normalize": bool}
/// (grid bases only), {"apply": <operator>, "to": <vector>}.
ComplexVector vector_from_json(const nlohmann::json& node, const BasisSpec& basis,
                               const std::filesystem::path& base_dir = {});

/// {"source": "function_of_X", "f": "<expr>"} | {"source": "explicit", "path": "<csv>"} |
/// {"source": "identity"}.
MetricOperator metric_from_json(const nlohmann::json& node, const BasisSpec& basis,
                                const std::filesystem::path& base_dir = {});

/// Row-major CSV of complex pairs: each line holds re,im,re,im,... for one row.
ComplexMatrix read_complex_matrix_csv(std::istream& in);

Complex complex_from_json(const nlohmann::json& j);

} // namespace qspec
