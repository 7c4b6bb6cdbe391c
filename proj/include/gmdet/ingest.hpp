#pragma once

#include <string>

#include <json.hpp>

#include "gmdet/connection.hpp"
#include "gmdet/fourier.hpp"

namespace gmdet {

/// Parses JSON text; syntax errors become malformed-input with line and
/// column of the offending byte.
nlohmann::json parse_json_text(const std::string& text, const std::string& source);
nlohmann::json read_json_file(const std::string& path);

/// Connection spec document:
///   {
///     "base_vars": ["a", ...],                 required, may be empty
///     "params": ["alpha", ...],                optional symbolic constants
///     "fiber": "z",                            optional, default "z"
///     "extension": {"gen": "w", "square": "a*b"},   optional
///     "rank": r,
///     "matrix": [[entry, ...], ...],           r x r, entry = "coeff*dz + coeff*da + ..." or 0
///     "divisor": [{"point": "0" | "infinity", "mult": m}, ...],   optional
///     "aux_factors": ["a - b", ...]            optional, extra factors for dlog reduction
///   }
/// Errors name the offending field as a JSON pointer (e.g. /matrix/0/1).
ConnectionSpec load_spec(const nlohmann::json& doc);

/// Fourier document:
///   {
///     "rank": r,
///     "poles": [{"point": "1", "g": [G1, G2, ...]}, ...],   G_i = g^x_i as r x r rational matrices
///     "g_inf": [G2, G3, ...]                                  optional, g^inf_k from k = 2
///   }
FourierData load_fourier(const nlohmann::json& doc);

}  // namespace gmdet
