#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "surplusect/core_geometry.hpp"

namespace surplusect {

using Json = nlohmann::ordered_json;

/// Formats a double with 17 significant digits ("%.17g").
std::string format_double(double x);

/// Serializes JSON with every floating-point value written at 17 significant
/// digits; non-finite values become null.
std::string dump_json(const Json& j, int indent = 2);

/// Parses a square complex matrix from nested arrays of [re, im] pairs.
/// Throws InvalidArgument on malformed input (not on non-unitarity).
ComplexMatrix parse_complex_matrix(const Json& j);

Json complex_matrix_to_json(const ComplexMatrix& m);

}  // namespace surplusect
