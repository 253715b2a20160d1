#pragma once

#include <string>

#include <json.hpp>

#include "quadrinv/types.hpp"

namespace quadrinv::io {

using json = nlohmann::ordered_json;

/// Formats a double with 17 significant digits ("%.17g"); non-finite values
/// become null in JSON and "nan"/"inf" in CSV.
std::string format_double(double x);

/// Serializes like json::dump but prints every floating-point number through
/// format_double, so reruns are byte-identical and lossless.
std::string dump(const json& value, int indent = 2);

json to_json(const Vector& v);
json to_json(const Matrix& m);
json to_json(Complex z);  // [re, im]

/// Throws ParseError on shape or type mismatch.
Vector vector_from_json(const json& value, const std::string& what);
Matrix matrix_from_json(const json& value, const std::string& what);

/// Parses "1,2.5,-3" (whitespace tolerated). Throws ParseError.
Vector parse_vector(const std::string& text);

json read_json_file(const std::string& path);

}  // namespace quadrinv::io
