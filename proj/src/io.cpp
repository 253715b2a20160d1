#include "quadrinv/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace quadrinv::io {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void dump_into(std::ostringstream& out, const json& value, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (value.type()) {
    case json::value_t::object: {
      if (value.empty()) {
        out << "{}";
        return;
      }
      out << '{';
      bool first = true;
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (!first) out << ',';
        first = false;
        newline(depth + 1);
        out << json(it.key()).dump() << (indent < 0 ? ":" : ": ");
        dump_into(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out << '}';
      return;
    }
    case json::value_t::array: {
      if (value.empty()) {
        out << "[]";
        return;
      }
      // Arrays of scalars stay on one line; matrices print one row per line.
      bool scalars = true;
      for (const auto& item : value) scalars = scalars && !item.is_structured();
      out << '[';
      bool first = true;
      for (const auto& item : value) {
        if (!first) out << (scalars ? ", " : ",");
        first = false;
        if (!scalars) newline(depth + 1);
        dump_into(out, item, indent, depth + 1);
      }
      if (!scalars) newline(depth);
      out << ']';
      return;
    }
    case json::value_t::number_float: {
      const double x = value.get<double>();
      out << (std::isfinite(x) ? format_double(x) : "null");
      return;
    }
    default:
      out << value.dump();
  }
}

}  // namespace

std::string dump(const json& value, int indent) {
  std::ostringstream out;
  dump_into(out, value, indent, 0);
  return out.str();
}

json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Vector(m.row(i).transpose())));
  return out;
}

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Vector vector_from_json(const json& value, const std::string& what) {
  if (!value.is_array()) throw ParseError(what + ": expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!value[i].is_number()) throw ParseError(what + ": entry " + std::to_string(i) + " is not a number");
    v(static_cast<Eigen::Index>(i)) = value[i].get<double>();
  }
  return v;
}

Matrix matrix_from_json(const json& value, const std::string& what) {
  if (!value.is_array() || value.empty()) throw ParseError(what + ": expected a non-empty array of rows");
  const std::size_t rows = value.size();
  if (!value[0].is_array()) throw ParseError(what + ": rows must be arrays");
  const std::size_t cols = value[0].size();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    const Vector row = vector_from_json(value[i], what + " row " + std::to_string(i));
    if (static_cast<std::size_t>(row.size()) != cols) throw ParseError(what + ": ragged rows");
    m.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return m;
}

Vector parse_vector(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ParseError("cannot parse number '" + item + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw ParseError("trailing characters in '" + item + "'");
    values.push_back(x);
  }
  if (values.empty()) throw ParseError("empty vector '" + text + "'");
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace quadrinv::io
