#include "surplusect/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "surplusect/errors.hpp"

namespace surplusect {

std::string format_double(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void write(const Json& j, std::ostringstream& out, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ',';
        first = false;
        newline(depth + 1);
        out << Json(it.key()).dump() << (indent < 0 ? ":" : ": ");
        write(it.value(), out, indent, depth + 1);
      }
      newline(depth);
      out << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      out << '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out << ',';
        first = false;
        newline(depth + 1);
        write(v, out, indent, depth + 1);
      }
      newline(depth);
      out << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (std::isfinite(x)) {
        out << format_double(x);
      } else {
        out << "null";
      }
      return;
    }
    default:
      out << j.dump();
  }
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::ostringstream out;
  write(j, out, indent, 0);
  return out.str();
}

ComplexMatrix parse_complex_matrix(const Json& j) {
  if (!j.is_array() || j.empty()) throw InvalidArgument("matrix must be a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  ComplexMatrix m(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) {
      throw InvalidArgument("matrix must be square");
    }
    for (Eigen::Index k = 0; k < rows; ++k) {
      const auto& entry = row[static_cast<std::size_t>(k)];
      if (entry.is_number()) {
        m(i, k) = Complex(entry.get<double>(), 0.0);
      } else if (entry.is_array() && entry.size() == 2 && entry[0].is_number() &&
                 entry[1].is_number()) {
        m(i, k) = Complex(entry[0].get<double>(), entry[1].get<double>());
      } else {
        throw InvalidArgument("matrix entries must be [re, im] pairs");
      }
    }
  }
  return m;
}

Json complex_matrix_to_json(const ComplexMatrix& m) {
  auto rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(row);
  }
  return rows;
}

}  // namespace surplusect
