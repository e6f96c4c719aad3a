#include "surplusect/bounds_tables.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "surplusect/core_geometry.hpp"
#include "surplusect/errors.hpp"
#include "surplusect/json_io.hpp"

namespace surplusect {

namespace {

void require_dimension(int n, const char* what) {
  if (n < 1) throw InvalidArgument(std::string(what) + ": n must be >= 1");
}

double half_gamma(int n) { return std::tgamma(0.5 * (n + 1)); }

}  // namespace

double xi(int n) {
  require_dimension(n, "xi");
  return vol_rpn(n) / (n + 1);
}

double vol_clifford(int n) {
  require_dimension(n, "vol_clifford");
  return std::pow(2.0 * std::numbers::pi, n) / std::pow(n + 1.0, 0.5 * (n + 1));
}

int min_intersections(int n) {
  require_dimension(n, "min_intersections");
  return 1 << ((n + 1) / 2);
}

double alston_amorim(int n) { return xi(n) * min_intersections(n); }

double goldstein_zeta(int n) {
  require_dimension(n, "goldstein_zeta");
  const double g = half_gamma(n);
  return std::pow(std::numbers::pi, n + 1) / ((n + 1) * g * g);
}

double goldstein(int n) {
  require_dimension(n, "goldstein");
  return std::sqrt(std::pow(2.0, n) * std::pow(std::numbers::pi, n + 1) / (n + 1)) / half_gamma(n);
}

double expected_count(int n) {
  require_dimension(n, "expected_count");
  return std::pow(2.0, n) * std::pow(std::numbers::pi, 0.5 * (n - 1)) * half_gamma(n) /
         std::pow(n + 1.0, 0.5 * (n - 1));
}

double stirling_mean(int n) {
  const double c = 0.5 * std::log2(2.0 * std::numbers::pi / std::numbers::e);
  return std::exp2(c * n);
}

std::vector<BoundsRow> table1(int n_max) {
  require_dimension(n_max, "table1");
  std::vector<BoundsRow> rows;
  rows.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    rows.push_back(BoundsRow{n, alston_amorim(n), goldstein(n), vol_clifford(n), xi(n),
                             goldstein_zeta(n), min_intersections(n), expected_count(n)});
  }
  return rows;
}

void write_bounds_csv(const std::vector<BoundsRow>& rows, std::ostream& out) {
  out << "n,alston_amorim,goldstein,vol_clifford,xi,zeta,min_intersections,expected_count\n";
  for (const auto& r : rows) {
    out << r.n << ',' << format_double(r.alston_amorim) << ',' << format_double(r.goldstein) << ','
        << format_double(r.vol_clifford) << ',' << format_double(r.xi) << ','
        << format_double(r.zeta) << ',' << r.min_intersections << ','
        << format_double(r.expected_count) << '\n';
  }
}

Json bounds_to_json(const std::vector<BoundsRow>& rows) {
  auto arr = Json::array();
  for (const auto& r : rows) {
    arr.push_back({{"n", r.n},
                   {"alston_amorim", r.alston_amorim},
                   {"goldstein", r.goldstein},
                   {"vol_clifford", r.vol_clifford},
                   {"xi", r.xi},
                   {"zeta", r.zeta},
                   {"min_intersections", r.min_intersections},
                   {"expected_count", r.expected_count}});
  }
  return Json{{"rows", arr}};
}

}  // namespace surplusect
