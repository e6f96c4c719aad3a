#pragma once

#include <iosfwd>
#include <vector>

#include "surplusect/json_io.hpp"

namespace surplusect {

/// One row of the volume-bound comparison for the Clifford torus in CP^n.
struct BoundsRow {
  int n = 0;
  double alston_amorim = 0;
  double goldstein = 0;
  double vol_clifford = 0;
  double xi = 0;
  double zeta = 0;
  int min_intersections = 0;
  double expected_count = 0;
};

/// Crofton constant pi^((n+1)/2) / ((n+1) Gamma((n+1)/2)) = vol(RP^n)/(n+1).
double xi(int n);

/// Volume of the monotone Clifford torus, (2 pi)^n / (n+1)^((n+1)/2).
double vol_clifford(int n);

/// Minimal intersection number of T^n and RP^n, 2^ceil(n/2).
int min_intersections(int n);

/// Volume lower bound from the minimal intersection number: xi(n) * 2^ceil(n/2).
double alston_amorim(int n);

/// Constant in vol(K) vol(L) = zeta_n * integral of #(K cap gL).
double goldstein_zeta(int n);

/// Lower bound sqrt(2^n / zeta_n), written as sqrt(2^n pi^(n+1) / (n+1)) / Gamma((n+1)/2).
double goldstein(int n);

/// Mean of #(T^n cap g RP^n) under Haar measure, vol_clifford(n) / xi(n).
double expected_count(int n);

/// Stirling-type approximation 2^(c n), c = log2(2 pi / e) / 2, of expected_count.
double stirling_mean(int n);

std::vector<BoundsRow> table1(int n_max);

void write_bounds_csv(const std::vector<BoundsRow>& rows, std::ostream& out);
Json bounds_to_json(const std::vector<BoundsRow>& rows);

}  // namespace surplusect
