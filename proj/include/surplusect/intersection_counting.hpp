#pragma once

#include <vector>

#include "surplusect/core_geometry.hpp"

namespace surplusect {

namespace thresholds {
inline constexpr double kTransversality = 1e-7;  // min Jacobian singular value
inline constexpr double kEigenGap = 1e-8;
inline constexpr double kDedup = 1e-6;           // projective distance
inline constexpr double kNewtonResidual = 1e-9;
inline constexpr double kWitnessResidual = 1e-8;
inline constexpr double kTorusModulus = 1e-7;
}  // namespace thresholds

/// n real symmetric (n+1)x(n+1) forms whose common zeros in RP^n are the
/// points a with [g a] on the Clifford torus.
struct QuadricSystem {
  int n = 0;
  std::vector<RealMatrix> forms;

  /// Throws InvalidArgument unless there are n symmetric forms of size n+1.
  void validate() const;
};

/// Outcome of counting T^n cap g RP^n. Witnesses are unit real vectors with
/// the a ~ -a ambiguity fixed by canonical_real_point.
struct CountResult {
  int count = 0;
  std::vector<RealVector> witnesses;
  bool transverse = false;
  double min_jacobian_sigma = 0.0;
  bool degenerate = false;
};

/// Q_i = Re(H_{i+1} - H_1), (H_m)_{jk} = g_{mj} conj(g_{mk}).
QuadricSystem clifford_quadric_system(const UnitaryMatrix& g);

/// Exact n = 2 count by splitting a singular member of the conic pencil into
/// two lines. Near-degenerate inputs come back with degenerate = true.
CountResult count_conic_pencil(const QuadricSystem& sys);

inline constexpr int kDefaultStartsPerDim = 200;

/// Damped Newton from starts_per_dim * 2^n random starts on S^n. Completeness
/// is heuristic for n >= 3. Throws BudgetExceeded if > 99% of starts fail.
CountResult count_clifford_multistart(const QuadricSystem& sys, int starts_per_dim,
                                      const RngState& rng);

/// RP^n cap g RP^n via the eigenvectors of the symmetric unitary N = g^H conj(g).
struct RpnCount {
  int count = 0;
  std::vector<RealVector> parameters;       // real b with [g b] in RP^n
  std::vector<ProjectivePoint> witnesses;   // the points [g b]
  double min_eigen_gap = 0.0;
  bool degenerate = false;
};

RpnCount count_rpn_rpn(const UnitaryMatrix& g);

/// Smallest singular value of the n x (n+1) matrix with rows (Q_i a)^T,
/// projected to the tangent space of the sphere at a.
double jacobian_sigma(const QuadricSystem& sys, const RealVector& a);

/// max_i |a^T Q_i a| for unit a.
double quadric_residual(const QuadricSystem& sys, const RealVector& a);

/// Spread of |(g a)_i| over coordinates; zero exactly on the Clifford torus.
double torus_modulus_spread(const UnitaryMatrix& g, const RealVector& a);

/// True when count is even and lies in [2^ceil(n/2), 2^n].
bool admissible_clifford_count(int n, int count);

/// Each witness of `a` is within kDedup of one of `b` and vice versa.
bool same_witness_sets(const std::vector<RealVector>& a, const std::vector<RealVector>& b,
                       double radius = thresholds::kDedup);

}  // namespace surplusect
