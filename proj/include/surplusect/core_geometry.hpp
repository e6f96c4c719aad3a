#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace surplusect {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// A point of CP^n stored as a unit representative whose first entry of
/// modulus > 1e-9 is real and positive. Two points are equal as projective
/// points iff their representatives agree.
class ProjectivePoint {
 public:
  static constexpr double kPhaseThreshold = 1e-9;

  /// Throws ZeroVector if every entry is zero.
  explicit ProjectivePoint(const ComplexVector& representative);

  const ComplexVector& representative() const { return rep_; }
  Eigen::Index size() const { return rep_.size(); }
  Complex operator[](Eigen::Index i) const { return rep_[i]; }

 private:
  ComplexVector rep_;
};

/// Fubini-Study angle arccos|<p, q>| in [0, pi/2].
double projective_distance(const ProjectivePoint& p, const ProjectivePoint& q);

/// Same metric on RP^n for unit real representatives (a ~ -a).
double real_projective_distance(const RealVector& a, const RealVector& b);

/// Normalizes `a` and fixes the sign so the first entry of modulus > 1e-9 is positive.
RealVector canonical_real_point(const RealVector& a);

/// An element of U(dim), standing in for its class in PU(dim).
class UnitaryMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  /// Throws NotUnitary when ||M^H M - I||_inf > kTolerance or M is not square.
  explicit UnitaryMatrix(ComplexMatrix m);

  /// Induced infinity norm of M^H M - I.
  static double unitarity_defect(const ComplexMatrix& m);

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  static UnitaryMatrix identity(Eigen::Index dim);
  static UnitaryMatrix diagonal(const RealVector& phases);

  friend UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b);

 private:
  ComplexMatrix m_;
};

/// Counter-based RNG key: everything drawn for Monte Carlo trial k comes
/// from (seed, stream = k) and nothing else.
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Independent key for a sub-purpose of the same trial (e.g. retries, Newton starts).
  RngState derive(std::uint64_t salt) const;

  std::mt19937_64 engine() const;

  friend bool operator==(const RngState&, const RngState&) = default;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Haar-distributed element of U(dim): complex Ginibre matrix, Householder QR,
/// columns rescaled by the phases of diag(R).
UnitaryMatrix haar_unitary(int dim, const RngState& rng);

/// Uniform point on the unit sphere S^{dim-1}.
RealVector random_unit_vector(int dim, std::mt19937_64& engine);

/// vol(RP^n) = pi^((n+1)/2) / Gamma((n+1)/2): half the area of the unit n-sphere.
double vol_rpn(int n);

}  // namespace surplusect
