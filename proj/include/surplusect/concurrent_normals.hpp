#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "surplusect/core_geometry.hpp"

namespace surplusect {

/// Ellipsoid sum x_i^2 / a_i^2 <= 1 in any dimension; h(v) = sqrt(sum a_i^2 v_i^2).
struct Ellipsoid {
  std::vector<double> radii;
};

/// Planar body with h(theta) = c0 + sum_k a_k cos(k theta) + b_k sin(k theta),
/// harmonic k = index + 1.
struct TrigPolynomial2D {
  double c0 = 1.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
};

/// h, h', h'' with respect to the polar angle (planar bodies only).
struct AngularJet {
  double h = 0;
  double d1 = 0;
  double d2 = 0;
};

/// Support function of a smooth convex body, optionally translated: the
/// represented body is base + offset, so h(v) = h_base(v) + <offset, v>.
class SupportFunction {
 public:
  static constexpr int kConvexityChecks = 4096;

  /// Throws InvalidArgument on an empty or non-positive radius list.
  static SupportFunction ellipsoid(std::vector<double> radii);

  /// Throws InvalidArgument unless h + h'' > 0 at kConvexityChecks angles.
  static SupportFunction trig_polynomial(double c0, std::vector<double> cos_coeffs,
                                         std::vector<double> sin_coeffs);

  /// Parses "ellipse:2,1", "ellipsoid:1,1.5,2", "disc:r" or "trig2d:c0,a1,b1,a2,b2,...".
  static SupportFunction parse(const std::string& spec);

  int dim() const { return dim_; }
  const RealVector& offset() const { return offset_; }
  bool is_ellipsoid() const { return std::holds_alternative<Ellipsoid>(kind_); }
  const std::variant<Ellipsoid, TrigPolynomial2D>& kind() const { return kind_; }

  /// Unchecked evaluations on the unit sphere.
  double value_unchecked(const RealVector& v) const;
  RealVector gradient_unchecked(const RealVector& v) const;

  /// Angular derivatives at polar angle theta (dim 2 only).
  AngularJet jet(double theta) const;

  /// Body C - q, i.e. h(v) - <q, v>.
  SupportFunction translated(const RealVector& q) const;

 private:
  SupportFunction(std::variant<Ellipsoid, TrigPolynomial2D> kind, int dim);

  std::variant<Ellipsoid, TrigPolynomial2D> kind_;
  int dim_ = 0;
  RealVector offset_;
};

/// h(v); throws NotUnit unless | |v| - 1 | <= 1e-10.
double eval_h(const SupportFunction& h, const RealVector& v);

/// Riemannian gradient on the sphere (tangential part of the Euclidean
/// gradient of the 1-homogeneous extension); throws NotUnit.
RealVector grad_h(const SupportFunction& h, const RealVector& v);

/// Support function of C - q. Throws DimMismatch.
SupportFunction translate_body(const SupportFunction& h, const RealVector& q);

/// phi(v) = h(v) v + grad h(v): the boundary point with inward normal -v.
RealVector boundary_point(const SupportFunction& h, const RealVector& v);

struct NormalCount {
  int count = 0;
  std::vector<RealVector> critical_directions;
  std::vector<int> morse_indices;
  bool degenerate = false;
  /// min_v h(v) - <q, v> >= 0 over the sampled directions.
  bool in_body = false;

  int euler_sum() const;
};

/// Critical points of theta -> h(theta) - q1 cos(theta) - q2 sin(theta).
NormalCount count_normals_2d(const SupportFunction& h, const RealVector& q);

inline constexpr int kDefaultSubdivisions = 6;

/// Critical points of h(v) - <q, v> on S^2, seeded from an icosphere.
/// Throws MeshTooCoarse when refinement migrates away from its seed or the
/// Euler characteristic does not close.
NormalCount count_normals_3d(const SupportFunction& h, const RealVector& q,
                             int subdivisions = kDefaultSubdivisions);

struct BBox {
  double xmin = 0, ymin = 0, xmax = 0, ymax = 0;
};

/// counts(i, j) at x = xmin + i * dx, y = ymin + j * dy; -1 marks degenerate cells.
struct CausticGrid {
  BBox bbox;
  int resolution = 0;
  std::vector<int> counts;     // row-major, index j * resolution + i
  std::vector<char> in_body;

  double x(int i) const;
  double y(int j) const;
  int at(int i, int j) const { return counts[static_cast<std::size_t>(j * resolution + i)]; }
};

CausticGrid caustic_grid(const SupportFunction& h, const BBox& bbox, int resolution);
CausticGrid caustic_grid_serial(const SupportFunction& h, const BBox& bbox, int resolution);

/// Centres of curvature c(theta) = (-h'' cos - h' sin, -h'' sin + h' cos) at
/// `samples` uniform angles.
std::vector<RealVector> evolute_2d(const SupportFunction& h, int samples);

/// CSV with columns x,y,count,in_body.
void write_caustic_csv(const CausticGrid& grid, std::ostream& out);

/// Binary PGM (P5). Top row is ymax. Gray level 255 - 25 * min(count, 9);
/// degenerate cells are 0.
void write_caustic_pgm(const CausticGrid& grid, std::ostream& out);

}  // namespace surplusect
