#pragma once

#include <cstdint>

#include "surplusect/core_geometry.hpp"
#include "surplusect/json_io.hpp"

namespace surplusect {

/// L_t = {[(a1 + i a2) e^{i pi t/3} : (a1 - i a2) e^{i pi t/3} : a3 e^{-2 i pi t/3}]},
/// a in RP^2. As a set L_t depends on t mod 1; pointwise, t + 1 maps a to
/// [a1 : a2 : -a3].
ProjectivePoint clean_loop_point(double t, const RealVector& a);

/// Distance of z from satisfying the membership equations of L_t. Zero
/// exactly on L_t. Points with both leading moduli below `tol` score 0.
double clean_loop_residual(double t, const ProjectivePoint& z, double tol = 1e-9);

bool clean_loop_member(double t, const ProjectivePoint& z, double tol = 1e-9);

/// (|z1|^2, |z2|^2) / (2 sum |z_j|^2). The image is the triangle with
/// vertices (0,0), (1/2,0), (0,1/2), half the standard simplex.
Eigen::Vector2d moment_map(const ProjectivePoint& z);

struct StructureReport {
  double t1 = 0, t2 = 0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  double tol = 0;
  double circle_radius = 0;
  std::int64_t near_fixed_point = 0;  // class (i): within tol of [0:0:1]
  std::int64_t on_circle = 0;         // class (ii): |z3| < circle_radius
  std::int64_t generic = 0;           // class (iii)
  std::int64_t generic_members = 0;
  double min_generic_residual = 0;
  double max_generic_residual = 0;
  bool fixed_point_member = false;  // [0:0:1] in both loops
  bool circle_member = false;       // 64 points of {|z1| = |z2|, z3 = 0} in both loops
  bool passed = false;
};

inline constexpr double kDefaultCircleRadius = 1e-6;

/// Samples L_{t1} uniformly over the sphere double cover of its parameter and
/// checks that no generic sample lies on L_{t2}. Throws InvalidArgument when
/// t1 = t2 mod 1 or samples < 1000. Never throws on a failed check.
StructureReport intersection_structure_report(double t1, double t2, std::int64_t samples,
                                              std::uint64_t seed, double tol = 1e-9,
                                              double circle_radius = kDefaultCircleRadius);

/// As above but throws StructureViolation when the check fails.
StructureReport verify_intersection_structure(double t1, double t2, std::int64_t samples,
                                              std::uint64_t seed, double tol = 1e-9,
                                              double circle_radius = kDefaultCircleRadius);

Json structure_report_to_json(const StructureReport& r);

}  // namespace surplusect
