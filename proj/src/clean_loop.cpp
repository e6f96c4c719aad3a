#include "surplusect/clean_loop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "surplusect/errors.hpp"

namespace surplusect {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kCircleChecks = 64;
constexpr std::uint64_t kCircleSalt = 0xC1AC1EULL;

double circular_offset(double t1, double t2) {
  const double d = std::remainder(t1 - t2, 1.0);
  return std::abs(d);
}

}  // namespace

ProjectivePoint clean_loop_point(double t, const RealVector& a) {
  if (a.size() != 3) throw DimMismatch("clean_loop_point: parameter must have 3 entries");
  if (a.cwiseAbs().maxCoeff() == 0.0) throw ZeroVector("clean_loop_point: zero parameter");
  const Complex rot = std::polar(1.0, kPi * t / 3.0);
  const Complex counter = std::polar(1.0, -2.0 * kPi * t / 3.0);
  ComplexVector z(3);
  z[0] = Complex(a[0], a[1]) * rot;
  z[1] = Complex(a[0], -a[1]) * rot;
  z[2] = a[2] * counter;
  return ProjectivePoint(z);
}

double clean_loop_residual(double t, const ProjectivePoint& z, double tol) {
  if (z.size() != 3) throw DimMismatch("clean_loop_residual: point must lie in CP^2");
  const ComplexVector& r = z.representative();
  const Complex w1 = r[0] * std::polar(1.0, -kPi * t / 3.0);
  const Complex w2 = r[1] * std::polar(1.0, -kPi * t / 3.0);
  const Complex w3 = r[2] * std::polar(1.0, 2.0 * kPi * t / 3.0);
  const double m1 = std::abs(w1);
  const double m2 = std::abs(w2);
  if (m1 <= tol && m2 <= tol) return 0.0;
  const double modulus_gap = std::abs(m1 - m2);
  if (m1 == 0.0 || m2 == 0.0) return modulus_gap;
  // u^2 w2 = conj(w1); either square root gives the same |Im(u w3)|
  const Complex u = std::polar(1.0, 0.5 * (std::arg(std::conj(w1)) - std::arg(w2)));
  return std::max(modulus_gap, std::abs((u * w3).imag()));
}

bool clean_loop_member(double t, const ProjectivePoint& z, double tol) {
  return clean_loop_residual(t, z, tol) <= tol;
}

Eigen::Vector2d moment_map(const ProjectivePoint& z) {
  const ComplexVector& r = z.representative();
  const double total = r.squaredNorm();
  return Eigen::Vector2d(std::norm(r[0]), std::norm(r[1])) / (2.0 * total);
}

StructureReport intersection_structure_report(double t1, double t2, std::int64_t samples,
                                              std::uint64_t seed, double tol,
                                              double circle_radius) {
  if (!std::isfinite(t1) || !std::isfinite(t2)) throw InvalidArgument("t1, t2 must be finite");
  if (circular_offset(t1, t2) == 0.0) {
    throw InvalidArgument("intersection structure: t1 and t2 must differ mod 1");
  }
  if (samples < 1000) throw InvalidArgument("intersection structure: samples must be >= 1000");
  if (!(tol > 0.0)) throw InvalidArgument("intersection structure: tol must be positive");
  if (!(circle_radius > 0.0)) throw InvalidArgument("intersection structure: radius must be positive");

  StructureReport rep;
  rep.t1 = t1;
  rep.t2 = t2;
  rep.samples = samples;
  rep.seed = seed;
  rep.tol = tol;
  rep.circle_radius = circle_radius;

  const ProjectivePoint fixed(ComplexVector::Unit(3, 2));
  rep.fixed_point_member = clean_loop_member(t1, fixed, tol) && clean_loop_member(t2, fixed, tol);

  rep.circle_member = true;
  auto circle_engine = RngState{seed, 0}.derive(kCircleSalt).engine();
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  for (int k = 0; k < kCircleChecks; ++k) {
    ComplexVector z(3);
    z << std::polar(1.0, angle(circle_engine)), std::polar(1.0, angle(circle_engine)), 0.0;
    const ProjectivePoint p(z);
    if (!clean_loop_member(t1, p, tol) || !clean_loop_member(t2, p, tol)) rep.circle_member = false;
  }

  enum : char { kFixed, kCircle, kGeneric };
  std::vector<char> cls(static_cast<std::size_t>(samples));
  std::vector<double> residual(static_cast<std::size_t>(samples), 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < samples; ++k) {
    auto engine = RngState{seed, static_cast<std::uint64_t>(k)}.engine();
    const ProjectivePoint z = clean_loop_point(t1, random_unit_vector(3, engine));
    const auto idx = static_cast<std::size_t>(k);
    if (projective_distance(z, fixed) <= tol) {
      cls[idx] = kFixed;
    } else if (std::abs(z[2]) < circle_radius) {
      cls[idx] = kCircle;
    } else {
      cls[idx] = kGeneric;
      residual[idx] = clean_loop_residual(t2, z, tol);
    }
  }

  rep.min_generic_residual = std::numeric_limits<double>::infinity();
  rep.max_generic_residual = 0.0;
  for (std::size_t k = 0; k < cls.size(); ++k) {
    switch (cls[k]) {
      case kFixed:
        ++rep.near_fixed_point;
        break;
      case kCircle:
        ++rep.on_circle;
        break;
      default:
        ++rep.generic;
        if (residual[k] <= tol) ++rep.generic_members;
        rep.min_generic_residual = std::min(rep.min_generic_residual, residual[k]);
        rep.max_generic_residual = std::max(rep.max_generic_residual, residual[k]);
    }
  }
  if (rep.generic == 0) rep.min_generic_residual = 0.0;
  rep.passed = rep.generic_members == 0 && rep.fixed_point_member && rep.circle_member;
  return rep;
}

StructureReport verify_intersection_structure(double t1, double t2, std::int64_t samples,
                                              std::uint64_t seed, double tol,
                                              double circle_radius) {
  StructureReport rep = intersection_structure_report(t1, t2, samples, seed, tol, circle_radius);
  if (!rep.passed) {
    throw StructureViolation("clean loop structure check failed: " +
                             dump_json(structure_report_to_json(rep), -1));
  }
  return rep;
}

Json structure_report_to_json(const StructureReport& r) {
  return Json{{"t1", r.t1},
              {"t2", r.t2},
              {"samples", r.samples},
              {"seed", r.seed},
              {"tol", r.tol},
              {"circle_radius", r.circle_radius},
              {"classes",
               {{"fixed_point", r.near_fixed_point}, {"circle", r.on_circle}, {"generic", r.generic}}},
              {"generic_members", r.generic_members},
              {"min_generic_residual", r.min_generic_residual},
              {"max_generic_residual", r.max_generic_residual},
              {"fixed_point_member", r.fixed_point_member},
              {"circle_member", r.circle_member},
              {"passed", r.passed}};
}

}  // namespace surplusect
