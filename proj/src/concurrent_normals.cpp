#include "surplusect/concurrent_normals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "surplusect/errors.hpp"
#include "surplusect/icosphere.hpp"

namespace surplusect {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kUnitTolerance = 1e-10;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

AngularJet base_jet(const TrigPolynomial2D& t, double theta) {
  AngularJet j{t.c0, 0.0, 0.0};
  const std::size_t harmonics = std::max(t.cos_coeffs.size(), t.sin_coeffs.size());
  for (std::size_t i = 0; i < harmonics; ++i) {
    const double k = static_cast<double>(i + 1);
    const double a = i < t.cos_coeffs.size() ? t.cos_coeffs[i] : 0.0;
    const double b = i < t.sin_coeffs.size() ? t.sin_coeffs[i] : 0.0;
    const double c = std::cos(k * theta);
    const double s = std::sin(k * theta);
    j.h += a * c + b * s;
    j.d1 += k * (-a * s + b * c);
    j.d2 += -k * k * (a * c + b * s);
  }
  return j;
}

AngularJet base_jet(const Ellipsoid& e, double theta) {
  const double a2 = e.radii[0] * e.radii[0];
  const double b2 = e.radii[1] * e.radii[1];
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double p = a2 * c * c + b2 * s * s;
  const double h = std::sqrt(p);
  const double dp = (b2 - a2) * std::sin(2.0 * theta);
  const double ddp = 2.0 * (b2 - a2) * std::cos(2.0 * theta);
  return AngularJet{h, dp / (2.0 * h), ddp / (2.0 * h) - dp * dp / (4.0 * h * h * h)};
}

void require_unit(const RealVector& v, int dim) {
  if (v.size() != dim) throw DimMismatch("support function: direction has wrong dimension");
  if (!(std::abs(v.norm() - 1.0) <= kUnitTolerance)) throw NotUnit("direction is not a unit vector");
}

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw InvalidArgument("bad number '" + item + "'");
    } catch (const std::logic_error&) {
      throw InvalidArgument("bad number '" + item + "' in body spec");
    }
  }
  return out;
}

}  // namespace

SupportFunction::SupportFunction(std::variant<Ellipsoid, TrigPolynomial2D> kind, int dim)
    : kind_(std::move(kind)), dim_(dim), offset_(RealVector::Zero(dim)) {}

SupportFunction SupportFunction::ellipsoid(std::vector<double> radii) {
  if (radii.size() < 2) throw InvalidArgument("ellipsoid: need at least two radii");
  for (double r : radii) {
    if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("ellipsoid: radii must be positive");
  }
  const int dim = static_cast<int>(radii.size());
  return SupportFunction(Ellipsoid{std::move(radii)}, dim);
}

SupportFunction SupportFunction::trig_polynomial(double c0, std::vector<double> cos_coeffs,
                                                 std::vector<double> sin_coeffs) {
  TrigPolynomial2D t{c0, std::move(cos_coeffs), std::move(sin_coeffs)};
  for (int k = 0; k < kConvexityChecks; ++k) {
    const AngularJet j = base_jet(t, kTwoPi * k / kConvexityChecks);
    if (!(j.h + j.d2 > 0.0)) {
      throw InvalidArgument("trig2d: h + h'' must be positive (body not strictly convex)");
    }
  }
  return SupportFunction(std::move(t), 2);
}

SupportFunction SupportFunction::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw InvalidArgument("body spec must look like kind:values");
  const std::string kind = spec.substr(0, colon);
  const std::vector<double> values = parse_numbers(spec.substr(colon + 1));
  if (kind == "ellipse") {
    if (values.size() != 2) throw InvalidArgument("ellipse needs two radii");
    return ellipsoid(values);
  }
  if (kind == "ellipsoid") return ellipsoid(values);
  if (kind == "disc" || kind == "ball") {
    if (values.size() != 1) throw InvalidArgument(kind + " needs one radius");
    return ellipsoid(std::vector<double>(kind == "disc" ? 2 : 3, values[0]));
  }
  if (kind == "trig2d") {
    if (values.empty() || values.size() % 2 == 0) {
      throw InvalidArgument("trig2d needs c0 followed by (cos, sin) pairs");
    }
    std::vector<double> a, b;
    for (std::size_t i = 1; i + 1 < values.size(); i += 2) {
      a.push_back(values[i]);
      b.push_back(values[i + 1]);
    }
    return trig_polynomial(values[0], a, b);
  }
  throw InvalidArgument("unknown body kind '" + kind + "'");
}

double SupportFunction::value_unchecked(const RealVector& v) const {
  const double base = std::visit(
      Overloaded{[&](const Ellipsoid& e) {
                   double p = 0.0;
                   for (int i = 0; i < dim_; ++i) {
                     const double a = e.radii[static_cast<std::size_t>(i)];
                     p += a * a * v[i] * v[i];
                   }
                   return std::sqrt(p);
                 },
                 [&](const TrigPolynomial2D& t) { return base_jet(t, std::atan2(v[1], v[0])).h; }},
      kind_);
  return base + offset_.dot(v);
}

RealVector SupportFunction::gradient_unchecked(const RealVector& v) const {
  RealVector grad = std::visit(
      Overloaded{[&](const Ellipsoid& e) -> RealVector {
                   RealVector euclid(dim_);
                   double p = 0.0;
                   for (int i = 0; i < dim_; ++i) {
                     const double a2 = e.radii[static_cast<std::size_t>(i)] *
                                       e.radii[static_cast<std::size_t>(i)];
                     euclid[i] = a2 * v[i];
                     p += a2 * v[i] * v[i];
                   }
                   const double h = std::sqrt(p);
                   return euclid / h - h * v;
                 },
                 [&](const TrigPolynomial2D& t) -> RealVector {
                   const double theta = std::atan2(v[1], v[0]);
                   const double d1 = base_jet(t, theta).d1;
                   return RealVector{{-d1 * std::sin(theta), d1 * std::cos(theta)}};
                 }},
      kind_);
  grad += offset_ - offset_.dot(v) * v;
  return grad;
}

AngularJet SupportFunction::jet(double theta) const {
  if (dim_ != 2) throw DimMismatch("angular jet is only defined for planar bodies");
  AngularJet j = std::visit([&](const auto& k) { return base_jet(k, theta); }, kind_);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double ox = offset_[0];
  const double oy = offset_[1];
  j.h += ox * c + oy * s;
  j.d1 += -ox * s + oy * c;
  j.d2 += -ox * c - oy * s;
  return j;
}

SupportFunction SupportFunction::translated(const RealVector& q) const {
  if (q.size() != dim_) throw DimMismatch("translate_body: dimension mismatch");
  if (!q.allFinite()) throw InvalidArgument("translate_body: query point must be finite");
  SupportFunction out = *this;
  out.offset_ = offset_ - q;
  return out;
}

double eval_h(const SupportFunction& h, const RealVector& v) {
  require_unit(v, h.dim());
  return h.value_unchecked(v);
}

RealVector grad_h(const SupportFunction& h, const RealVector& v) {
  require_unit(v, h.dim());
  return h.gradient_unchecked(v);
}

SupportFunction translate_body(const SupportFunction& h, const RealVector& q) {
  return h.translated(q);
}

RealVector boundary_point(const SupportFunction& h, const RealVector& v) {
  require_unit(v, h.dim());
  return h.value_unchecked(v) * v + h.gradient_unchecked(v);
}

int NormalCount::euler_sum() const {
  int sum = 0;
  for (int index : morse_indices) sum += index % 2 == 0 ? 1 : -1;
  return sum;
}

// ---------------------------------------------------------------------------
// Planar counting

namespace {

constexpr int kAngularSamples = 4096;
constexpr double kAngleTolerance = 1e-12;
constexpr double kRootMerge = 1e-8;
constexpr double kMorseThreshold2d = 1e-7;

template <class F>
double bisect(const F& fn, double lo, double hi, double flo) {
  for (int it = 0; it < 200 && hi - lo > kAngleTolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fn(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double wrap_angle(double theta) {
  theta = std::fmod(theta, kTwoPi);
  return theta < 0.0 ? theta + kTwoPi : theta;
}

}  // namespace

NormalCount count_normals_2d(const SupportFunction& h, const RealVector& q) {
  if (h.dim() != 2) throw DimMismatch("count_normals_2d: body must be planar");
  const SupportFunction f = h.translated(q);
  const auto slope = [&](double t) { return f.jet(t).d1; };
  const auto curvature = [&](double t) { return f.jet(t).d2; };

  const double step = kTwoPi / kAngularSamples;
  std::vector<AngularJet> samples(kAngularSamples);
  double slope_scale = 0.0;
  double value_scale = 0.0;
  double min_value = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kAngularSamples; ++k) {
    samples[static_cast<std::size_t>(k)] = f.jet(k * step);
    slope_scale = std::max(slope_scale, std::abs(samples[static_cast<std::size_t>(k)].d1));
    value_scale = std::max(value_scale, std::abs(samples[static_cast<std::size_t>(k)].h));
    min_value = std::min(min_value, samples[static_cast<std::size_t>(k)].h);
  }
  NormalCount result;
  result.in_body = min_value >= 0.0;
  if (slope_scale <= 1e-12 * (1.0 + value_scale)) {
    // every direction is critical: q lies on all normals
    result.degenerate = true;
    return result;
  }

  std::vector<double> roots;
  for (int k = 0; k < kAngularSamples; ++k) {
    const auto& s0 = samples[static_cast<std::size_t>(k)];
    const auto& s1 = samples[static_cast<std::size_t>((k + 1) % kAngularSamples)];
    const double t0 = k * step;
    const double t1 = t0 + step;
    if (s0.d1 == 0.0) {
      roots.push_back(t0);
      continue;
    }
    if (s1.d1 == 0.0) continue;  // picked up as the next interval's left end
    if ((s0.d1 < 0.0) != (s1.d1 < 0.0)) {
      roots.push_back(bisect(slope, t0, t1, s0.d1));
    } else if ((s0.d2 < 0.0) != (s1.d2 < 0.0) && s0.d2 != 0.0) {
      // same sign at both ends but h' turns inside: a close pair of roots may hide here
      const double turn = bisect(curvature, t0, t1, s0.d2);
      const double at_turn = slope(turn);
      if (at_turn == 0.0) {
        roots.push_back(turn);
      } else if ((at_turn < 0.0) != (s0.d1 < 0.0)) {
        roots.push_back(bisect(slope, t0, turn, s0.d1));
        roots.push_back(bisect(slope, turn, t1, at_turn));
      }
    }
  }
  for (double& r : roots) r = wrap_angle(r);
  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double r : roots) {
    if (unique.empty() || r - unique.back() > kRootMerge) unique.push_back(r);
  }
  if (unique.size() > 1 && unique.front() + kTwoPi - unique.back() <= kRootMerge) unique.pop_back();

  int maxima = 0;
  for (double r : unique) {
    const double d2 = curvature(r);
    if (std::abs(d2) < kMorseThreshold2d) result.degenerate = true;
    const int index = d2 < 0.0 ? 1 : 0;
    maxima += index;
    result.critical_directions.push_back(RealVector{{std::cos(r), std::sin(r)}});
    result.morse_indices.push_back(index);
  }
  result.count = static_cast<int>(unique.size());
  if (2 * maxima != result.count) result.degenerate = true;
  return result;
}

// ---------------------------------------------------------------------------
// Counting on S^2

namespace {

using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;

constexpr double kGradientResidual = 1e-10;
constexpr double kCriticalMerge = 1e-6;
constexpr double kHessianDetThreshold = 1e-8;
constexpr double kHessianStep = 1e-5;

struct Chart {
  Vec3 base;
  Eigen::Matrix<double, 3, 2> tangent;
};

Chart make_chart(const Vec3& v) {
  Eigen::Index k = 0;
  v.cwiseAbs().minCoeff(&k);
  const Vec3 e1 = v.cross(Vec3::Unit(k)).normalized();
  Chart c{v, {}};
  c.tangent.col(0) = e1;
  c.tangent.col(1) = v.cross(e1);
  return c;
}

Eigen::Vector2d chart_gradient(const SupportFunction& f, const Chart& c, const Eigen::Vector2d& x) {
  const Vec3 p = c.base + c.tangent * x;
  const double norm = p.norm();
  const RealVector g = f.gradient_unchecked(RealVector(p / norm));
  return c.tangent.transpose() * Vec3(g) / norm;
}

Mat2 chart_hessian(const SupportFunction& f, const Chart& c) {
  Mat2 hess;
  for (int j = 0; j < 2; ++j) {
    Eigen::Vector2d dx = Eigen::Vector2d::Zero();
    dx(j) = kHessianStep;
    hess.col(j) = (chart_gradient(f, c, dx) - chart_gradient(f, c, -dx)) / (2.0 * kHessianStep);
  }
  return 0.5 * (hess + hess.transpose());
}

struct Critical {
  Vec3 direction;
  int index = 0;
  double hessian_det = 0.0;
};

std::optional<Critical> refine_critical(const SupportFunction& f, Vec3 v) {
  for (int it = 0; it < 100; ++it) {
    const Vec3 g = f.gradient_unchecked(RealVector(v));
    const Chart chart = make_chart(v);
    const Mat2 hess = chart_hessian(f, chart);
    if (g.norm() <= kGradientResidual) {
      Eigen::SelfAdjointEigenSolver<Mat2> es(hess);
      const auto ev = es.eigenvalues();
      return Critical{v, (ev(0) < 0.0 ? 1 : 0) + (ev(1) < 0.0 ? 1 : 0), ev(0) * ev(1)};
    }
    const Eigen::Vector2d grad2 = chart.tangent.transpose() * g;
    Eigen::FullPivLU<Mat2> lu(hess);
    if (!lu.isInvertible()) return std::nullopt;
    Eigen::Vector2d step = -lu.solve(grad2);
    const double len = step.norm();
    if (len > 0.05) step *= 0.05 / len;
    v = (v + chart.tangent * step).normalized();
  }
  return std::nullopt;
}

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace

NormalCount count_normals_3d(const SupportFunction& h, const RealVector& q, int subdivisions) {
  if (h.dim() != 3) throw DimMismatch("count_normals_3d: body must be 3-dimensional");
  const SupportFunction f = h.translated(q);
  const Icosphere& mesh = icosphere(subdivisions);
  const std::size_t count = mesh.vertices.size();
  std::vector<double> values(count);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = f.value_unchecked(RealVector(mesh.vertices[i]));
    lo = std::min(lo, values[i]);
    hi = std::max(hi, values[i]);
  }
  NormalCount result;
  result.in_body = lo >= 0.0;
  if (hi - lo <= 1e-12 * (1.0 + std::abs(hi))) {
    result.degenerate = true;
    return result;
  }

  std::vector<Critical> found;
  const double migration_limit = 2.0 * mesh.max_edge_angle;
  for (std::size_t i = 0; i < count; ++i) {
    const auto& ring = mesh.rings[i];
    int below = 0;
    int above = 0;
    int changes = 0;
    int prev_sign = 0;
    int first_sign = 0;
    for (int nb : ring) {
      const double d = values[static_cast<std::size_t>(nb)] - values[i];
      const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
      if (sign > 0) ++above;
      if (sign < 0) ++below;
      if (sign == 0) continue;
      if (first_sign == 0) first_sign = sign;
      if (prev_sign != 0 && sign != prev_sign) ++changes;
      prev_sign = sign;
    }
    if (prev_sign != 0 && first_sign != 0 && prev_sign != first_sign) ++changes;
    const bool extremum = (above == static_cast<int>(ring.size())) ||
                          (below == static_cast<int>(ring.size()));
    if (!extremum && changes < 4) continue;

    const Vec3 seed = mesh.vertices[i];
    const auto crit = refine_critical(f, seed);
    if (!crit) {
      throw MeshTooCoarse("count_normals_3d: Newton refinement did not converge from a mesh seed");
    }
    if (angle_between(seed, crit->direction) > migration_limit) {
      throw MeshTooCoarse("count_normals_3d: refined critical point migrated more than two cells");
    }
    const bool duplicate = std::any_of(found.begin(), found.end(), [&](const Critical& c) {
      return angle_between(c.direction, crit->direction) <= kCriticalMerge;
    });
    if (!duplicate) found.push_back(*crit);
  }

  for (const auto& c : found) {
    if (std::abs(c.hessian_det) < kHessianDetThreshold) result.degenerate = true;
    result.critical_directions.push_back(RealVector(c.direction));
    result.morse_indices.push_back(c.index);
  }
  result.count = static_cast<int>(found.size());
  if (!result.degenerate && result.euler_sum() != 2) {
    throw MeshTooCoarse("count_normals_3d: Morse indices do not sum to chi(S^2) = 2");
  }
  return result;
}

// ---------------------------------------------------------------------------

double CausticGrid::x(int i) const {
  return bbox.xmin + (bbox.xmax - bbox.xmin) * i / (resolution - 1);
}

double CausticGrid::y(int j) const {
  return bbox.ymin + (bbox.ymax - bbox.ymin) * j / (resolution - 1);
}

namespace {

CausticGrid empty_grid(const SupportFunction& h, const BBox& bbox, int resolution) {
  if (h.dim() != 2) throw DimMismatch("caustic_grid: body must be planar");
  if (resolution < 2) throw InvalidArgument("caustic_grid: resolution must be >= 2");
  if (!(bbox.xmax > bbox.xmin) || !(bbox.ymax > bbox.ymin)) {
    throw InvalidArgument("caustic_grid: bbox must have positive extent");
  }
  CausticGrid grid;
  grid.bbox = bbox;
  grid.resolution = resolution;
  const auto cells = static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution);
  grid.counts.assign(cells, 0);
  grid.in_body.assign(cells, 0);
  return grid;
}

void fill_cell(const SupportFunction& h, CausticGrid& grid, int cell) {
  const int i = cell % grid.resolution;
  const int j = cell / grid.resolution;
  const NormalCount nc = count_normals_2d(h, RealVector{{grid.x(i), grid.y(j)}});
  grid.counts[static_cast<std::size_t>(cell)] = nc.degenerate ? -1 : nc.count;
  grid.in_body[static_cast<std::size_t>(cell)] = nc.in_body ? 1 : 0;
}

}  // namespace

CausticGrid caustic_grid(const SupportFunction& h, const BBox& bbox, int resolution) {
  CausticGrid grid = empty_grid(h, bbox, resolution);
  const int cells = resolution * resolution;
#pragma omp parallel for schedule(dynamic, 64)
  for (int cell = 0; cell < cells; ++cell) fill_cell(h, grid, cell);
  return grid;
}

CausticGrid caustic_grid_serial(const SupportFunction& h, const BBox& bbox, int resolution) {
  CausticGrid grid = empty_grid(h, bbox, resolution);
  const int cells = resolution * resolution;
  for (int cell = 0; cell < cells; ++cell) fill_cell(h, grid, cell);
  return grid;
}

std::vector<RealVector> evolute_2d(const SupportFunction& h, int samples) {
  if (h.dim() != 2) throw DimMismatch("evolute_2d: body must be planar");
  if (samples < 1) throw InvalidArgument("evolute_2d: samples must be positive");
  std::vector<RealVector> points;
  points.reserve(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const double t = kTwoPi * k / samples;
    const AngularJet j = h.jet(t);
    const double c = std::cos(t);
    const double s = std::sin(t);
    points.push_back(RealVector{{-j.d2 * c - j.d1 * s, -j.d2 * s + j.d1 * c}});
  }
  return points;
}

void write_caustic_csv(const CausticGrid& grid, std::ostream& out) {
  out << "x,y,count,in_body\n";
  char buf[96];
  for (int j = 0; j < grid.resolution; ++j) {
    for (int i = 0; i < grid.resolution; ++i) {
      const auto cell = static_cast<std::size_t>(j * grid.resolution + i);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%d\n", grid.x(i), grid.y(j), grid.counts[cell],
                    static_cast<int>(grid.in_body[cell]));
      out << buf;
    }
  }
}

void write_caustic_pgm(const CausticGrid& grid, std::ostream& out) {
  out << "P5\n" << grid.resolution << ' ' << grid.resolution << "\n255\n";
  for (int j = grid.resolution - 1; j >= 0; --j) {
    for (int i = 0; i < grid.resolution; ++i) {
      const int c = grid.at(i, j);
      const int level = c < 0 ? 0 : 255 - 25 * std::min(c, 9);
      out.put(static_cast<char>(static_cast<unsigned char>(level)));
    }
  }
}

}  // namespace surplusect
