#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "surplusect/concurrent_normals.hpp"
#include "surplusect/errors.hpp"
#include "surplusect/icosphere.hpp"

using namespace surplusect;

namespace {

RealVector polar(double theta) { return RealVector{{std::cos(theta), std::sin(theta)}}; }

std::vector<SupportFunction> test_bodies() {
  return {SupportFunction::parse("ellipse:2,1"), SupportFunction::parse("ellipsoid:1,1.5,2"),
          SupportFunction::parse("trig2d:1,0,0,0,0,0.05,0"),
          SupportFunction::parse("trig2d:1,0,0,0.1,0,0,0.03"),
          SupportFunction::parse("ellipsoid:1,1.5,2").translated(RealVector{{0.1, -0.2, 0.3}})};
}

RealVector tangent_direction(const RealVector& v, std::mt19937_64& engine) {
  RealVector t = random_unit_vector(static_cast<int>(v.size()), engine);
  t -= t.dot(v) * v;
  return t.normalized();
}

}  // namespace

TEST(SupportFunction, EllipseValues) {
  const SupportFunction h = SupportFunction::parse("ellipse:2,1");
  EXPECT_NEAR(eval_h(h, polar(0.0)), 2.0, 1e-15);
  EXPECT_NEAR(eval_h(h, polar(std::numbers::pi / 2)), 1.0, 1e-15);
  for (double t : {0.3, 1.1, 2.5, 4.0}) {
    const RealVector v = polar(t);
    EXPECT_NEAR(eval_h(h, v), oracle::ellipse_support_bruteforce(2, 1, v[0], v[1]), 1e-9);
  }
  EXPECT_THROW(eval_h(h, RealVector{{1.0, 1.0}}), NotUnit);
  EXPECT_THROW(eval_h(h, RealVector{{1.0, 0.0, 0.0}}), DimMismatch);
}

TEST(SupportFunction, ParseErrors) {
  EXPECT_THROW(SupportFunction::parse("ellipse:2"), InvalidArgument);
  EXPECT_THROW(SupportFunction::parse("ellipse:2,-1"), InvalidArgument);
  EXPECT_THROW(SupportFunction::parse("blob:1"), InvalidArgument);
  EXPECT_THROW(SupportFunction::parse("trig2d:1,0"), InvalidArgument);
  EXPECT_THROW(SupportFunction::parse("trig2d:1,0,0,0.5,0"), InvalidArgument);  // h + h'' < 0 somewhere
  EXPECT_THROW(SupportFunction::parse("ellipse:2,x"), InvalidArgument);
  EXPECT_EQ(SupportFunction::parse("disc:1").dim(), 2);
}

TEST(SupportFunction, GradientMatchesFiniteDifferences) {
  auto engine = RngState{4, 4}.engine();
  const double step = 1e-6;
  for (const auto& h : test_bodies()) {
    for (int k = 0; k < 200; ++k) {
      const RealVector v = random_unit_vector(h.dim(), engine);
      const RealVector t = tangent_direction(v, engine);
      const RealVector g = grad_h(h, v);
      EXPECT_NEAR(g.dot(v), 0.0, 1e-12);
      // geodesic central difference along t
      const double fd = (h.value_unchecked(std::cos(step) * v + std::sin(step) * t) -
                         h.value_unchecked(std::cos(step) * v - std::sin(step) * t)) /
                        (2.0 * step);
      EXPECT_NEAR(g.dot(t), fd, 1e-6);
    }
  }
}

TEST(SupportFunction, AngularJetMatchesFiniteDifferences) {
  const double step = 1e-4;
  for (const auto& h : test_bodies()) {
    if (h.dim() != 2) continue;
    const SupportFunction shifted = h.translated(RealVector{{0.2, -0.1}});
    for (double t = 0.05; t < 6.2; t += 0.37) {
      const AngularJet j = shifted.jet(t);
      const double hm = shifted.jet(t - step).h;
      const double hp = shifted.jet(t + step).h;
      EXPECT_NEAR(j.h, shifted.value_unchecked(polar(t)), 1e-14);
      EXPECT_NEAR(j.d1, (hp - hm) / (2 * step), 1e-7);
      EXPECT_NEAR(j.d2, (hp - 2 * j.h + hm) / (step * step), 1e-5);
    }
  }
}

TEST(SupportFunction, BoundaryPointOnEllipseAndOutwardNormal) {
  const SupportFunction h = SupportFunction::parse("ellipsoid:1,1.5,2");
  auto engine = RngState{6, 0}.engine();
  for (int k = 0; k < 100; ++k) {
    const RealVector v = random_unit_vector(3, engine);
    const RealVector x = boundary_point(h, v);
    EXPECT_NEAR(x[0] * x[0] + x[1] * x[1] / 2.25 + x[2] * x[2] / 4, 1.0, 1e-12);
    EXPECT_NEAR(x.dot(v), eval_h(h, v), 1e-12);
  }
}

TEST(SupportFunction, TranslationShiftsBoundary) {
  const SupportFunction h = SupportFunction::parse("trig2d:1,0,0,0.1,0,0,0.03");
  const RealVector q{{0.3, -0.4}};
  const SupportFunction moved = translate_body(h, q);
  for (double t = 0; t < 6.28; t += 0.5) {
    EXPECT_NEAR(eval_h(moved, polar(t)), eval_h(h, polar(t)) - q.dot(polar(t)), 1e-14);
    EXPECT_LT((boundary_point(moved, polar(t)) - (boundary_point(h, polar(t)) - q)).norm(), 1e-13);
  }
  EXPECT_THROW(translate_body(h, RealVector::Zero(3)), DimMismatch);
}

TEST(Normals2d, EllipseCentreHasFour) {
  const NormalCount c = count_normals_2d(SupportFunction::parse("ellipse:2,1"), RealVector::Zero(2));
  EXPECT_EQ(c.count, 4);
  EXPECT_FALSE(c.degenerate);
  EXPECT_TRUE(c.in_body);
  EXPECT_EQ(c.euler_sum(), 0);
}

TEST(Normals2d, DiscCentreIsDegenerate) {
  const NormalCount c = count_normals_2d(SupportFunction::parse("disc:1"), RealVector::Zero(2));
  EXPECT_TRUE(c.degenerate);
}

TEST(Normals2d, MatchesBruteForceOnEllipse) {
  auto engine = RngState{8, 0}.engine();
  std::uniform_real_distribution<double> ux(-2.5, 2.5), uy(-1.5, 1.5);
  const SupportFunction h = SupportFunction::parse("ellipse:2,1");
  int checked = 0;
  for (int k = 0; k < 300; ++k) {
    const double x = ux(engine);
    const double y = uy(engine);
    if (std::abs(oracle::astroid_level(2, 1, x, y)) < 1e-3) continue;
    const NormalCount c = count_normals_2d(h, RealVector{{x, y}});
    ASSERT_FALSE(c.degenerate) << x << ' ' << y;
    EXPECT_EQ(c.count, oracle::ellipse_normals_bruteforce(2, 1, x, y)) << x << ' ' << y;
    EXPECT_EQ(c.count, oracle::astroid_level(2, 1, x, y) < 0 ? 4 : 2);
    EXPECT_EQ(c.euler_sum(), 0);
    ++checked;
  }
  EXPECT_GT(checked, 290);
}

TEST(Normals2d, MatchesBruteForceOnTrigBodies) {
  const std::vector<std::pair<std::string, std::function<double(double)>>> bodies{
      {"trig2d:1,0,0,0,0,0.05,0", [](double t) { return 1 + 0.05 * std::cos(3 * t); }},
      {"trig2d:1,0,0,0.1,0,0,0.03",
       [](double t) { return 1 + 0.1 * std::cos(2 * t) + 0.03 * std::sin(3 * t); }}};
  auto engine = RngState{9, 0}.engine();
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  for (const auto& [spec, fn] : bodies) {
    const SupportFunction h = SupportFunction::parse(spec);
    for (int k = 0; k < 60; ++k) {
      const double x = u(engine);
      const double y = u(engine);
      const NormalCount c = count_normals_2d(h, RealVector{{x, y}});
      if (c.degenerate) continue;
      EXPECT_EQ(c.count, oracle::support_normals_bruteforce(fn, x, y)) << spec << ' ' << x << ' ' << y;
    }
  }
  const NormalCount centre =
      count_normals_2d(SupportFunction::parse("trig2d:1,0,0,0,0,0.05,0"), RealVector::Zero(2));
  EXPECT_EQ(centre.count, 6);
}

TEST(Normals2d, CloseRootPairsAreResolved) {
  // just inside the cusp (1.5, 0) of the astroid the two extra normals are very close
  const SupportFunction h = SupportFunction::parse("ellipse:2,1");
  for (double x : {1.49, 1.499, 1.4999}) {
    ASSERT_LT(oracle::astroid_level(2, 1, x, 1e-8), 0.0);
    EXPECT_EQ(count_normals_2d(h, RealVector{{x, 1e-8}}).count, 4) << x;
    EXPECT_EQ(oracle::ellipse_normals_bruteforce(2, 1, x, 1e-8, 2000000), 4) << x;
  }
  EXPECT_EQ(count_normals_2d(h, RealVector{{1.501, 0.0}}).count, 2);
}

TEST(Evolute, MatchesCurvatureCentres) {
  const auto pts = evolute_2d(SupportFunction::parse("ellipse:2,1"), 720);
  ASSERT_EQ(pts.size(), 720u);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double theta = 2 * std::numbers::pi * static_cast<double>(k) / 720;
    const double t = std::atan2(1 * std::sin(theta), 2 * std::cos(theta));
    const auto ref = oracle::ellipse_curvature_centre(2, 1, t);
    EXPECT_NEAR(pts[k][0], ref[0], 1e-12);
    EXPECT_NEAR(pts[k][1], ref[1], 1e-12);
    EXPECT_NEAR(oracle::astroid_level(2, 1, pts[k][0], pts[k][1]), 0.0, 1e-9);
  }
}

TEST(Icosphere, Shape) {
  for (int s = 0; s <= 4; ++s) {
    const Icosphere& m = icosphere(s);
    ASSERT_EQ(m.vertices.size(), static_cast<std::size_t>(10 * (1 << (2 * s)) + 2));
    std::size_t degree_sum = 0;
    for (const auto& r : m.rings) {
      EXPECT_TRUE(r.size() == 5 || r.size() == 6);
      degree_sum += r.size();
    }
    // V - E + F = 2 with F = 2E/3
    const std::size_t edges = degree_sum / 2;
    EXPECT_EQ(static_cast<long>(m.vertices.size()) - static_cast<long>(edges) +
                  static_cast<long>(2 * edges / 3),
              2);
  }
  const Icosphere& m = icosphere(1);
  for (int axis = 0; axis < 3; ++axis) {
    const Eigen::Vector3d e = Eigen::Vector3d::Unit(axis);
    bool found = false;
    for (const auto& v : m.vertices) found = found || (v - e).norm() < 1e-14;
    EXPECT_TRUE(found) << axis;
  }
}

TEST(Normals3d, EllipsoidCentreHasSix) {
  const NormalCount c =
      count_normals_3d(SupportFunction::parse("ellipsoid:1,1.5,2"), RealVector::Zero(3));
  EXPECT_EQ(c.count, 6);
  EXPECT_FALSE(c.degenerate);
  EXPECT_EQ(c.euler_sum(), 2);
  std::vector<int> idx = c.morse_indices;
  std::sort(idx.begin(), idx.end());
  EXPECT_EQ(idx, (std::vector<int>{0, 0, 1, 1, 2, 2}));
  for (std::size_t i = 0; i < c.critical_directions.size(); ++i) {
    // critical directions are the axes; the shortest axis gives the minima
    const RealVector& v = c.critical_directions[i];
    EXPECT_NEAR(v.cwiseAbs().maxCoeff(), 1.0, 1e-9);
    Eigen::Index axis = 0;
    v.cwiseAbs().maxCoeff(&axis);
    EXPECT_EQ(c.morse_indices[i], static_cast<int>(axis));
  }
}

TEST(Normals3d, EulerSumAlwaysTwo) {
  const SupportFunction h = SupportFunction::parse("ellipsoid:1,1.5,2");
  auto engine = RngState{12, 0}.engine();
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int k = 0; k < 10; ++k) {
    const RealVector q{{u(engine), u(engine), u(engine)}};
    const NormalCount c = count_normals_3d(h, q, 5);
    if (c.degenerate) continue;
    EXPECT_EQ(c.euler_sum(), 2);
    EXPECT_EQ(c.count % 2, 0);
    EXPECT_GE(c.count, 2);
  }
}

TEST(Normals3d, BallCentreDegenerateAndOffCentreTwo) {
  const SupportFunction ball = SupportFunction::parse("ball:1");
  EXPECT_TRUE(count_normals_3d(ball, RealVector::Zero(3)).degenerate);
  const NormalCount c = count_normals_3d(ball, RealVector{{0.2, 0.1, -0.3}});
  EXPECT_EQ(c.count, 2);
  EXPECT_EQ(c.euler_sum(), 2);
}

TEST(CausticGrid, SerialAndParallelAgreeAndWritersWork) {
  const SupportFunction h = SupportFunction::parse("ellipse:2,1");
  const BBox box{-2, -1, 2, 1};
  const CausticGrid a = caustic_grid(h, box, 21);
  const CausticGrid b = caustic_grid_serial(h, box, 21);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_EQ(a.in_body, b.in_body);
  EXPECT_DOUBLE_EQ(a.x(0), -2.0);
  EXPECT_DOUBLE_EQ(a.x(20), 2.0);
  EXPECT_EQ(a.at(10, 10), 4);
  EXPECT_EQ(a.at(0, 0), 2);

  std::ostringstream csv;
  write_caustic_csv(a, csv);
  const std::string text = csv.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 21 * 21 + 1);
  std::ostringstream pgm;
  write_caustic_pgm(a, pgm);
  const std::string img = pgm.str();
  EXPECT_EQ(img.substr(0, 3), "P5\n");
  EXPECT_EQ(img.size(), std::string("P5\n21 21\n255\n").size() + 21 * 21);
  EXPECT_THROW(caustic_grid(h, box, 1), InvalidArgument);
  EXPECT_THROW(caustic_grid(SupportFunction::parse("ball:1"), box, 5), DimMismatch);
}
