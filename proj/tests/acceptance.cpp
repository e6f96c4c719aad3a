// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "surplusect/bounds_tables.hpp"
#include "surplusect/clean_loop.hpp"
#include "surplusect/concurrent_normals.hpp"
#include "surplusect/crofton_statistics.hpp"
#include "surplusect/errors.hpp"
#include "surplusect/intersection_counting.hpp"
#include "surplusect/parallel.hpp"

using namespace surplusect;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Shared n = 2 run used by the distribution, mean and surplusection criteria.
const Tally& n2_tally() {
  static const Tally t = run_clifford_trials(2, 100000, 42);
  return t;
}

Outcome bounds_table() {
  const auto rows = table1(6);
  double worst = 0.0;
  std::string misses;
  for (const auto& ref : oracle::kTable1) {
    const auto& row = rows[static_cast<std::size_t>(ref.n - 1)];
    const std::array<std::pair<const char*, std::pair<double, double>>, 3> cells{
        {{"alston_amorim", {row.alston_amorim, ref.alston_amorim}},
         {"goldstein", {row.goldstein, ref.goldstein}},
         {"vol_clifford", {row.vol_clifford, ref.vol_clifford}}}};
    for (const auto& [name, vals] : cells) {
      const double err = std::abs(vals.first - vals.second);
      worst = std::max(worst, err);
      if (err > 1e-4) misses += fmt(" n=%d %s computed %.5f vs %.5f;", ref.n, name, vals.first, vals.second);
    }
  }
  if (misses.empty()) return {true, fmt("18 cells, max abs error %.2e", worst)};
  return {false, "mismatched cells:" + misses};
}

Outcome n2_distribution() {
  const Tally& t = n2_tally();
  const DistributionReport r = distribution_report(t);
  bool support_ok = true;
  for (const auto& [count, occ] : t.histogram) support_ok = support_ok && (count == 2 || count == 4);
  const double p4 = r.probabilities.count(4) ? r.probabilities.at(4).estimate : 0.0;
  const double p2 = r.probabilities.count(2) ? r.probabilities.at(2).estimate : 0.0;
  const double pvalue = chi_square_consistency(t, clifford_n2_law());
  const bool pass = support_ok && p4 >= 0.8088 && p4 <= 0.8188 && std::abs(p2 + p4 - 1.0) < 1e-12 &&
                    pvalue > 0.01;
  return {pass, fmt("p4 = %.5f (exact %.5f), p2 + p4 = %.12f, support %s, chi-square p = %.4f",
                    p4, oracle::p4_exact(), p2 + p4, support_ok ? "{2,4}" : "BAD", pvalue)};
}

Outcome crofton_mean() {
  const DistributionReport r2 = distribution_report(n2_tally());
  const double z2 = (r2.mean - oracle::mean_n2_exact()) / r2.mean_standard_error;
  const auto start = std::chrono::steady_clock::now();
  const Tally t3 = run_clifford_trials(3, 20000, 43);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const DistributionReport r3 = distribution_report(t3);
  const double z3 = (r3.mean - 2 * std::numbers::pi) / r3.mean_standard_error;
  const bool pass = std::abs(z2) <= 4 && std::abs(z3) <= 4 && secs < 600;
  return {pass, fmt("n=2 mean %.5f (z = %+.2f); n=3 mean %.5f (z = %+.2f) in %.0f s", r2.mean, z2,
                    r3.mean, z3, secs)};
}

Outcome pencil_vs_multistart() {
  int disagreements = 0, mutual = 0, compared = 0;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const QuadricSystem sys = clifford_quadric_system(haar_unitary(3, RngState{4242, k}));
    const CountResult exact = count_conic_pencil(sys);
    const CountResult ms = count_clifford_multistart(sys, kDefaultStartsPerDim, RngState{4343, k});
    const bool flag_exact = exact.degenerate || !exact.transverse;
    const bool flag_ms = ms.degenerate || !ms.transverse;
    if (flag_exact && flag_ms) {
      ++mutual;
      continue;
    }
    ++compared;
    if (flag_exact != flag_ms || exact.count != ms.count ||
        !same_witness_sets(exact.witnesses, ms.witnesses)) {
      ++disagreements;
    }
  }
  return {disagreements == 0, fmt("%d compared, %d disagreements, %d mutually flagged", compared,
                                  disagreements, mutual)};
}

Outcome rpn_calibration() {
  bool pass = true;
  std::string detail;
  for (int n = 1; n <= 3; ++n) {
    int exact = 0, degenerate = 0, other = 0;
    for (std::uint64_t k = 0; k < 1000; ++k) {
      const RpnCount r = count_rpn_rpn(haar_unitary(n + 1, RngState{777, k}));
      if (r.degenerate) {
        ++degenerate;
      } else if (r.count == n + 1) {
        ++exact;
      } else {
        ++other;
      }
    }
    pass = pass && exact >= 999 && other == 0;
    detail += fmt("n=%d: %d/1000 exact, %d degenerate; ", n, exact, degenerate);
  }
  return {pass, detail};
}

Outcome surplusection() {
  const DistributionReport r = distribution_report(n2_tally());
  const double p4 = r.probabilities.at(4).estimate;
  const double target = oracle::mean_n2_exact() - 2.0;
  const double z = (r.mean_surplusection - target) / r.mean_standard_error;
  const bool pass = std::abs(r.surplusection_locus_measure - p4) < 1e-15 &&
                    std::abs(r.mean_surplusection - (r.mean - 2.0)) < 1e-15 && r.min_intersections == 2 &&
                    std::abs(z) <= 4;
  return {pass, fmt("locus measure %.5f = p4, mean surplusection %.5f vs %.5f (z = %+.2f)",
                    r.surplusection_locus_measure, r.mean_surplusection, target, z)};
}

Outcome concurrent_normals() {
  const SupportFunction ellipse = SupportFunction::parse("ellipse:2,1");
  const int res = 201;
  const auto start = std::chrono::steady_clock::now();
  const CausticGrid grid = caustic_grid(ellipse, BBox{-2, -1, 2, 1}, res);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double hx = 0.5 * (grid.x(1) - grid.x(0));
  const double hy = 0.5 * (grid.y(1) - grid.y(0));
  int interior_ok = 0, exterior_ok = 0, boundary = 0, boundary_degenerate = 0, wrong = 0;
  for (int j = 0; j < res; ++j) {
    for (int i = 0; i < res; ++i) {
      // a cell is on the evolute when the astroid level changes sign over it
      double lo = 1e300, hi = -1e300;
      for (int a = -2; a <= 2; ++a) {
        for (int b = -2; b <= 2; ++b) {
          const double g = oracle::astroid_level(2, 1, grid.x(i) + a * hx / 2, grid.y(j) + b * hy / 2);
          lo = std::min(lo, g);
          hi = std::max(hi, g);
        }
      }
      const int c = grid.at(i, j);
      if (lo <= 0.0 && hi >= 0.0) {
        ++boundary;
        if (c == -1) ++boundary_degenerate;
        if (c != -1 && c != 2 && c != 4) ++wrong;
      } else if (hi < 0.0) {
        c == 4 ? ++interior_ok : ++wrong;
      } else {
        c == 2 ? ++exterior_ok : ++wrong;
      }
    }
  }
  const NormalCount e3 =
      count_normals_3d(SupportFunction::parse("ellipsoid:1,1.5,2"), RealVector::Zero(3));
  const bool pass = wrong == 0 && interior_ok > 0 && exterior_ok > 0 && secs < 120 && e3.count == 6 &&
                    !e3.degenerate && e3.euler_sum() == 2;
  return {pass, fmt("grid %dx%d in %.1f s: %d inside = 4, %d outside = 2, %d evolute cells (%d "
                    "degenerate), %d wrong; ellipsoid count %d, index sum %d",
                    res, res, secs, interior_ok, exterior_ok, boundary, boundary_degenerate, wrong,
                    e3.count, e3.euler_sum())};
}

Outcome clean_loop() {
  auto engine = RngState{8888, 0}.engine();
  std::uniform_real_distribution<double> ut(0.0, 1.0);
  const auto start = std::chrono::steady_clock::now();
  int passed = 0;
  double min_residual = 1e300;
  for (int k = 0; k < 20; ++k) {
    const double t1 = ut(engine);
    double t2 = ut(engine);
    while (t2 == t1) t2 = ut(engine);
    try {
      const StructureReport r = verify_intersection_structure(t1, t2, 10000, static_cast<std::uint64_t>(k));
      ++passed;
      min_residual = std::min(min_residual, r.min_generic_residual);
    } catch (const StructureViolation& e) {
      std::fprintf(stderr, "%s\n", e.what());
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {passed == 20 && secs < 30,
          fmt("%d/20 pairs pass in %.1f s, smallest generic residual %.3e", passed, secs, min_residual)};
}

Outcome property_suites() {
  std::vector<std::string> failed;
  // gradient against geodesic finite differences
  double grad_err = 0.0;
  auto engine = RngState{31, 0}.engine();
  for (const char* spec : {"ellipse:2,1", "ellipsoid:1,1.5,2", "trig2d:1,0,0,0.1,0,0,0.03"}) {
    const SupportFunction h = SupportFunction::parse(spec);
    for (int k = 0; k < 200; ++k) {
      const RealVector v = random_unit_vector(h.dim(), engine);
      RealVector t = random_unit_vector(h.dim(), engine);
      t = (t - t.dot(v) * v).normalized();
      const double s = 1e-6;
      const double fd = (h.value_unchecked(std::cos(s) * v + std::sin(s) * t) -
                         h.value_unchecked(std::cos(s) * v - std::sin(s) * t)) /
                        (2 * s);
      grad_err = std::max(grad_err, std::abs(grad_h(h, v).dot(t) - fd));
    }
  }
  if (grad_err > 1e-6) failed.push_back("gradient");

  // Euler characteristic: S^1 sums to 0, S^2 to 2
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  bool euler = true;
  const SupportFunction ellipse = SupportFunction::parse("ellipse:2,1");
  for (int k = 0; k < 200; ++k) {
    const NormalCount c = count_normals_2d(ellipse, RealVector{{3 * u(engine), 2 * u(engine)}});
    if (!c.degenerate) euler = euler && c.euler_sum() == 0;
  }
  const SupportFunction ellipsoid = SupportFunction::parse("ellipsoid:1,1.5,2");
  for (int k = 0; k < 5; ++k) {
    const NormalCount c = count_normals_3d(ellipsoid, RealVector{{u(engine), u(engine), u(engine)}});
    if (!c.degenerate) euler = euler && c.euler_sum() == 2;
  }
  if (!euler) failed.push_back("euler");

  // invariance of counts under the symmetry groups of the two Lagrangians
  bool invariant = true;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const UnitaryMatrix g = haar_unitary(3, RngState{55, k});
    const CountResult base = count_conic_pencil(clifford_quadric_system(g));
    RealVector phases(3);
    for (int i = 0; i < 3; ++i) phases[i] = 6 * u(engine);
    const RealMatrix o = Eigen::HouseholderQR<RealMatrix>(
                             haar_unitary(3, RngState{56, k}).matrix().real())
                             .householderQ();
    const UnitaryMatrix h = UnitaryMatrix::diagonal(phases) * g * UnitaryMatrix(o.cast<Complex>());
    const CountResult moved = count_conic_pencil(clifford_quadric_system(h));
    if (!base.degenerate && !moved.degenerate) invariant = invariant && base.count == moved.count;
  }
  if (!invariant) failed.push_back("invariance");

  // determinism under thread count
  bool deterministic = true;
  const Tally serial = run_clifford_trials_serial(2, 2000, 5);
  const CausticGrid grid_serial = caustic_grid_serial(ellipse, BBox{-2, -1, 2, 1}, 41);
  for (int threads = 1; threads <= 4; ++threads) {
    set_thread_count(threads);
    deterministic = deterministic && run_clifford_trials(2, 2000, 5).histogram == serial.histogram;
    deterministic = deterministic && caustic_grid(ellipse, BBox{-2, -1, 2, 1}, 41).counts == grid_serial.counts;
  }
  set_thread_count(0);
  if (!deterministic) failed.push_back("thread determinism");

  std::string detail = fmt("max gradient error %.2e; euler %s; invariance %s; threads 1-4 %s", grad_err,
                           euler ? "ok" : "FAIL", invariant ? "ok" : "FAIL",
                           deterministic ? "identical" : "DIFFER");
  return {failed.empty(), detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"volume bound table", bounds_table},
      {"n=2 count distribution", n2_distribution},
      {"mean intersection count", crofton_mean},
      {"pencil vs multistart", pencil_vs_multistart},
      {"RP^n calibration", rpn_calibration},
      {"surplusection statistics", surplusection},
      {"concurrent normals", concurrent_normals},
      {"clean loop structure", clean_loop},
      {"property suites", property_suites},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("criterion %zu %s %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
