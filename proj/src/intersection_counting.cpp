#include "surplusect/intersection_counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "surplusect/bounds_tables.hpp"
#include "surplusect/errors.hpp"

namespace surplusect {

void QuadricSystem::validate() const {
  if (n < 1) throw InvalidArgument("quadric system: n must be >= 1");
  if (static_cast<int>(forms.size()) != n) {
    throw InvalidArgument("quadric system: expected " + std::to_string(n) + " forms");
  }
  for (const auto& q : forms) {
    if (q.rows() != n + 1 || q.cols() != n + 1) {
      throw InvalidArgument("quadric system: forms must be (n+1)x(n+1)");
    }
    if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw InvalidArgument("quadric system: forms must be symmetric");
    }
  }
}

QuadricSystem clifford_quadric_system(const UnitaryMatrix& g) {
  const Eigen::Index size = g.dim();
  if (size < 2) throw DimMismatch("clifford_quadric_system: need an (n+1)x(n+1) matrix, n >= 1");
  const auto& m = g.matrix();
  auto hermitian_row = [&](Eigen::Index row) -> RealMatrix {
    // Re(g_{mj} conj(g_{mk})): the real part of the rank-one Hermitian form of row m.
    const ComplexVector r = m.row(row).transpose();
    return (r * r.adjoint()).real();
  };
  QuadricSystem sys;
  sys.n = static_cast<int>(size - 1);
  const RealMatrix h0 = hermitian_row(0);
  for (Eigen::Index i = 1; i < size; ++i) {
    RealMatrix q = hermitian_row(i) - h0;
    q = 0.5 * (q + q.transpose()).eval();
    sys.forms.push_back(std::move(q));
  }
  return sys;
}

double quadric_residual(const QuadricSystem& sys, const RealVector& a) {
  const RealVector u = a.normalized();
  double worst = 0.0;
  for (const auto& q : sys.forms) worst = std::max(worst, std::abs(u.dot(q * u)));
  return worst;
}

double jacobian_sigma(const QuadricSystem& sys, const RealVector& a) {
  const RealVector u = a.normalized();
  RealMatrix jac(sys.n, sys.n + 1);
  for (int i = 0; i < sys.n; ++i) {
    const RealVector qa = sys.forms[static_cast<std::size_t>(i)] * u;
    jac.row(i) = (qa - u.dot(qa) * u).transpose();
  }
  Eigen::JacobiSVD<RealMatrix> svd(jac);
  return svd.singularValues()(sys.n - 1);
}

double torus_modulus_spread(const UnitaryMatrix& g, const RealVector& a) {
  const ComplexVector x = g.matrix() * a.normalized().cast<Complex>();
  const RealVector moduli = x.cwiseAbs();
  return moduli.maxCoeff() - moduli.minCoeff();
}

bool admissible_clifford_count(int n, int count) {
  return count % 2 == 0 && count >= min_intersections(n) && count <= (1 << n);
}

bool same_witness_sets(const std::vector<RealVector>& a, const std::vector<RealVector>& b,
                       double radius) {
  if (a.size() != b.size()) return false;
  const auto covered = [radius](const std::vector<RealVector>& from,
                                const std::vector<RealVector>& to) {
    return std::all_of(from.begin(), from.end(), [&](const RealVector& x) {
      return std::any_of(to.begin(), to.end(), [&](const RealVector& y) {
        return real_projective_distance(x, y) <= radius;
      });
    });
  };
  return covered(a, b) && covered(b, a);
}

namespace {

void insert_unique(std::vector<RealVector>& roots, const RealVector& candidate) {
  for (const auto& r : roots) {
    if (real_projective_distance(r, candidate) <= thresholds::kDedup) return;
  }
  roots.push_back(candidate);
}

void certify(const QuadricSystem& sys, CountResult& result) {
  result.count = static_cast<int>(result.witnesses.size());
  double sigma = std::numeric_limits<double>::infinity();
  for (const auto& w : result.witnesses) sigma = std::min(sigma, jacobian_sigma(sys, w));
  result.min_jacobian_sigma = result.witnesses.empty() ? 0.0 : sigma;
  result.transverse = !result.degenerate &&
                      (result.witnesses.empty() || sigma > thresholds::kTransversality);
}

// ---------------------------------------------------------------------------
// Conic pencil (n = 2)

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

Mat3 adjugate(const Mat3& m) {
  Mat3 adj;
  adj(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  adj(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
  adj(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
  adj(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
  adj(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
  adj(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
  adj(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
  adj(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
  adj(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return adj;
}

// Real roots of s^3 + p2 s^2 + p1 s + p0, polished by Newton.
std::vector<double> real_cubic_roots(double p2, double p1, double p0) {
  Mat3 companion;
  companion << 0, 0, -p0, 1, 0, -p1, 0, 1, -p2;
  Eigen::EigenSolver<Mat3> es(companion, false);
  std::vector<double> roots;
  for (int i = 0; i < 3; ++i) {
    const auto z = es.eigenvalues()(i);
    if (std::abs(z.imag()) > 1e-6 * (1.0 + std::abs(z.real()))) continue;
    double s = z.real();
    for (int it = 0; it < 4; ++it) {
      const double f = ((s + p2) * s + p1) * s + p0;
      const double df = (3.0 * s + 2.0 * p2) * s + p1;
      if (df == 0.0) break;
      const double next = s - f / df;
      if (std::abs(((next + p2) * next + p1) * next + p0) >= std::abs(f)) break;
      s = next;
    }
    roots.push_back(s);
  }
  return roots;
}

struct SplitConic {
  Vec3 vertex;                // kernel of the singular member
  Vec3 line_plus, line_minus; // line normals when the member is a real line pair
  Mat3 other;                 // complementary pencil member
  bool line_pair = false;
  double score = -1.0;        // min |nonzero eigenvalue|
};

// One orthonormal basis of the plane orthogonal to `normal`.
std::pair<Vec3, Vec3> plane_basis(const Vec3& normal) {
  Eigen::Index k = 0;
  normal.cwiseAbs().minCoeff(&k);
  const Vec3 u = normal.cross(Vec3::Unit(k)).normalized();
  return {u, normal.cross(u)};
}

// Points of the line {normal . x = 0} lying on the conic `other`.
bool intersect_line(const Vec3& normal, const Mat3& other, std::vector<Vec3>& out) {
  const auto [u, w] = plane_basis(normal.normalized());
  Eigen::Matrix<double, 3, 2> basis;
  basis.col(0) = u;
  basis.col(1) = w;
  const Eigen::Matrix2d form = basis.transpose() * other * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(form);
  const double m0 = es.eigenvalues()(0);
  const double m1 = es.eigenvalues()(1);
  const double scale = std::max(std::abs(m0), std::abs(m1));
  if (scale < 1e-12) return false;  // the whole line lies on the other conic
  const Eigen::Vector2d v0 = es.eigenvectors().col(0);
  const Eigen::Vector2d v1 = es.eigenvectors().col(1);
  if (std::min(std::abs(m0), std::abs(m1)) <= 1e-12 * scale) {
    // tangency: one double point, left for the transversality check to reject
    out.push_back(basis * (std::abs(m0) < std::abs(m1) ? v0 : v1));
  } else if (m0 < 0.0 && m1 > 0.0) {
    const double r = std::sqrt(-m0 / m1);
    out.push_back(basis * (v0 + r * v1));
    out.push_back(basis * (v0 - r * v1));
  }
  return true;
}

// Newton on (x^T A x, x^T B x, |x|^2 - 1) starting from a near-root.
Vec3 polish_conic_point(const Mat3& a, const Mat3& b, Vec3 x) {
  x.normalize();
  for (int it = 0; it < 4; ++it) {
    const Vec3 ax = a * x;
    const Vec3 bx = b * x;
    Vec3 f(x.dot(ax), x.dot(bx), x.squaredNorm() - 1.0);
    Mat3 jac;
    jac.row(0) = 2.0 * ax.transpose();
    jac.row(1) = 2.0 * bx.transpose();
    jac.row(2) = 2.0 * x.transpose();
    Eigen::FullPivLU<Mat3> lu(jac);
    if (!lu.isInvertible()) break;
    const Vec3 next = (x - lu.solve(f)).normalized();
    const double before = std::max(std::abs(f(0)), std::abs(f(1)));
    const double after = std::max(std::abs(next.dot(a * next)), std::abs(next.dot(b * next)));
    if (!(after < before)) break;
    x = next;
  }
  return x;
}

}  // namespace

CountResult count_conic_pencil(const QuadricSystem& sys) {
  sys.validate();
  if (sys.n != 2) throw InvalidArgument("count_conic_pencil: requires n = 2");
  CountResult result;
  const double n1 = sys.forms[0].norm();
  const double n2 = sys.forms[1].norm();
  if (n1 < 1e-12 || n2 < 1e-12) {
    result.degenerate = true;
    return result;
  }
  const Mat3 a = sys.forms[0] / n1;
  const Mat3 b = sys.forms[1] / n2;
  const auto member = [&](double theta) -> Mat3 {
    return std::cos(theta) * a + std::sin(theta) * b;
  };

  // Dehomogenize the pencil at the sampled member farthest from singular, so
  // the cubic below has a leading coefficient bounded away from zero.
  double alpha = 0.0;
  double best_det = -1.0;
  for (int k = 0; k < 12; ++k) {
    const double theta = k * std::numbers::pi / 12.0;
    const double d = std::abs(member(theta).determinant());
    if (d > best_det) {
      best_det = d;
      alpha = theta;
    }
  }
  if (best_det < 1e-14) {
    result.degenerate = true;
    return result;
  }
  const Mat3 a1 = member(alpha);
  const Mat3 b1 = member(alpha + 0.5 * std::numbers::pi);
  // det(s a1 + b1) = c3 s^3 + c2 s^2 + c1 s + c0
  const double c3 = a1.determinant();
  const double c2 = (b1 * adjugate(a1)).trace();
  const double c1 = (adjugate(b1) * a1).trace();
  const double c0 = b1.determinant();

  SplitConic best;
  for (double s : real_cubic_roots(c2 / c3, c1 / c3, c0 / c3)) {
    const double norm = std::hypot(s, 1.0);
    const double cs = s / norm;
    const double sn = 1.0 / norm;
    const Mat3 singular = cs * a1 + sn * b1;
    Eigen::SelfAdjointEigenSolver<Mat3> es(singular);
    const Vec3 ev = es.eigenvalues();
    Eigen::Index k0 = 0;
    ev.cwiseAbs().minCoeff(&k0);
    const Eigen::Index k1 = (k0 + 1) % 3;
    const Eigen::Index k2 = (k0 + 2) % 3;
    const double mu1 = ev(k1);
    const double mu2 = ev(k2);
    SplitConic cand;
    cand.vertex = es.eigenvectors().col(k0);
    cand.other = -sn * a1 + cs * b1;
    cand.line_pair = mu1 * mu2 < 0.0;
    cand.score = std::min(std::abs(mu1), std::abs(mu2));
    if (cand.line_pair) {
      const Vec3 e1 = std::sqrt(std::abs(mu1)) * es.eigenvectors().col(k1);
      const Vec3 e2 = std::sqrt(std::abs(mu2)) * es.eigenvectors().col(k2);
      cand.line_plus = e1 + e2;
      cand.line_minus = e1 - e2;
    }
    const bool better = (cand.line_pair && !best.line_pair) ||
                        (cand.line_pair == best.line_pair && cand.score > best.score);
    if (better) best = cand;
  }
  if (best.score < 1e-9) {
    // no rank-2 member isolable at working precision
    result.degenerate = true;
    return result;
  }

  std::vector<Vec3> candidates;
  if (best.line_pair) {
    if (!intersect_line(best.line_plus, best.other, candidates) ||
        !intersect_line(best.line_minus, best.other, candidates)) {
      result.degenerate = true;
      return result;
    }
  } else if (std::abs(best.vertex.dot(best.other * best.vertex)) <= 1e-9) {
    // complex-conjugate line pair: only the real vertex can be common
    candidates.push_back(best.vertex);
  }

  for (const Vec3& c : candidates) {
    const Vec3 x = polish_conic_point(a, b, c);
    const RealVector w = canonical_real_point(x);
    if (quadric_residual(sys, w) > thresholds::kWitnessResidual) {
      result.degenerate = true;
      continue;
    }
    insert_unique(result.witnesses, w);
  }
  certify(sys, result);
  return result;
}

// ---------------------------------------------------------------------------
// Multistart Newton (general n)

namespace {

constexpr int kMaxSize = 6;
using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxSize, 1>;
using SmallMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxSize, kMaxSize>;

class QuadricNewton {
 public:
  explicit QuadricNewton(const QuadricSystem& sys) : n_(sys.n), size_(sys.n + 1) {
    for (const auto& q : sys.forms) forms_.emplace_back(q);
  }

  // F(a) = (a^T Q_i a, |a|^2 - 1); Jacobian rows 2 (Q_i a)^T, 2 a^T.
  void evaluate(const SmallVec& a, SmallVec& f, SmallMat* jac) const {
    for (int i = 0; i < n_; ++i) {
      const SmallVec qa = forms_[static_cast<std::size_t>(i)] * a;
      f(i) = a.dot(qa);
      if (jac) jac->row(i) = 2.0 * qa.transpose();
    }
    f(n_) = a.squaredNorm() - 1.0;
    if (jac) jac->row(n_) = 2.0 * a.transpose();
  }

  std::optional<SmallVec> solve(SmallVec a) const {
    SmallVec f(size_), trial_f(size_);
    SmallMat jac(size_, size_);
    evaluate(a, f, &jac);
    double fnorm = f.norm();
    bool polished = false;
    for (int iter = 0; iter < 80; ++iter) {
      const bool converged = f.cwiseAbs().maxCoeff() <= thresholds::kNewtonResidual;
      if (converged && polished) return a;
      Eigen::PartialPivLU<SmallMat> lu(jac);
      if (!(lu.rcond() > 1e-14)) return converged ? std::optional<SmallVec>(a) : std::nullopt;
      const SmallVec step = lu.solve(-f);
      double t = 1.0;
      for (;;) {
        const SmallVec trial = a + t * step;
        evaluate(trial, trial_f, nullptr);
        const double trial_norm = trial_f.norm();
        if (trial_norm <= (1.0 - 1e-4 * t) * fnorm) {
          a = trial;
          fnorm = trial_norm;
          break;
        }
        t *= 0.5;
        if (t < 1e-4) return converged ? std::optional<SmallVec>(a) : std::nullopt;
      }
      polished = converged;
      evaluate(a, f, &jac);
    }
    return f.cwiseAbs().maxCoeff() <= thresholds::kNewtonResidual ? std::optional<SmallVec>(a)
                                                                  : std::nullopt;
  }

 private:
  int n_;
  int size_;
  std::vector<SmallMat> forms_;
};

}  // namespace

CountResult count_clifford_multistart(const QuadricSystem& sys, int starts_per_dim,
                                      const RngState& rng) {
  sys.validate();
  if (sys.n > 5) throw InvalidArgument("count_clifford_multistart: n must be <= 5");
  if (starts_per_dim < 100) throw InvalidArgument("count_clifford_multistart: starts_per_dim >= 100");
  const QuadricNewton newton(sys);
  const long total = static_cast<long>(starts_per_dim) << sys.n;
  auto engine = rng.engine();
  long converged = 0;
  CountResult result;
  for (long s = 0; s < total; ++s) {
    const RealVector start = random_unit_vector(sys.n + 1, engine);
    const auto root = newton.solve(SmallVec(start));
    if (!root) continue;
    ++converged;
    const RealVector w = canonical_real_point(RealVector(*root));
    if (quadric_residual(sys, w) > thresholds::kWitnessResidual) continue;
    insert_unique(result.witnesses, w);
  }
  if (converged * 100 < total) {
    throw BudgetExceeded("count_clifford_multistart: Newton converged from only " +
                         std::to_string(converged) + " of " + std::to_string(total) + " starts");
  }
  // more isolated roots than Bezout allows means a positive-dimensional component
  if (static_cast<long>(result.witnesses.size()) > (1L << sys.n)) result.degenerate = true;
  certify(sys, result);
  return result;
}

// ---------------------------------------------------------------------------

RpnCount count_rpn_rpn(const UnitaryMatrix& g) {
  const ComplexMatrix& m = g.matrix();
  const ComplexMatrix sym = m.adjoint() * m.conjugate();
  Eigen::ComplexEigenSolver<ComplexMatrix> es(sym);
  const ComplexVector lambda = es.eigenvalues();
  const Eigen::Index size = lambda.size();
  RpnCount result;
  result.min_eigen_gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < size; ++i) {
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < size; ++j) {
      if (j != i) gap = std::min(gap, std::abs(lambda(i) - lambda(j)));
    }
    result.min_eigen_gap = std::min(result.min_eigen_gap, gap);
    if (gap <= thresholds::kEigenGap) {
      result.degenerate = true;
      continue;
    }
    // a simple eigenspace of a symmetric unitary matrix is conjugation-stable
    ComplexVector v = es.eigenvectors().col(i);
    Eigen::Index k = 0;
    v.cwiseAbs().maxCoeff(&k);
    v *= std::conj(v(k)) / std::abs(v(k));
    const RealVector b = canonical_real_point(v.real());
    result.parameters.push_back(b);
    result.witnesses.emplace_back(m * b.cast<Complex>());
  }
  result.count = static_cast<int>(result.parameters.size());
  return result;
}

}  // namespace surplusect
