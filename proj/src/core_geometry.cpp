#include "surplusect/core_geometry.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "surplusect/errors.hpp"

namespace surplusect {

ProjectivePoint::ProjectivePoint(const ComplexVector& representative) {
  const double norm = representative.norm();
  if (representative.size() == 0 || norm == 0.0 || !std::isfinite(norm)) {
    throw ZeroVector("projective point needs a nonzero finite representative");
  }
  rep_ = representative / norm;
  for (Eigen::Index i = 0; i < rep_.size(); ++i) {
    const double modulus = std::abs(rep_[i]);
    if (modulus > kPhaseThreshold) {
      rep_ *= std::conj(rep_[i]) / modulus;
      rep_[i] = Complex(modulus, 0.0);
      break;
    }
  }
}

namespace {

// atan2 keeps resolution near zero distance, where arccos loses half the digits.
double angle_from(double cosine, double sine) { return std::atan2(sine, cosine); }

}  // namespace

double projective_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
  if (p.size() != q.size()) throw DimMismatch("projective_distance: dimension mismatch");
  const Complex inner = p.representative().dot(q.representative());
  const ComplexVector residual = q.representative() - inner * p.representative();
  return angle_from(std::abs(inner), residual.norm());
}

double real_projective_distance(const RealVector& a, const RealVector& b) {
  if (a.size() != b.size()) throw DimMismatch("real_projective_distance: dimension mismatch");
  const RealVector ua = a.normalized();
  const RealVector ub = b.normalized();
  const double inner = ua.dot(ub);
  return angle_from(std::abs(inner), (ub - inner * ua).norm());
}

RealVector canonical_real_point(const RealVector& a) {
  const double norm = a.norm();
  if (norm == 0.0) throw ZeroVector("canonical_real_point: zero vector");
  RealVector out = a / norm;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (std::abs(out[i]) > ProjectivePoint::kPhaseThreshold) {
      if (out[i] < 0) out = -out;
      break;
    }
  }
  return out;
}

UnitaryMatrix::UnitaryMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw NotUnitary("unitary matrix must be square and nonempty");
  }
  const double defect = unitarity_defect(m_);
  if (!(defect <= kTolerance)) {
    throw NotUnitary("matrix is not unitary: ||M^H M - I||_inf = " + std::to_string(defect));
  }
}

double UnitaryMatrix::unitarity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  const ComplexMatrix gram = m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols());
  return gram.cwiseAbs().rowwise().sum().maxCoeff();
}

UnitaryMatrix UnitaryMatrix::identity(Eigen::Index dim) {
  return UnitaryMatrix(ComplexMatrix::Identity(dim, dim));
}

UnitaryMatrix UnitaryMatrix::diagonal(const RealVector& phases) {
  ComplexMatrix m = ComplexMatrix::Zero(phases.size(), phases.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) m(i, i) = std::polar(1.0, phases[i]);
  return UnitaryMatrix(std::move(m));
}

UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b) {
  if (a.dim() != b.dim()) throw DimMismatch("unitary product: dimension mismatch");
  return UnitaryMatrix(a.m_ * b.m_);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngState RngState::derive(std::uint64_t salt) const {
  return RngState{splitmix64(seed ^ splitmix64(salt + 0x632be59bd9b4e019ULL)), stream};
}

std::mt19937_64 RngState::engine() const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

UnitaryMatrix haar_unitary(int dim, const RngState& rng) {
  if (dim < 2) throw InvalidArgument("haar_unitary: dim must be >= 2");
  auto engine = rng.engine();
  std::normal_distribution<double> normal(0.0, std::numbers::sqrt2 / 2.0);
  ComplexMatrix z(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) {
      const double re = normal(engine);
      const double im = normal(engine);
      z(i, j) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double modulus = std::abs(d);
    q.col(j) *= modulus > 0 ? d / modulus : Complex(1.0, 0.0);
  }
  return UnitaryMatrix(std::move(q));
}

RealVector random_unit_vector(int dim, std::mt19937_64& engine) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RealVector v(dim);
  double norm = 0.0;
  do {
    for (int i = 0; i < dim; ++i) v[i] = normal(engine);
    norm = v.norm();
  } while (norm < 1e-12);
  return v / norm;
}

double vol_rpn(int n) {
  if (n < 1) throw InvalidArgument("vol_rpn: n must be >= 1");
  const double half = 0.5 * (n + 1);
  return std::pow(std::numbers::pi, half) / std::tgamma(half);
}

}  // namespace surplusect
