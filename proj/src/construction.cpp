#include "posmap/construction.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <utility>

#include "posmap/errors.hpp"

namespace posmap {

namespace {

double max_abs(const RealMatrix& m) { return m.cwiseAbs().maxCoeff(); }

RealVector unit_e(int n) {
  return RealVector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
}

void require_square(const RealMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw DimensionError(std::string(what) + ": matrix must be square");
}

// Largest deviation of the row and column sums from `target`.
void require_sums(const RealMatrix& m, double target, const char* what) {
  const RealVector rows = m.rowwise().sum();
  const RealVector cols = m.colwise().sum().transpose();
  for (Eigen::Index i = 0; i < rows.size(); ++i) {
    const double dr = std::abs(rows(i) - target);
    if (dr > kSumTol) {
      std::ostringstream os;
      os << what << ": row " << i << " sums to " << rows(i) << ", expected "
         << target;
      throw ConstraintViolation(os.str(), dr);
    }
    const double dc = std::abs(cols(i) - target);
    if (dc > kSumTol) {
      std::ostringstream os;
      os << what << ": column " << i << " sums to " << cols(i)
         << ", expected " << target;
      throw ConstraintViolation(os.str(), dc);
    }
  }
}

}  // namespace

OrthogonalMatrix::OrthogonalMatrix(RealMatrix m) : m_(std::move(m)) {
  require_square(m_, "OrthogonalMatrix");
  if (!m_.allFinite()) throw Error("OrthogonalMatrix: non-finite entries");
  const RealMatrix gram = m_ * m_.transpose();
  const double res =
      max_abs(gram - RealMatrix::Identity(m_.rows(), m_.rows()));
  if (res > kOrthogonalityTol) {
    std::ostringstream os;
    os << "matrix is not orthogonal: max |M M^T - I| = " << res;
    throw ConstraintViolation(os.str(), res);
  }
}

OrthogonalMatrix random_orthogonal(int dim, std::mt19937_64& rng) {
  if (dim < 1) throw DimensionError("random_orthogonal: dim must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  RealMatrix g(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<RealMatrix> qr(g);
  RealMatrix q = qr.householderQ();
  const RealMatrix& r = qr.matrixQR();
  for (int k = 0; k < dim; ++k)
    if (r(k, k) < 0.0) q.col(k) = -q.col(k);
  return OrthogonalMatrix(std::move(q));
}

OrthogonalMatrix rotation(double phi) {
  RealMatrix r(2, 2);
  r << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
  return OrthogonalMatrix(std::move(r));
}

OrthogonalMatrix block_rotation(int dim, std::span<const double> angles) {
  if (dim < 1) throw DimensionError("block_rotation: dim must be >= 1");
  if (static_cast<int>(angles.size()) > dim / 2)
    throw DimensionError("block_rotation: at most " + std::to_string(dim / 2) +
                         " angles fit in dimension " + std::to_string(dim));
  RealMatrix r = RealMatrix::Identity(dim, dim);
  for (std::size_t k = 0; k < angles.size(); ++k)
    r.block(2 * k, 2 * k, 2, 2) = rotation(angles[k]).matrix();
  return OrthogonalMatrix(std::move(r));
}

BasisFamily::BasisFamily(RealMatrix rows) : rows_(std::move(rows)) {
  require_square(rows_, "BasisFamily");
  const int n = static_cast<int>(rows_.rows());
  const double ortho =
      max_abs(rows_ * rows_.transpose() - RealMatrix::Identity(n, n));
  if (ortho > kOrthogonalityTol) {
    std::ostringstream os;
    os << "basis is not orthonormal: max |G - I| = " << ortho;
    throw ConstraintViolation(os.str(), ortho);
  }
  const RealVector tilt = rows_ * unit_e(n);
  const double target = -1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(tilt(i) - target);
    if (d > kSumTol) {
      std::ostringstream os;
      os << "basis vector " << i << " has (b, e) = " << tilt(i)
         << ", expected " << target;
      throw ConstraintViolation(os.str(), d);
    }
  }
}

FrameFamily::FrameFamily(RealMatrix rows) : rows_(std::move(rows)) {
  require_square(rows_, "FrameFamily");
  const int n = static_cast<int>(rows_.rows());
  if (n < 2) throw DimensionError("FrameFamily: need n >= 2");
  const double inv_n = 1.0 / n;
  const RealMatrix expected =
      RealMatrix::Identity(n, n) - RealMatrix::Constant(n, n, inv_n);
  const double res = max_abs(rows_ * rows_.transpose() - expected);
  if (res > kOrthogonalityTol) {
    std::ostringstream os;
    os << "frame Gram matrix deviates from I - J/n by " << res;
    throw ConstraintViolation(os.str(), res);
  }
  const double perp = (rows_ * unit_e(n)).cwiseAbs().maxCoeff();
  if (perp > kOrthogonalityTol) {
    std::ostringstream os;
    os << "frame vectors are not orthogonal to e: max |(g, e)| = " << perp;
    throw ConstraintViolation(os.str(), perp);
  }
}

std::vector<ComplexMatrix> f_basis(int n) {
  const RealMatrix f = f_vectors(n);
  std::vector<ComplexMatrix> out;
  out.reserve(n - 1);
  for (int l = 0; l < n - 1; ++l) {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    m.diagonal() = f.row(l).transpose().cast<std::complex<double>>();
    out.push_back(std::move(m));
  }
  return out;
}

RealMatrix f_vectors(int n) {
  if (n < 2) throw DimensionError("f_basis: n must be >= 2");
  RealMatrix f = RealMatrix::Zero(n - 1, n);
  for (int l = 1; l < n; ++l) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int k = 0; k < l; ++k) f(l - 1, k) = scale;
    f(l - 1, l) = -l * scale;
  }
  return f;
}

DiagonalTypeMap kossakowski_from_orthogonal(const OrthogonalMatrix& r) {
  const int n = r.dim() + 1;
  const RealMatrix f = f_vectors(n);
  RealMatrix a = f.transpose() * r.matrix() * f;
  a.array() += static_cast<double>(n - 1) / n;
  return DiagonalTypeMap(std::move(a));
}

OsidResult verify_osid(const RealMatrix& a) {
  require_square(a, "verify_osid");
  const auto n = a.rows();
  RealMatrix target = RealMatrix::Constant(n, n, static_cast<double>(n) - 2.0);
  target.diagonal().array() += 1.0;
  const double res = max_abs(a * a.transpose() - target);
  return {res <= kOsidTol, res};
}

OrthogonalMatrix b_from_a(const DiagonalTypeMap& map) {
  const OsidResult osid = verify_osid(map.a());
  if (!osid.ok) {
    std::ostringstream os;
    os << "coefficients violate sum_k a_ik a_jk = delta_ij + n - 2: residual "
       << osid.residual;
    throw ConstraintViolation(os.str(), osid.residual);
  }
  require_sums(map.a(), map.n() - 1.0, "b_from_a");
  RealMatrix b = map.a();
  b.array() -= 1.0;
  return OrthogonalMatrix(std::move(b));
}

DiagonalTypeMap a_from_b(const OrthogonalMatrix& b) {
  require_sums(b.matrix(), -1.0, "a_from_b");
  RealMatrix a = b.matrix();
  a.array() += 1.0;
  return DiagonalTypeMap(std::move(a));
}

DiagonalTypeMap map_from_basis(const BasisFamily& basis) {
  return a_from_b(OrthogonalMatrix(basis.vectors()));
}

FrameFamily equiangular_frame(int n) {
  if (n < 2) throw DimensionError("equiangular_frame: n must be >= 2");
  RealMatrix g = RealMatrix::Identity(n, n);
  g.array() -= 1.0 / n;
  return FrameFamily(std::move(g));
}

BasisFamily basis_from_frame(const FrameFamily& frame) {
  const int n = frame.n();
  RealMatrix b = frame.vectors();
  b.array() -= 1.0 / n;  // e / sqrt(n) has every component 1/n
  return BasisFamily(std::move(b));
}

OrthogonalMatrix rotation_embedding(
    const OrthogonalMatrix& r, const std::optional<RealMatrix>& hyperplane_basis) {
  const int n = r.dim() + 1;
  RealMatrix s(n, n);
  s.row(0) = unit_e(n).transpose();
  if (hyperplane_basis) {
    const RealMatrix& h = *hyperplane_basis;
    if (h.rows() != n - 1 || h.cols() != n)
      throw DimensionError("rotation_embedding: hyperplane basis must be " +
                           std::to_string(n - 1) + " vectors in R^" +
                           std::to_string(n));
    s.bottomRows(n - 1) = h;
    const double res = max_abs(s * s.transpose() - RealMatrix::Identity(n, n));
    if (res > kOrthogonalityTol) {
      std::ostringstream os;
      os << "hyperplane basis is not orthonormal and orthogonal to e: "
            "residual "
         << res;
      throw ConstraintViolation(os.str(), res);
    }
  } else {
    s.bottomRows(n - 1) = f_vectors(n);
  }
  RealMatrix big = RealMatrix::Zero(n, n);
  big(0, 0) = -1.0;
  big.bottomRightCorner(n - 1, n - 1) = r.matrix();
  return OrthogonalMatrix(s.transpose() * big * s);
}

}  // namespace posmap
