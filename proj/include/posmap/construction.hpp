#pragma once

// Kossakowski maps: diagonal-type maps whose shifted coefficient matrix
// b = a - J is orthogonal with all row and column sums -1. They are built
// from R in O(n-1), from orthonormal bases tilted against e = (1,...,1)/sqrt(n),
// or from equiangular frames in the hyperplane orthogonal to e.

#include <optional>
#include <random>
#include <span>
#include <vector>

#include "posmap/map_core.hpp"

namespace posmap {

inline constexpr double kOrthogonalityTol = 1e-10;
inline constexpr double kSumTol = 1e-10;
inline constexpr double kOsidTol = 1e-9;

/// Real square matrix with M M^T = I to kOrthogonalityTol.
class OrthogonalMatrix {
 public:
  /// Throws ConstraintViolation if the rows are not orthonormal.
  explicit OrthogonalMatrix(RealMatrix m);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const RealMatrix& matrix() const noexcept { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  RealMatrix m_;
};

/// Haar-distributed element of O(dim): QR of a Gaussian matrix with the
/// diagonal of R made positive.
OrthogonalMatrix random_orthogonal(int dim, std::mt19937_64& rng);

/// [[cos phi, sin phi], [-sin phi, cos phi]].
OrthogonalMatrix rotation(double phi);

/// Block-diagonal rotation in O(dim) with one 2x2 block per angle, padded
/// with ones. Requires angles.size() <= dim / 2.
OrthogonalMatrix block_rotation(int dim, std::span<const double> angles);

/// n vectors b(0..n-1) in R^n, stored as rows: orthonormal and each with
/// inner product -1/sqrt(n) against e.
class BasisFamily {
 public:
  explicit BasisFamily(RealMatrix rows);
  int n() const noexcept { return static_cast<int>(rows_.rows()); }
  const RealMatrix& vectors() const noexcept { return rows_; }

 private:
  RealMatrix rows_;
};

/// n vectors g(0..n-1) in the hyperplane orthogonal to e, stored as rows,
/// with |g|^2 = 1 - 1/n and pairwise cosine -1/(n-1).
class FrameFamily {
 public:
  explicit FrameFamily(RealMatrix rows);
  int n() const noexcept { return static_cast<int>(rows_.rows()); }
  const RealMatrix& vectors() const noexcept { return rows_; }

 private:
  RealMatrix rows_;
};

/// The diagonal generators F_1..F_{n-1} of the Cartan subalgebra,
/// F_l = (sum_{k<l} E_kk - l E_ll) / sqrt(l (l+1)).
std::vector<ComplexMatrix> f_basis(int n);

/// Diagonals of f_basis(n) as the rows of an (n-1) x n real matrix. The rows
/// are an orthonormal basis of the hyperplane orthogonal to e.
RealMatrix f_vectors(int n);

/// a_ij = (n-1)/n + sum_{ab} (F_a)_ii R_ab (F_b)_jj with n = R.dim() + 1.
DiagonalTypeMap kossakowski_from_orthogonal(const OrthogonalMatrix& r);

struct OsidResult {
  bool ok;
  double residual;  // max_ij |sum_k a_ik a_jk - delta_ij - (n - 2)|
};

OsidResult verify_osid(const RealMatrix& a);

/// b = a - J. Requires verify_osid(a) and row/column sums n - 1; the
/// ConstraintViolation message names the failing constraint.
OrthogonalMatrix b_from_a(const DiagonalTypeMap& map);

/// a = b + J. Requires every row and column sum of b to equal -1.
DiagonalTypeMap a_from_b(const OrthogonalMatrix& b);

/// b_ij = b(i)_j.
DiagonalTypeMap map_from_basis(const BasisFamily& basis);

/// Canonical frame g(i) = e_i - (1/n) (1,...,1).
FrameFamily equiangular_frame(int n);

/// b(i) = g(i) - e / sqrt(n).
BasisFamily basis_from_frame(const FrameFamily& frame);

/// b = S^T diag(-1, R) S where the rows of S are e followed by an
/// orthonormal basis of the hyperplane orthogonal to e (default f_vectors).
OrthogonalMatrix rotation_embedding(
    const OrthogonalMatrix& r,
    const std::optional<RealMatrix>& hyperplane_basis = std::nullopt);

}  // namespace posmap
