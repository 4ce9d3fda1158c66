#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

namespace posmap {

using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

// Largest matrix dimension the library is tuned for (dense algorithms).
inline constexpr int kMaxDim = 64;

/// A linear map on M_n(C) of diagonal type:
///   E_ii -> sum_j a_ij E_jj,   E_ij -> -E_ij  (i != j).
///
/// The coefficient matrix is real, so the map is Hermiticity preserving.
/// Instances are immutable.
class DiagonalTypeMap {
 public:
  /// Throws DimensionError unless `a` is square with 2 <= n <= kMaxDim, and
  /// Error if an entry is not finite.
  explicit DiagonalTypeMap(RealMatrix a);

  /// Circulant coefficients a_ij = alphas[(i - j) mod n].
  static DiagonalTypeMap circulant(std::span<const double> alphas);

  int n() const noexcept { return static_cast<int>(a_.rows()); }
  const RealMatrix& a() const noexcept { return a_; }
  double operator()(int i, int j) const { return a_(i, j); }

  bool is_nonnegative() const { return a_.minCoeff() >= 0.0; }

  /// alphas with a_ij = alphas[(i - j) mod n] if the matrix is circulant to
  /// within `tol`, otherwise nullopt.
  std::optional<std::vector<double>> circulant_params(double tol = 1e-12) const;

  /// Map with coefficients a_{i, perm[j]}.
  DiagonalTypeMap permute_columns(std::span<const int> perm) const;

  friend bool operator==(const DiagonalTypeMap& x, const DiagonalTypeMap& y) {
    return x.a_ == y.a_;
  }

 private:
  RealMatrix a_;
};

/// Matrix unit E_ij = |e_i><e_j| in M_n(C).
ComplexMatrix matrix_unit(int n, int i, int j);

/// Lambda(X). Throws DimensionError if X is not n x n.
ComplexMatrix apply(const DiagonalTypeMap& map, const ComplexMatrix& x);

/// d_ii = a_ii and d_ij = -1 off the diagonal.
struct DMatrix {
  RealMatrix entries;
};

DMatrix d_matrix(const DiagonalTypeMap& map);

/// Choi matrix C = sum_ij E_ij (x) Lambda(E_ij), of size n^2, indexed as
/// C(i*n + k, j*n + l) = <e_k| Lambda(E_ij) |e_l>.
ComplexMatrix choi_matrix(const DiagonalTypeMap& map);

struct PsdResult {
  bool psd;
  double min_eigenvalue;
  double tolerance;  // eigenvalues >= -tolerance count as nonnegative
};

// PSD iff lambda_min >= -1e-9 * max(1, ||M||_inf).
PsdResult psd_test(const RealMatrix& m);
PsdResult psd_test(const ComplexMatrix& m);

}  // namespace posmap
