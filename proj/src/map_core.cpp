#include "posmap/map_core.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "posmap/errors.hpp"

namespace posmap {

DiagonalTypeMap::DiagonalTypeMap(RealMatrix a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols()) {
    throw DimensionError("coefficient matrix must be square, got " +
                         std::to_string(a_.rows()) + "x" +
                         std::to_string(a_.cols()));
  }
  if (a_.rows() < 2 || a_.rows() > kMaxDim) {
    throw DimensionError("dimension must lie in [2, " +
                         std::to_string(kMaxDim) + "], got " +
                         std::to_string(a_.rows()));
  }
  if (!a_.allFinite()) {
    throw Error("coefficient matrix has non-finite entries");
  }
}

DiagonalTypeMap DiagonalTypeMap::circulant(std::span<const double> alphas) {
  const auto n = static_cast<int>(alphas.size());
  RealMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = alphas[((i - j) % n + n) % n];
  return DiagonalTypeMap(std::move(a));
}

std::optional<std::vector<double>> DiagonalTypeMap::circulant_params(
    double tol) const {
  const int dim = n();
  std::vector<double> alphas(dim);
  for (int k = 0; k < dim; ++k) alphas[k] = a_(k, 0);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (std::abs(a_(i, j) - alphas[((i - j) % dim + dim) % dim]) > tol)
        return std::nullopt;
  return alphas;
}

DiagonalTypeMap DiagonalTypeMap::permute_columns(
    std::span<const int> perm) const {
  const int dim = n();
  if (static_cast<int>(perm.size()) != dim)
    throw DimensionError("permutation length must equal n");
  std::vector<bool> seen(dim, false);
  for (int p : perm) {
    if (p < 0 || p >= dim || seen[p]) throw Error("not a permutation");
    seen[p] = true;
  }
  RealMatrix out(dim, dim);
  for (int j = 0; j < dim; ++j) out.col(j) = a_.col(perm[j]);
  return DiagonalTypeMap(std::move(out));
}

ComplexMatrix matrix_unit(int n, int i, int j) {
  ComplexMatrix e = ComplexMatrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

ComplexMatrix apply(const DiagonalTypeMap& map, const ComplexMatrix& x) {
  const int n = map.n();
  if (x.rows() != n || x.cols() != n) {
    throw DimensionError("apply: map acts on " + std::to_string(n) + "x" +
                         std::to_string(n) + " matrices, got " +
                         std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()));
  }
  ComplexMatrix out = -x;
  const ComplexVector diag = map.a().transpose().cast<std::complex<double>>() *
                             x.diagonal();
  out.diagonal() = diag;
  return out;
}

DMatrix d_matrix(const DiagonalTypeMap& map) {
  const int n = map.n();
  RealMatrix d = RealMatrix::Constant(n, n, -1.0);
  d.diagonal() = map.a().diagonal();
  return {std::move(d)};
}

ComplexMatrix choi_matrix(const DiagonalTypeMap& map) {
  const int n = map.n();
  ComplexMatrix c = ComplexMatrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const ComplexMatrix image = posmap::apply(map, matrix_unit(n, i, j));
      c.block(i * n, j * n, n, n) = image;
    }
  }
  return c;
}

namespace {

template <typename Matrix>
PsdResult psd_impl(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("psd_test: not square");
  const double norm_inf = m.cwiseAbs().rowwise().sum().maxCoeff();
  const double tol = 1e-9 * std::max(1.0, norm_inf);
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("psd_test: eigensolver failed");
  const double lmin = es.eigenvalues().minCoeff();
  return {lmin >= -tol, lmin, tol};
}

}  // namespace

PsdResult psd_test(const RealMatrix& m) { return psd_impl(m); }
PsdResult psd_test(const ComplexMatrix& m) { return psd_impl(m); }

}  // namespace posmap
